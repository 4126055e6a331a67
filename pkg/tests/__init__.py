"""Tests for cubic_prf_lib."""
