"""
Root conftest.py for cubic-prf-lib tests.

Provides pytest hooks and shared fixtures for all tests.

Hooks:
- pytest_addoption: Adds --runslow CLI flag for the larger censuses
- pytest_configure: Registers markers programmatically
- pytest_collection_modifyitems: Skips slow tests unless --runslow is provided

Fixtures:
- f2, f3, f4, f5, f7, f8, f9: the small fields with their default moduli
- parse: Parse a function over a field
- reset_config: Fresh configuration singleton and environment per test
"""

import os

import pytest

from cubic_prf_lib.config_manager import CubicPrfConfig
from cubic_prf_lib.gf import field_create
from cubic_prf_lib.projfunc import parse_ratfunc


# =============================================================================
# Pytest Hooks
# =============================================================================


def pytest_addoption(parser):
    """Add custom CLI options for pytest."""
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="Run the q = 7, 8, 9 censuses and the full selfcheck",
    )


def pytest_configure(config):
    """Register custom markers."""
    # Core markers
    config.addinivalue_line("markers", "unit: Unit tests (fast, no external calls)")
    config.addinivalue_line("markers", "slow: Slow-running tests")

    # Component markers
    config.addinivalue_line("markers", "gf: Finite field tests")
    config.addinivalue_line("markers", "polyring: Polynomial ring tests")
    config.addinivalue_line("markers", "projfunc: Rational function and Mobius tests")
    config.addinivalue_line("markers", "cubicperm: Permutation criterion and canonical form tests")
    config.addinivalue_line("markers", "census: Census, orbit and completeness tests")
    config.addinivalue_line("markers", "cli: Command-line tests")
    config.addinivalue_line("markers", "config: Configuration tests")
    config.addinivalue_line("markers", "formatters: Output formatter tests")
    config.addinivalue_line("markers", "validators: Input validator tests")
    config.addinivalue_line("markers", "errors: Error handler tests")
    config.addinivalue_line("markers", "batch: Batch processor tests")


def pytest_collection_modifyitems(config, items):
    """Modify test collection based on CLI flags."""
    if not config.getoption("--runslow"):
        skip_slow = pytest.mark.skip(reason="need --runslow option to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)


# =============================================================================
# Shared Fixtures
# =============================================================================


@pytest.fixture
def f2():
    return field_create(2)


@pytest.fixture
def f3():
    return field_create(3)


@pytest.fixture
def f4():
    """F_4 = F_2[z]/(z^2 + z + 1)."""
    return field_create(2, 2)


@pytest.fixture
def f5():
    return field_create(5)


@pytest.fixture
def f7():
    return field_create(7)


@pytest.fixture
def f8():
    """F_8 = F_2[z]/(z^3 + z + 1)."""
    return field_create(2, 3)


@pytest.fixture
def f9():
    """F_9 = F_3[z]/(z^2 + 1)."""
    return field_create(3, 2)


@pytest.fixture
def parse():
    """parse(text, ctx) -> RatFunc."""
    return parse_ratfunc


@pytest.fixture(autouse=True)
def reset_config(monkeypatch):
    """No settings files, no CUBICPRF_* variables and a fresh singleton."""
    for key in list(os.environ):
        if key.startswith("CUBICPRF_"):
            monkeypatch.delenv(key)
    monkeypatch.setattr(CubicPrfConfig, "_find_config_dir", lambda self: None)
    CubicPrfConfig.reset_instance()
    yield
    CubicPrfConfig.reset_instance()
