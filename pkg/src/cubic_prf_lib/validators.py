"""
Input Validators for cubic-prf-lib

Validation of user input arriving from the command line or from callers:
integers, choices, field specs and extension degrees. Every failure raises
ValidationError with ``operation="validation"`` and the offending field in
``details``.
"""

from __future__ import annotations

import re
from typing import Any, Optional, Union

from sympy import isprime, perfect_power

from cubic_prf_lib.error_handler import ParseError, ValidationError

_FIELD_SPEC_RE = re.compile(
    r"^\s*(?P<p>\d+)\s*(?:\^\s*(?P<k>\d+))?\s*(?::\s*\[(?P<mod>[^\]]*)\])?\s*$"
)


def validate_required(value: Optional[Any], field_name: str = "value") -> str:
    """
    Validate that a value is provided and not empty.

    Returns:
        Stripped value string

    Raises:
        ValidationError: If value is None or empty
    """
    if value is None:
        raise ValidationError(f"{field_name} is required", operation="validation", details={"field": field_name})

    stripped = str(value).strip()
    if not stripped:
        raise ValidationError(f"{field_name} cannot be empty", operation="validation", details={"field": field_name})

    return stripped


def validate_choice(value: str, choices: list[str], field_name: str = "value") -> str:
    """
    Validate that value is one of allowed choices (case-insensitive).

    Returns:
        The matching entry of ``choices``
    """
    value = validate_required(value, field_name)

    lower_value = value.lower()
    for choice in choices:
        if choice.lower() == lower_value:
            return choice

    raise ValidationError(
        f"Invalid {field_name}: '{value}'. Choose from: {', '.join(choices)}",
        operation="validation",
        details={"field": field_name, "value": value, "valid_choices": choices},
    )


def validate_int(
    value: Union[str, int, None],
    field_name: str = "value",
    min_value: Optional[int] = None,
    max_value: Optional[int] = None,
) -> int:
    """
    Validate that a value is an integer within an optional inclusive range.

    Raises:
        ValidationError: If value is not an integer or outside the range.
    """
    if value is None:
        raise ValidationError(f"{field_name} is required", operation="validation", details={"field": field_name})
    if isinstance(value, bool):
        raise ValidationError(
            f"{field_name} must be an integer (got: {value})",
            operation="validation", details={"field": field_name, "value": str(value)},
        )

    try:
        int_value = int(value)
    except (ValueError, TypeError) as e:
        raise ValidationError(
            f"{field_name} must be an integer (got: {value})",
            operation="validation", details={"field": field_name, "value": str(value)},
        ) from e

    if min_value is not None and int_value < min_value:
        raise ValidationError(
            f"{field_name} must be at least {min_value} (got: {int_value})",
            operation="validation", details={"field": field_name, "value": str(int_value)},
        )

    if max_value is not None and int_value > max_value:
        raise ValidationError(
            f"{field_name} must be at most {max_value} (got: {int_value})",
            operation="validation", details={"field": field_name, "value": str(int_value)},
        )

    return int_value


def validate_prime_power(q: int, field_name: str = "q") -> tuple[int, int]:
    """
    Split a prime power into (p, k).

    Raises:
        ValidationError: If q is not a prime power.
    """
    q = validate_int(q, field_name, min_value=2)
    if isprime(q):
        return q, 1
    split = perfect_power(q)
    if split and isprime(split[0]):
        return int(split[0]), int(split[1])
    raise ValidationError(
        f"{field_name} must be a prime power (got: {q})",
        operation="validation", details={"field": field_name, "value": str(q)},
    )


def validate_field_spec(text: str) -> tuple[int, int, Optional[list[int]]]:
    """
    Parse a field spec: ``"p^k"``, ``"p^k:[c0,...,1]"``, a prime ``"7"`` or a prime power ``"9"``.

    Primality of p is left to field construction, which raises FieldError.

    Returns:
        (p, k, modulus) where modulus is None or ascending coefficients

    Raises:
        ParseError: If the text does not follow the grammar.
    """
    text = validate_required(text, "field spec")
    match = _FIELD_SPEC_RE.match(text)
    if not match:
        position = _first_bad_column(text)
        raise ParseError(
            f"Malformed field spec '{text}'",
            text=text, position=position, operation="validation",
            details={"field": "field spec", "value": text},
        )

    base = int(match.group("p"))
    if match.group("k") is not None:
        p, k = base, validate_int(match.group("k"), "extension degree", min_value=1)
    elif isprime(base):
        p, k = base, 1
    else:
        p, k = validate_prime_power(base, "field size")

    modulus: Optional[list[int]] = None
    if match.group("mod") is not None:
        raw = [c.strip() for c in match.group("mod").split(",") if c.strip()]
        try:
            modulus = [int(c) for c in raw]
        except ValueError as e:
            raise ParseError(
                f"Modulus coefficients must be integers in '{text}'",
                text=text, position=text.index("["), operation="validation",
            ) from e
    return p, k, modulus


def validate_extension_degree(n: Union[str, int]) -> int:
    """Validate an extension degree n >= 1."""
    return validate_int(n, "extension degree", min_value=1)


def _first_bad_column(text: str) -> int:
    for i, ch in enumerate(text):
        if not (ch.isdigit() or ch in "^:[], "):
            return i
    return len(text)
