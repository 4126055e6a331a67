"""
Error Handling for cubic-prf-lib

Provides:
- Exception hierarchy for field, parsing and classification failures
- Exit-code mapping for the command line (1 domain, 2 usage, 3 crosscheck)
- Formatted error output on stderr
- ErrorContext for stamping the running operation onto escaping errors

Usage:
    from cubic_prf_lib.error_handler import handle_errors, CubicPrfError

    @handle_errors
    def main():
        ...
"""

from __future__ import annotations

import functools
import sys
import traceback
from typing import Any, Callable, Optional


class CubicPrfError(Exception):
    """
    Base exception for every error raised by the library.

    Subclasses set ``exit_code`` to choose the process status used by the CLI.
    """

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        operation: Optional[str] = None,
        details: Optional[dict[str, Any]] = None,
    ):
        self.message = message
        self.operation = operation
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.operation:
            return f"[{self.operation}] {self.message}"
        return self.message


class FieldError(CubicPrfError):
    """Raised for invalid field construction or illegal field arithmetic."""
    pass


class ContextMismatchError(FieldError):
    """Raised when elements or polynomials of different fields are combined."""
    pass


class ValidationError(CubicPrfError):
    """Raised for malformed user input."""

    exit_code = 2


class ParseError(ValidationError):
    """Raised when a field spec or function expression cannot be parsed."""

    def __init__(self, message: str, text: str = "", position: int = 0, **kwargs: Any):
        super().__init__(message, **kwargs)
        self.text = text
        self.position = position
        self.details.setdefault("position", position)

    def caret(self) -> str:
        """Two-line rendering of the input with a caret under the offending column."""
        return f"{self.text}\n{' ' * self.position}^"


class GuardExceededError(CubicPrfError):
    """Raised when a configured size guard would be exceeded."""
    pass


class ScopeError(CubicPrfError):
    """Raised when an operation is requested outside the range where it is defined."""
    pass


class NotPermutationError(CubicPrfError):
    """Raised when an operation requires a permutation and did not get one."""
    pass


class CrosscheckError(CubicPrfError):
    """Raised when brute force and the closed-form criterion disagree."""

    exit_code = 3


class InternalConsistencyError(CubicPrfError):
    """Raised when an algebraic identity that must hold fails."""
    pass


_HINTS: dict[type[CubicPrfError], str] = {
    ContextMismatchError: "Build every operand from the same field spec",
    ParseError: "Functions use x, w, integers, + - * / ^ and parentheses",
    GuardExceededError: "Raise the guard with --max-q or in .cubicprf/settings.json",
    ScopeError: "Use --mode verify or a field of odd characteristic",
    NotPermutationError: "Run 'test' first to see the verdict",
    CrosscheckError: "This contradicts the classification; please report the input",
}


def print_error(
    message: str,
    error: Optional[BaseException] = None,
    suggestion: Optional[str] = None,
    show_traceback: bool = False,
) -> None:
    """
    Print a formatted error message to stderr.

    Args:
        message: The main error message
        error: Optional exception to detail
        suggestion: Optional suggestion for resolution
        show_traceback: Whether to print the full traceback
    """
    print(f"\n[ERROR] {message}", file=sys.stderr)

    if error is not None:
        print(f"  Details: {error}", file=sys.stderr)
        if isinstance(error, ParseError) and error.text:
            for line in error.caret().splitlines():
                print(f"    {line}", file=sys.stderr)
        for error_type, hint in _HINTS.items():
            if isinstance(error, error_type):
                print(f"  Hint: {hint}", file=sys.stderr)
                break

    if suggestion:
        print(f"  Suggestion: {suggestion}", file=sys.stderr)

    if show_traceback and error is not None:
        print("\n  Traceback:", file=sys.stderr)
        traceback.print_exc(file=sys.stderr)

    print("", file=sys.stderr)


def handle_errors(func: Callable) -> Callable:
    """
    Decorator for CLI entry points.

    Maps library errors to their ``exit_code`` after printing them, so verdicts
    stay in the output stream and only failures change the exit status.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        try:
            return func(*args, **kwargs)
        except KeyboardInterrupt:
            print("\n\nOperation cancelled by user.", file=sys.stderr)
            sys.exit(130)
        except ValidationError as e:
            print_error("Invalid input", e)
            sys.exit(e.exit_code)
        except CrosscheckError as e:
            print_error("Crosscheck disagreement", e)
            sys.exit(e.exit_code)
        except InternalConsistencyError as e:
            print_error("Internal consistency failure", e, show_traceback=True)
            sys.exit(e.exit_code)
        except CubicPrfError as e:
            print_error(type(e).__name__, e)
            sys.exit(e.exit_code)
        except Exception as e:
            print_error("Unexpected error", e, show_traceback=True)
            sys.exit(1)

    return wrapper


class ErrorContext:
    """
    Context manager that labels escaping library errors with an operation.

    Usage:
        with ErrorContext("census", q=9):
            count_permutations(ctx)
    """

    def __init__(self, operation: str, **context: Any):
        self.operation = operation
        self.context = context

    def __enter__(self) -> ErrorContext:
        return self

    def __exit__(self, exc_type: Optional[type[BaseException]], exc_val: Optional[BaseException], exc_tb: Any) -> bool:
        if exc_val is not None and isinstance(exc_val, CubicPrfError) and exc_val.operation is None:
            context_str = ", ".join(f"{k}={v}" for k, v in self.context.items())
            exc_val.operation = f"{self.operation} ({context_str})" if context_str else self.operation
        return False
