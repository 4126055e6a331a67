"""
Output Formatters for cubic-prf-lib

Consistent CLI output:
- ANSI colorization (only when stdout is a TTY)
- print helpers (success, error, warning, info, header)
- tables via tabulate
- JSON documents and JSON lines
- CSV export
"""

from __future__ import annotations

import csv
import json
import sys
from collections.abc import Iterable, Sequence
from io import StringIO
from pathlib import Path
from typing import Any, Optional, Union

from tabulate import tabulate


class Colors:
    RED = '\033[91m'
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    BLUE = '\033[94m'
    BOLD = '\033[1m'
    DIM = '\033[2m'
    RESET = '\033[0m'


def _supports_color() -> bool:
    return hasattr(sys.stdout, 'isatty') and sys.stdout.isatty()


def _colorize(text: str, color: str) -> str:
    """Apply color to text if terminal supports it."""
    if _supports_color():
        return f"{color}{text}{Colors.RESET}"
    return text


def format_table(
    data: Sequence[dict[str, Any]],
    columns: Optional[list[str]] = None,
    headers: Optional[list[str]] = None,
    tablefmt: str = 'simple',
) -> str:
    """
    Format a list of row dictionaries as a table.

    Args:
        data: Rows to format
        columns: Keys to include; defaults to the keys of the first row
        headers: Header labels; defaults to ``columns``
        tablefmt: tabulate format name ('simple', 'github', 'plain', ...)

    Returns:
        Formatted table string, or "(no data)"
    """
    if not data:
        return "(no data)"

    if columns is None:
        columns = list(data[0].keys())
    if headers is None:
        headers = columns

    rows = []
    for row_dict in data:
        row = []
        for key in columns:
            value = row_dict.get(key, '')
            if isinstance(value, (list, tuple)):
                value = ', '.join(map(str, value))
            row.append(value)
        rows.append(row)
    return tabulate(rows, headers=headers, tablefmt=tablefmt)


def format_json(data: Any, indent: Optional[int] = 2) -> str:
    """Format data as JSON; non-serializable values fall back to ``str``."""
    return json.dumps(data, indent=indent, default=str, ensure_ascii=False)


def format_json_lines(records: Iterable[dict[str, Any]]) -> str:
    """One compact JSON object per line."""
    return '\n'.join(json.dumps(r, default=str, ensure_ascii=False, sort_keys=True) for r in records)


def print_success(message: str) -> None:
    print(f"{_colorize('✓', Colors.GREEN)} {message}")


def print_error(message: str) -> None:
    print(f"{_colorize('✗', Colors.RED)} {message}", file=sys.stderr)


def print_warning(message: str) -> None:
    print(f"{_colorize('!', Colors.YELLOW)} {message}")


def print_info(message: str) -> None:
    print(f"{_colorize('→', Colors.BLUE)} {message}")


def print_header(title: str) -> None:
    """Print a section header."""
    if _supports_color():
        print(f"\n{Colors.BOLD}{title}{Colors.RESET}")
        print('=' * len(title))
    else:
        print(f"\n{title}")


def format_count(count: int, singular: str, plural: Optional[str] = None) -> str:
    """"1 class" / "2 classes"."""
    if plural is None:
        plural = singular + 's'
    return f"{count} {singular if count == 1 else plural}"


def get_csv_string(
    data: list[dict[str, Any]],
    columns: Optional[list[str]] = None,
) -> str:
    """CSV text for a list of row dictionaries (empty string for no rows)."""
    if not data:
        return ""
    if columns is None:
        columns = list(data[0].keys())

    buffer = StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    writer.writerows(data)
    return buffer.getvalue()


def export_csv(
    data: list[dict[str, Any]],
    file_path: Union[str, Path],
    columns: Optional[list[str]] = None,
) -> Path:
    """
    Write rows to a CSV file.

    Raises:
        ValueError: If no data is provided.
    """
    if not data:
        raise ValueError("No data to export to CSV.")
    file_path = Path(file_path).expanduser().resolve()
    file_path.write_text(get_csv_string(data, columns), encoding='utf-8')
    return file_path
