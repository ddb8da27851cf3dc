from __future__ import annotations


def safe_int(value: str | int | None, default: int = 0) -> int:
    """Environment value as int; blanks and garbage give ``default``."""
    if value in (None, ""):
        return default
    try:
        return int(value)
    except (ValueError, TypeError):
        return default


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
