"""Data formatting utilities."""
from typing import List, Optional

from setgrad.constants.trace import FLOAT_DIGITS
from setgrad.exceptions import InputError


def format_float(value: Optional[float]) -> str:
    """Format a float so that parsing the text gives back the same double.

    Args:
        value: number to format; None becomes an empty cell.

    Returns:
        str: text with FLOAT_DIGITS significant digits.
    """
    if value is None:
        return ""
    return format(float(value), f".{FLOAT_DIGITS}g")


def parse_float(text: str) -> Optional[float]:
    text = text.strip()
    if not text:
        return None
    return float(text)


def parse_vector(text: str, name: str = "vector") -> List[float]:
    """Parse "0.02,5" into [0.02, 5.0].

    Raises:
        InputError: empty text or a non-numeric entry.
    """
    parts = [part.strip() for part in str(text).split(",")]
    if not parts or any(not part for part in parts):
        raise InputError(f"{name} must be a comma-separated list of numbers, got {text!r}")
    try:
        return [float(part) for part in parts]
    except ValueError as exc:
        raise InputError(f"{name} must be a comma-separated list of numbers, got {text!r}") from exc
