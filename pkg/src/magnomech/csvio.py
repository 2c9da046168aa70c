"""Deterministic CSV output: fixed 17-significant-digit float formatting."""

from __future__ import annotations

from pathlib import Path


def fmt(value) -> str:
    """Render one cell; floats at 17 significant digits for byte stability."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def write_csv(path, header, rows, trailing_comments=()) -> None:
    """Write rows with a header line; '\\n' endings regardless of platform."""
    lines = [",".join(header)]
    lines.extend(",".join(fmt(cell) for cell in row) for row in rows)
    lines.extend(f"# {comment}" for comment in trailing_comments)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
