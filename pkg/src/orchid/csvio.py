"""CSV output with reproducible formatting.

Floats print with 9 significant digits, '.' decimal separator, no
grouping; rows end with '\\n'. Identical data therefore serialises to
identical bytes, which the determinism checks rely on.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", newline="")
    return path
