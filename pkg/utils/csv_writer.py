"""
Deterministic CSV output

One header row, comma separated, dot decimal. Floats are written with
17 significant digits so identical runs give byte-identical files.
"""

import csv
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from loguru import logger


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    if hasattr(value, "item"):  # numpy scalar
        return format_cell(value.item())
    if hasattr(value, "value"):  # str enum
        return str(value.value)
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> int:
    """
    Write rows to `path` with a fixed column order

    Args:
        path: Destination file (parent directories are created)
        columns: Header, also the key order read from each row
        rows: Mappings; missing keys become empty cells

    Returns:
        Number of data rows written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(list(columns))
        for row in rows:
            unknown = set(row) - set(columns)
            if unknown:
                raise KeyError(f"row has columns not in header: {sorted(unknown)}")
            writer.writerow([format_cell(row.get(col)) for col in columns])
            count += 1
    logger.debug(f"💾 Wrote {count} rows to {path}")
    return count


def read_csv(path: Path) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))
