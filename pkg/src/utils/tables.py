# src/utils/tables.py
"""
Comma-separated table emitters.

Numbers are written with NUMBER_FORMAT (12 significant digits, scientific
notation). Python's %-formatting ignores the locale, so files are identical
across machines for identical inputs.

- write_table(path, columns, data)        one column per curve, header row first
- write_matrix(path, x_axis, y_axis, m)   Wigner grids: first row y_axis, first column x_axis
- read_table(path)                        header + float array (used by the tests)
"""

from pathlib import Path
from typing import Sequence

import numpy as np

from src.main.constants import NUMBER_FORMAT
from src.main.logger import logger
from src.utils.helpers import ensure_dir


def write_table(path: str | Path, columns: Sequence[str], data) -> Path:
    """Write `data` (rows x columns, or a dict name -> column) below a header of `columns`."""
    p = Path(path)
    ensure_dir(p.parent)
    if isinstance(data, dict):
        data = np.column_stack([np.asarray(data[c], dtype=float) for c in columns])
    arr = np.atleast_2d(np.asarray(data, dtype=float))
    if arr.shape[1] != len(columns):
        raise ValueError(f"Table has {arr.shape[1]} columns but {len(columns)} names")
    np.savetxt(p, arr, fmt=NUMBER_FORMAT, delimiter=",", header=",".join(columns), comments="")
    logger.info("Wrote %s (%d rows)", p, arr.shape[0])
    return p


def write_matrix(path: str | Path, x_axis, y_axis, values, corner: str = "x\\y") -> Path:
    """Matrix table: header row holds y_axis, each row starts with its x value."""
    p = Path(path)
    ensure_dir(p.parent)
    x = np.asarray(x_axis, dtype=float)
    values = np.asarray(values, dtype=float)
    header = ",".join([corner] + [NUMBER_FORMAT % v for v in np.asarray(y_axis, dtype=float)])
    np.savetxt(p, np.column_stack([x, values]), fmt=NUMBER_FORMAT, delimiter=",", header=header, comments="")
    logger.info("Wrote %s (%dx%d grid)", p, values.shape[0], values.shape[1])
    return p


def read_table(path: str | Path):
    p = Path(path)
    with open(p, "r", encoding="utf-8") as f:
        header = f.readline().strip().split(",")
    data = np.loadtxt(p, delimiter=",", skiprows=1, ndmin=2)
    return header, data
