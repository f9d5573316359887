"""Grid serialization: ASCII PGM images and CSV, byte-stable for diffing.

PGM output is P2 (plain text) with values min-max scaled into 0..255;
non-finite entries (mask sentinels) render as 0. CSV is row-major, one line
per grid row, using ``repr`` floats so values round-trip exactly.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np


def pgm_text(grid: np.ndarray) -> str:
    """Render a grid as a P2 PGM string (min-max scaled to 8 bits)."""
    grid = np.asarray(grid, dtype=np.float64)
    finite = np.isfinite(grid)
    scaled = np.zeros(grid.shape, dtype=np.int64)
    if finite.any():
        lo = grid[finite].min()
        hi = grid[finite].max()
        if hi > lo:
            scaled[finite] = np.rint((grid[finite] - lo) / (hi - lo) * 255).astype(np.int64)
    height, width = grid.shape
    lines = ["P2", f"{width} {height}", "255"]
    lines.extend(" ".join(str(v) for v in row) for row in scaled)
    return "\n".join(lines) + "\n"


def write_pgm(path: str | Path, grid: np.ndarray) -> None:
    Path(path).write_text(pgm_text(grid))


def csv_text(grid: np.ndarray) -> str:
    grid = np.asarray(grid, dtype=np.float64)
    return "\n".join(",".join(repr(float(v)) for v in row) for row in grid) + "\n"


def write_csv(path: str | Path, grid: np.ndarray) -> None:
    Path(path).write_text(csv_text(grid))


def read_csv(path: str | Path) -> np.ndarray:
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.strip() == "":
            continue
        rows.append([float(v) for v in line.split(",")])
    return np.asarray(rows, dtype=np.float64)
