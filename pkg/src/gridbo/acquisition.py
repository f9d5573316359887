"""Lower-confidence-bound target selection over masked grids.

The acquisition value of a cell is ``a = f - u``: predicted metric minus
uncertainty. Minimizing it steers the next target toward cells that look both
low-valued and poorly explored. Cells off the validity mask get a ``+inf``
sentinel so they can never win.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surrogate import Cell, apply_mask

MASKED = np.inf


@dataclass(frozen=True)
class AcquisitionResult:
    """Outcome of one target selection.

    ``field`` carries the acquisition values (sentinel on masked cells),
    ``target`` is the selected valid cell, and ``tie_count`` the number of
    valid cells sharing the minimum value.
    """

    field: np.ndarray
    target: Cell
    tie_count: int


def acquisition_field(f: np.ndarray, u: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """``f - u`` on valid cells, ``+inf`` sentinel elsewhere.

    Raises:
        ValueError: if the three shapes differ.
    """
    f = np.asarray(f, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if f.shape != u.shape:
        raise ValueError(f"f shape {f.shape} != u shape {u.shape}")
    return apply_mask(f - u, mask, MASKED)


def select_target(a: np.ndarray, mask: np.ndarray, rng: np.random.Generator) -> AcquisitionResult:
    """Pick the argmin of ``a`` over valid cells, breaking ties uniformly.

    The first selection on an empty model is fully tied, so a deterministic
    tie-break would pin exploration to one corner; ties are resolved with a
    draw from ``rng`` instead.

    Raises:
        ValueError: if the mask has no valid cells or shapes differ.
    """
    a = np.asarray(a, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if a.shape != mask.shape:
        raise ValueError(f"field shape {a.shape} != mask shape {mask.shape}")
    valid_flat = np.flatnonzero(mask.ravel())
    if valid_flat.size == 0:
        raise ValueError("mask has no valid cells")
    values = a.ravel()[valid_flat]
    ties = valid_flat[values == values.min()]
    pick = int(ties[rng.integers(ties.size)])
    target = (pick // a.shape[1], pick % a.shape[1])
    return AcquisitionResult(field=a, target=target, tie_count=int(ties.size))
