"""Coverage and distribution-evenness metrics for exploration runs.

Both metrics live on the navmesh-valid cell set: ghost-wall cells and walls
are excluded from the denominators (ghost traversals are counted separately
as bug events). "Distance to uniform" is total-variation distance between
the normalized visit distribution and the uniform distribution over valid
cells -- 0 at perfectly even coverage, approaching 1 as visits concentrate.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

DISTANCE_DEFINITION = "total-variation"
COVERAGE_DEFINITION = "navmesh-valid cells visited at least once / navmesh-valid cells"


@dataclass(frozen=True)
class RunMetrics:
    """Summary of one exploration trial."""

    coverage: float
    dist_uniform: float
    ghost_passes: int
    steps: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunMetrics":
        return cls(coverage=float(data["coverage"]), dist_uniform=float(data["dist_uniform"]),
                   ghost_passes=int(data["ghost_passes"]), steps=int(data["steps"]),
                   seed=int(data["seed"]))


def _valid_mask(mask: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != shape:
        raise ValueError(f"mask shape {mask.shape} != grid shape {shape}")
    if not mask.any():
        raise ValueError("mask has no valid cells")
    return mask


def coverage(occupancy: np.ndarray, mask: np.ndarray) -> float:
    """Fraction of navmesh-valid cells with any recorded visit.

    Raises:
        ValueError: empty mask or shape mismatch.
    """
    occupancy = np.asarray(occupancy, dtype=np.float64)
    mask = _valid_mask(mask, occupancy.shape)
    visited = occupancy[mask] > 0
    return float(visited.sum() / visited.size)


def distance_to_uniform(heat: np.ndarray, mask: np.ndarray) -> float:
    """Total-variation distance of the visit distribution from uniform.

    ``(1/2) * sum_valid |p[c] - 1/N|`` with ``p`` the heat over valid cells
    normalized to sum 1 and ``N`` the valid-cell count.

    Raises:
        ValueError: empty mask, shape mismatch, or zero total heat (no
            distribution to compare).
    """
    heat = np.asarray(heat, dtype=np.float64)
    mask = _valid_mask(mask, heat.shape)
    valid_heat = heat[mask]
    total = valid_heat.sum()
    if total <= 0:
        raise ValueError("total heat over valid cells is zero; distribution undefined")
    p = valid_heat / total
    return float(0.5 * np.abs(p - 1.0 / p.size).sum())


def normalize_vs_baseline(metric: float, baseline_metric: float) -> float:
    """Ratio of a metric to its baseline value.

    Raises:
        ZeroDivisionError: zero baseline.
    """
    if baseline_metric == 0:
        raise ZeroDivisionError("baseline metric is zero; ratio undefined")
    return metric / baseline_metric
