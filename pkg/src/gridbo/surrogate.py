"""Grid-map surrogate model: O(1) sample ingestion, smoothed fields on demand.

All observations collapse into fixed-size grids (binary occupancy plus a heat
accumulator), so memory never grows with the number of samples and recording
one sample costs a couple of array writes. Prediction, confidence, and
uncertainty fields are derived on demand by convolving those grids with a
Gaussian kernel:

- prediction ``f``: smoothed heat, normalized to [0, 1];
- confidence ``c``: smoothed occupancy clamped to [0, 1] — close to 1 near
  visited cells, 0 far from any data;
- uncertainty ``u = (1 - c) * sigma_f``.

Two accumulation modes cover the two common map types. ``additive`` counts
visits (heatmap); ``averaged`` accumulates a per-sample metric and a sample
count so the prediction is the similarity-weighted mean of the metric
(performance-map style).
"""
from __future__ import annotations

import numpy as np

from .kernels import Kernel, convolve

MODES = ("additive", "averaged")

Cell = tuple[int, int]


def apply_mask(field: np.ndarray, mask: np.ndarray, fill: float) -> np.ndarray:
    """Return ``field`` where ``mask`` is valid, ``fill`` elsewhere.

    Raises:
        ValueError: if the shapes differ.
    """
    field = np.asarray(field, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if field.shape != mask.shape:
        raise ValueError(f"field shape {field.shape} != mask shape {mask.shape}")
    return np.where(mask, field, fill)


class SurrogateState:
    """Mutable surrogate model over a fixed grid.

    Single-writer: ``record`` mutates the state and must be serialized; the
    field derivations are pure reads of the current snapshot.

    Args:
        navmask: boolean validity grid (True = physically meaningful cell);
            fixes the grid dimensions and must contain at least one True.
        kernel: smoothing kernel shared by all derived fields.
        sigma_f: uncertainty amplitude (> 0); ``u`` ranges over [0, sigma_f].
        mode: "additive" (heat counts visits) or "averaged" (heat accumulates
            metric sums alongside a per-cell sample count).
    """

    def __init__(self, navmask: np.ndarray, kernel: Kernel, sigma_f: float = 1.0,
                 mode: str = "additive"):
        navmask = np.asarray(navmask, dtype=bool)
        if navmask.ndim != 2:
            raise ValueError(f"navmask must be 2D, got shape {navmask.shape}")
        if not navmask.any():
            raise ValueError("navmask has no valid cells")
        if not sigma_f > 0:
            raise ValueError(f"sigma_f must be positive, got {sigma_f}")
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.navmask = navmask
        self.kernel = kernel
        self.sigma_f = float(sigma_f)
        self.mode = mode
        self.height, self.width = navmask.shape
        self.occupancy = np.zeros(navmask.shape, dtype=np.float64)
        self.heat = np.zeros(navmask.shape, dtype=np.float64)
        self.metric_count = np.zeros(navmask.shape, dtype=np.float64) if mode == "averaged" else None
        self.sample_count = 0

    def record(self, cell: Cell, metric_value: float | None = None) -> None:
        """Fold one observation at ``cell`` into the grids. O(1) per call.

        In additive mode ``metric_value`` must be absent; in averaged mode it
        is required and must be non-negative (heat stays non-negative so the
        normalized prediction lands in [0, 1]).

        Raises:
            IndexError: cell outside the grid.
            ValueError: metric_value present/absent mismatch with the mode,
                or a negative metric_value.
        """
        r, c = cell
        if not (0 <= r < self.height and 0 <= c < self.width):
            raise IndexError(f"cell {cell} outside {self.height}x{self.width} grid")
        if self.mode == "additive":
            if metric_value is not None:
                raise ValueError("additive mode takes no metric_value")
            self.heat[r, c] += 1.0
        else:
            if metric_value is None:
                raise ValueError("averaged mode requires a metric_value")
            if metric_value < 0:
                raise ValueError(f"metric_value must be non-negative, got {metric_value}")
            self.heat[r, c] += metric_value
            self.metric_count[r, c] += 1.0
        self.occupancy[r, c] = 1.0
        self.sample_count += 1

    def predict_field(self) -> np.ndarray:
        """Surrogate prediction ``f`` in [0, 1] (all zeros with no data).

        Additive mode smooths the heat directly. Averaged mode divides the
        smoothed metric sums by the smoothed sample counts (a similarity-
        weighted mean), falling back to 0 where the smoothed count vanishes.
        Either way the result is scaled by its maximum, so the argmax is
        invariant to uniformly scaling the raw data.
        """
        raw = convolve(self.heat, self.kernel)
        if self.mode == "averaged":
            weight = convolve(self.metric_count, self.kernel)
            observed = weight > 1e-12
            raw = np.where(observed, raw / np.where(observed, weight, 1.0), 0.0)
        peak = raw.max()
        if peak > 0:
            return raw / peak
        return np.zeros_like(raw)

    def confidence_field(self) -> np.ndarray:
        """Confidence ``c``: smoothed occupancy clamped to [0, 1]."""
        return np.clip(convolve(self.occupancy, self.kernel), 0.0, 1.0)

    def uncertainty_field(self, confidence: np.ndarray | None = None) -> np.ndarray:
        """Uncertainty ``u = (1 - c) * sigma_f``, in [0, sigma_f].

        Pass ``confidence`` to reuse an already-computed confidence field.
        """
        if confidence is None:
            confidence = self.confidence_field()
        return (1.0 - confidence) * self.sigma_f

    def memory_bytes(self) -> int:
        """Total bytes held by the backing grids; independent of sample_count."""
        total = self.occupancy.nbytes + self.heat.nbytes + self.navmask.nbytes
        total += self.kernel.weights_1d.nbytes
        if self.metric_count is not None:
            total += self.metric_count.nbytes
        return total
