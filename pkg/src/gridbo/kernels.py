"""Truncated Gaussian kernels and separable 2D convolution over scalar grids.

Grids are plain float64 numpy arrays of shape ``(height, width)``, indexed
``grid[row, col]``. The kernel is separable: the 2D weight between two cells
is the product of the 1D axis weights, so a full convolution runs as two 1D
passes. Everything outside the grid contributes zero (zero padding), which
keeps smoothed values honest near unexplored borders.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True)
class Kernel:
    """Truncated separable Gaussian similarity kernel.

    Attributes:
        sigma: bandwidth in cell units; controls how fast similarity decays.
        radius: truncation half-width in cells; weights beyond it are dropped.
        weights_1d: axis weights of length ``2 * radius + 1``, peak value 1.0
            at the center (a point is maximally similar to itself).
    """

    sigma: float
    radius: int
    weights_1d: np.ndarray

    def weight(self, d: int) -> float:
        """1D weight at integer offset ``d``, 0.0 beyond the truncation radius."""
        if abs(d) > self.radius:
            return 0.0
        return float(self.weights_1d[self.radius + d])

    def stamp_2d(self) -> np.ndarray:
        """Full 2D kernel as the outer product of the axis weights."""
        return np.outer(self.weights_1d, self.weights_1d)


def build_kernel(sigma: float, radius: int | None = None) -> Kernel:
    """Build a truncated Gaussian kernel.

    Weights are ``exp(-d^2 / (2 sigma^2))`` for integer offsets ``d`` in
    ``[-radius, radius]``. When ``radius`` is omitted it defaults to
    ``ceil(3 * sigma)``, beyond which weights are below 1.2% of the peak.

    Raises:
        ValueError: if ``sigma <= 0`` or an explicit ``radius < 1``.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if radius is None:
        radius = math.ceil(3.0 * sigma)
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    weights = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    weights.setflags(write=False)
    return Kernel(sigma=float(sigma), radius=int(radius), weights_1d=weights)


def _convolve_axis(values: np.ndarray, weights: np.ndarray, axis: int) -> np.ndarray:
    """One zero-padded 1D convolution pass along ``axis``.

    Accumulates shifted copies of the padded array, one per kernel tap, so the
    whole pass stays vectorized. The kernel is symmetric, so convolution and
    correlation coincide.
    """
    radius = len(weights) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(values, pad, mode="constant", constant_values=0.0)
    out = np.zeros_like(values)
    index: list[slice] = [slice(None), slice(None)]
    for tap, w in enumerate(weights):
        index[axis] = slice(tap, tap + values.shape[axis])
        out += w * padded[tuple(index)]
    return out


def convolve(grid: np.ndarray, kernel: Kernel) -> np.ndarray:
    """Convolve a 2D grid with the kernel, as two separable 1D passes.

    The output has the same shape as the input; out-of-bounds contributions
    are zero. Equivalent to the direct double sum
    ``out[c] = sum_j grid[j] * w(dy) * w(dx)`` over the truncation window.

    Raises:
        ValueError: if ``grid`` is not a 2D array with both dimensions >= 1.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2 or grid.shape[0] < 1 or grid.shape[1] < 1:
        raise ValueError(f"expected a 2D grid of at least 1x1, got shape {grid.shape}")
    rows = _convolve_axis(grid, kernel.weights_1d, axis=0)
    return _convolve_axis(rows, kernel.weights_1d, axis=1)
