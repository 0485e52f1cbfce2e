"""Square raster images over [-R, R]^2 and comparison metrics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Image:
    """n x n raster of attenuation values over the square [-R, R]^2.

    ``values[iy, ix]`` sits at ``(axis[ix], axis[iy])`` where ``axis`` is the
    node-centered grid ``linspace(-R, R, n)``; y grows with the row index.
    ``meta`` carries non-essential run diagnostics and is not serialized into
    the raw grid.
    """

    values: np.ndarray
    R: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError(f"image grid must be square, got {self.values.shape}")
        if self.values.shape[0] < 2:
            raise ValueError("image grid needs n >= 2")
        if self.R <= 0.0:
            raise ValueError(f"require R > 0, got {self.R}")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.R, self.R, self.n)

    def radius_grid(self) -> np.ndarray:
        """Distance of every pixel center from the origin."""
        ax = self.axis
        X, Y = np.meshgrid(ax, ax)
        return np.hypot(X, Y)


def evaluate_metrics(img: Image, ref: Image, interior_fraction: float = 0.7) -> dict:
    """Error metrics of ``img`` against ``ref`` split at r = interior_fraction*R.

    Returns ``rmse_interior``, ``max_abs_interior`` and ``mean_interior`` of the
    difference over pixels with r < interior_fraction*R, and
    ``exterior_leakage`` = max |difference| over the remaining pixels.

    Raises
    ------
    ValueError
        On mismatched grid shapes or extents.
    """
    if img.values.shape != ref.values.shape:
        raise ValueError(f"shape mismatch: {img.values.shape} vs {ref.values.shape}")
    if img.R != ref.R:
        raise ValueError(f"extent mismatch: R={img.R} vs R={ref.R}")
    if not (0.0 < interior_fraction <= 1.0):
        raise ValueError(f"interior_fraction must be in (0, 1], got {interior_fraction}")
    diff = img.values - ref.values
    rr = img.radius_grid()
    interior = rr < interior_fraction * img.R
    exterior = ~interior
    return {
        "interior_fraction": interior_fraction,
        "rmse_interior": float(np.sqrt(np.mean(diff[interior] ** 2))),
        "max_abs_interior": float(np.max(np.abs(diff[interior]))),
        "mean_interior": float(np.mean(diff[interior])),
        "exterior_leakage": float(np.max(np.abs(diff[exterior]))) if exterior.any() else 0.0,
    }
