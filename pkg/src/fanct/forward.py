"""Forward model: fan-beam intensity sinograms, the log transform back to
line integrals, direct parallel projection, and fan-to-parallel rebinning.

Naming note: the recorded intensity is called ``I`` and the attenuation field
``F`` throughout; the two are distinct quantities even though historically the
same symbol has been used for both.  The intensity model is
``I(alpha, tau) = (K/L^2) * exp(-path)`` where ``path`` is the arc-length line
integral of the attenuation along the ray.  The ``sqrt(1 + tan^2(alpha))``
factor of the dx'-parameterized form is exactly the arc-length Jacobian
``1/cos(alpha)``, so ``path`` is computed as the exact analytic chord integral
in (eta, sigma) coordinates rather than by quadrature in x'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, FanGeometry
from .phantom import Phantom

DEFAULT_INTENSITY_FLOOR = 1e-300


@dataclass
class FanSinogram:
    """Intensity samples I(alpha, tau) on a uniform (alpha, tau) grid.

    ``values[i, j]`` is the intensity at view ``tau_axis[i]`` and fan angle
    ``alpha_axis[j]``; alpha spans [-alpha_max, +alpha_max] inclusive and tau
    spans [0, 2*pi) periodically.  All values are positive.
    """

    geom: FanGeometry
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        expected = (self.geom.n_tau, self.geom.n_alpha)
        if self.values.shape != expected:
            raise ValueError(f"fan sinogram shape {self.values.shape} != (n_tau, n_alpha) {expected}")
        if not np.all(self.values > 0.0):
            raise ValueError("fan sinogram intensities must be positive")

    @property
    def alpha_axis(self) -> np.ndarray:
        return np.linspace(-self.geom.alpha_max, self.geom.alpha_max, self.geom.n_alpha)

    @property
    def tau_axis(self) -> np.ndarray:
        return np.linspace(0.0, TWO_PI, self.geom.n_tau, endpoint=False)


@dataclass
class ParallelSinogram:
    """Log-domain line integrals Phi(eta, sigma) on a uniform (eta, sigma) grid.

    ``values[i, j]`` is Phi at ``sigma_axis[i]``, ``eta_axis[j]``; eta spans
    [-R, R] inclusive and sigma spans [0, 2*pi) periodically.
    """

    R: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError(f"parallel sinogram must be 2-D, got {self.values.shape}")
        if self.values.shape[0] < 4 or self.values.shape[1] < 4:
            raise ValueError(f"parallel sinogram needs >= 4 samples per axis, got {self.values.shape}")
        if self.R <= 0.0:
            raise ValueError(f"require R > 0, got {self.R}")

    @property
    def n_sigma(self) -> int:
        return self.values.shape[0]

    @property
    def n_eta(self) -> int:
        return self.values.shape[1]

    @property
    def eta_axis(self) -> np.ndarray:
        return np.linspace(-self.R, self.R, self.n_eta)

    @property
    def sigma_axis(self) -> np.ndarray:
        return np.linspace(0.0, TWO_PI, self.n_sigma, endpoint=False)


def _fan_sigma_eta(geom: FanGeometry):
    """sin/cos of sigma = tau - alpha on the (n_tau, n_alpha) grid, plus eta(alpha)."""
    alpha = np.linspace(-geom.alpha_max, geom.alpha_max, geom.n_alpha)
    tau = np.linspace(0.0, TWO_PI, geom.n_tau, endpoint=False)
    sin_a, cos_a = np.sin(alpha), np.cos(alpha)
    sin_t, cos_t = np.sin(tau), np.cos(tau)
    sin_sigma = np.outer(sin_t, cos_a) - np.outer(cos_t, sin_a)
    cos_sigma = np.outer(cos_t, cos_a) + np.outer(sin_t, sin_a)
    eta = geom.D * sin_a
    return sin_sigma, cos_sigma, eta


def project_fan(ph: Phantom, geom: FanGeometry) -> FanSinogram:
    """Fan-beam intensity sinogram I = (K/L^2) * exp(-line integral).

    The phantom support must fit inside the geometry support (ph.R <= geom.R).
    Samples whose ray misses every feature are exactly K/L^2.
    """
    if ph.R > geom.R:
        raise ValueError(f"phantom support R={ph.R} exceeds geometry support R={geom.R}")
    sin_sigma, cos_sigma, eta = _fan_sigma_eta(geom)
    path = ph.chord_grid(eta[None, :], sin_sigma, cos_sigma)
    kl2 = geom.K / geom.L ** 2
    return FanSinogram(geom=geom, values=kl2 * np.exp(-path))


def log_transform(s: FanSinogram, floor: float | None = DEFAULT_INTENSITY_FLOOR) -> np.ndarray:
    """Recover line integrals from intensities: Phi = -ln(I) + ln(K/L^2).

    Values equal to K/L^2 map to exactly 0.  Intensities below ``floor`` are
    clamped before the log; pass ``floor=None`` to disable clamping, in which
    case nonpositive intensities raise.

    Returns the (n_tau, n_alpha) grid of Phi values indexed like the input.
    """
    kl2 = s.geom.K / s.geom.L ** 2
    vals = s.values
    if floor is None:
        if np.any(vals <= 0.0):
            raise ValueError("corrupted sinogram: nonpositive intensity with clamping disabled")
    else:
        vals = np.maximum(vals, floor)
    return np.log(kl2) - np.log(vals)


def count_floor_clamps(s: FanSinogram, floor: float = DEFAULT_INTENSITY_FLOOR) -> int:
    """Number of samples the log transform would clamp at ``floor``."""
    return int(np.count_nonzero(s.values < floor))


def project_parallel(ph: Phantom, n_eta: int, n_sigma: int) -> ParallelSinogram:
    """Direct parallel projection: Phi(eta, sigma) sampled on the uniform grid."""
    if n_eta < 4 or n_sigma < 4:
        raise ValueError(f"need n_eta >= 4 and n_sigma >= 4, got {n_eta}, {n_sigma}")
    eta = np.linspace(-ph.R, ph.R, n_eta)
    sigma = np.linspace(0.0, TWO_PI, n_sigma, endpoint=False)
    values = ph.chord_grid(eta[None, :], np.sin(sigma)[:, None], np.cos(sigma)[:, None])
    return ParallelSinogram(R=ph.R, values=values)


def rebin_to_parallel(s: FanSinogram, n_eta: int, n_sigma: int) -> ParallelSinogram:
    """Resample a fan sinogram onto the parallel (eta, sigma) grid.

    For each target sample the fan coordinates are alpha = arcsin(eta/D),
    tau = sigma + alpha; the log-transformed sinogram is interpolated
    bilinearly with periodic wrap in tau and alpha clamped at +-alpha_max.
    """
    if n_eta < 4 or n_sigma < 4:
        raise ValueError(f"need n_eta >= 4 and n_sigma >= 4, got {n_eta}, {n_sigma}")
    geom = s.geom
    phi_fan = log_transform(s)
    alpha = s.alpha_axis
    h_alpha = alpha[1] - alpha[0]
    h_tau = TWO_PI / geom.n_tau
    n_tau = geom.n_tau

    eta = np.linspace(-geom.R, geom.R, n_eta)
    sigma = np.linspace(0.0, TWO_PI, n_sigma, endpoint=False)

    alpha_of_eta = np.arcsin(np.clip(eta / geom.D, -1.0, 1.0))
    alpha_of_eta = np.clip(alpha_of_eta, alpha[0], alpha[-1])
    ta = (alpha_of_eta - alpha[0]) / h_alpha
    ja = np.clip(np.floor(ta).astype(np.int64), 0, geom.n_alpha - 2)
    fa = ta - ja

    out = np.empty((n_sigma, n_eta))
    for k in range(n_sigma):
        tv = (sigma[k] + alpha_of_eta) / h_tau
        i0 = np.floor(tv).astype(np.int64) % n_tau
        i1 = (i0 + 1) % n_tau
        fr = tv - np.floor(tv)
        row0 = phi_fan[i0, ja] * (1.0 - fa) + phi_fan[i0, ja + 1] * fa
        row1 = phi_fan[i1, ja] * (1.0 - fa) + phi_fan[i1, ja + 1] * fa
        out[k] = row0 * (1.0 - fr) + row1 * fr
    return ParallelSinogram(R=geom.R, values=out)
