"""Independent oracles: brute-force numerics that never share code with the
paths they check."""

from __future__ import annotations

import numpy as np

from fanct.geometry import FanGeometry, ray_point
from fanct.phantom import Phantom


def ray_march_line_integral(ph: Phantom, eta: float, sigma: float,
                            n_samples: int = 2_000_001) -> float:
    """Trapezoid of pointwise attenuation along the line x sin(sigma) + y cos(sigma) = eta.

    Marches the chord of the support circle (plus a small pad); for
    piecewise-constant phantoms the error is bounded by mu * step per disk
    crossing, so the caller picks ``n_samples`` for the tolerance it needs.
    """
    if abs(eta) >= ph.R:
        return 0.0
    half = float(np.sqrt(ph.R ** 2 - eta ** 2)) + 1e-9
    t = np.linspace(-half, half, n_samples)
    s, c = np.sin(sigma), np.cos(sigma)
    x = eta * s + t * c
    y = eta * c - t * s
    return float(np.trapezoid(ph.attenuation_at(x, y), t))


def ray_march_fan_exponent(ph: Phantom, alpha: float, tau: float, D: float,
                           x1: float, x2: float, n_samples: int = 2_000_001) -> float:
    """The dx'-parameterized exponent: sqrt(1 + tan(alpha)^2) * integral of F along the ray.

    Points come from the ray parameterization (vectorized form spot-checked
    against :func:`fanct.geometry.ray_point` on a random subset).
    """
    xp = np.linspace(x1, x2, n_samples)
    ta = np.tan(alpha)
    x = xp * np.cos(tau) + (D + xp) * ta * np.sin(tau)
    y = -xp * np.sin(tau) + (D + xp) * ta * np.cos(tau)
    rng = np.random.default_rng(0)
    for i in rng.integers(0, n_samples, size=16):
        px, py = ray_point(alpha, tau, float(xp[i]), D)
        assert abs(px - x[i]) < 1e-12 and abs(py - y[i]) < 1e-12
    vals = ph.attenuation_at(x, y)
    return float(np.sqrt(1.0 + ta ** 2) * np.trapezoid(vals, xp))


def brute_force_entry_exit(alpha: float, tau: float, geom: FanGeometry,
                           n_scan: int = 20_000) -> tuple[float, float] | None:
    """Support crossings found by scanning |ray_point(x')| - R for sign changes
    and refining each bracket by bisection."""

    def radial_gap(xp: float) -> float:
        x, y = ray_point(alpha, tau, xp, geom.D)
        return np.hypot(x, y) - geom.R

    span = np.linspace(-2.0 * geom.R, 2.0 * geom.R, n_scan)
    gaps = np.array([radial_gap(v) for v in span])
    crossings = []
    for i in np.nonzero(np.diff(np.sign(gaps)) != 0)[0]:
        lo, hi = span[i], span[i + 1]
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if radial_gap(lo) * radial_gap(mid) <= 0.0:
                hi = mid
            else:
                lo = mid
        crossings.append(0.5 * (lo + hi))
    if not crossings:
        return None
    return (min(crossings), max(crossings))
