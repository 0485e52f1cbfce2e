"""Sinogram inversion by principal-value quadrature.

Both reconstructors share one singular-integral kernel: a trapezoid rule over
the samples outside the window [pole - eps, pole + eps] (with the window edges
filled in by linear interpolation of the numerator), plus the pole
approximation ``2*eps * d(numerator)/dx`` evaluated at the pole.  With the
numerator being the first derivative of the log data, that term equals
``2*eps`` times the second derivative of the log data at the pole.

Parallel inversion:
    F(x, y) = -1/(4 pi^2) * integral dsigma PV-integral deta
              dPhi/deta / (eta - p),        p = x sin(sigma) + y cos(sigma)

Fan inversion:
    F(x, y) = +1/(4 pi^2) * integral dsigma PV-integral dalpha
              d/dalpha ln I(alpha, alpha+sigma) / (D sin(alpha) - p)

with the pole at alpha_i = arcsin(p / D) and I periodically continued in its
second argument.  The exact local expansion of the fan kernel carries an extra
``1/(D cos(alpha_i))`` factor on the pole term; ``jacobian_correction`` enables
it (default off reproduces the bare ``2*eps * d2/dalpha2 ln I`` form, which
overweights the pole term by roughly D near the axis).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .forward import FanSinogram, ParallelSinogram, log_transform
from .geometry import TWO_PI
from .image import Image

FOUR_PI_SQ = 4.0 * np.pi ** 2


@dataclass
class ReconConfig:
    """Reconstruction settings.

    Parameters
    ----------
    grid_n : int
        Output image resolution (n x n over [-R, R]^2).
    epsilon : float or None
        Pole exclusion half-width in inner-variable units (radians for fan,
        eta units for parallel).  ``None`` means one inner grid step.  Must be
        at least half a grid step.
    pole_correction : bool
        Apply the ``2*eps * (second derivative of the log data)`` replacement
        for the excluded window (default on).
    jacobian_correction : bool
        Scale the pole term by ``1/(D cos(alpha_i))`` in fan mode (default
        off).  Ignored in parallel mode, where the plain term is already the
        exact local expansion.

    Derivatives are central differences on the uniform grid (one-sided at the
    boundaries); this is fixed in v1.
    """

    grid_n: int = 101
    epsilon: float | None = None
    pole_correction: bool = True
    jacobian_correction: bool = False

    def __post_init__(self):
        if self.grid_n < 2:
            raise ValueError(f"grid_n must be >= 2, got {self.grid_n}")
        if self.epsilon is not None and self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    def resolve_epsilon(self, grid_step: float) -> float:
        eps = grid_step if self.epsilon is None else self.epsilon
        if eps < 0.5 * grid_step * (1.0 - 1e-12):
            raise ValueError(
                f"epsilon={eps} is below half the inner grid step {grid_step}")
        return eps


def central_difference(y: np.ndarray, h: float) -> np.ndarray:
    """Second-order first derivative along the last axis, one-sided at the ends."""
    d = np.empty_like(y)
    d[..., 1:-1] = (y[..., 2:] - y[..., :-2]) / (2.0 * h)
    d[..., 0] = (-3.0 * y[..., 0] + 4.0 * y[..., 1] - y[..., 2]) / (2.0 * h)
    d[..., -1] = (3.0 * y[..., -1] - 4.0 * y[..., -2] + y[..., -3]) / (2.0 * h)
    return d


def _lerp(y: np.ndarray, lo: float, h: float, x: np.ndarray) -> np.ndarray:
    t = (x - lo) / h
    i0 = np.clip(np.floor(t).astype(np.int64), 0, y.shape[-1] - 2)
    fr = t - i0
    return y[i0] * (1.0 - fr) + y[i0 + 1] * fr


class _PVWorkspace:
    """Reusable (m, n) buffers for the row-batched PV kernel."""

    def __init__(self, m: int, n: int):
        self.off = np.empty((m, n))
        self.g = np.empty((m, n))
        self.keep = np.empty((m, n), dtype=bool)


def _pv_rows(axis: np.ndarray, numer: np.ndarray, numer_prime: np.ndarray,
             poles: np.ndarray, denom_nodes: np.ndarray,
             denom_at: Callable[[np.ndarray], np.ndarray], eps: float,
             pole_correction: bool, correction_scale: np.ndarray | float = 1.0,
             work: _PVWorkspace | None = None,
             diag: dict | None = None) -> np.ndarray:
    """Batched principal-value integrals, one row per pole.

    For each pole p: trapezoid of numer/denom over the axis samples outside
    [p - eps, p + eps], with the window edges appended as interpolated points,
    plus (two-sided windows only) ``2*eps * numer_prime(p) * correction_scale``.
    Poles outside the axis (or nonfinite) integrate over every sample without
    exclusion; windows clipped by an axis end drop that side and the
    correction ("one-sided").
    """
    n = axis.size
    h = axis[1] - axis[0]
    lo, hi = axis[0], axis[-1]
    m = poles.size
    if work is None:
        work = _PVWorkspace(m, n)

    finite = np.isfinite(poles)
    pc = np.where(finite, poles, hi + 42.0 * h)
    in_range = finite & (pc >= lo) & (pc <= hi)

    np.subtract(axis[None, :], pc[:, None], out=work.off)
    np.abs(work.off, out=work.off)
    np.greater_equal(work.off, eps * (1.0 - 1e-12), out=work.keep)
    work.keep |= ~in_range[:, None]

    work.g.fill(0.0)
    np.divide(numer[None, :], denom_nodes, out=work.g, where=work.keep)
    total = h * work.g.sum(axis=1) - 0.5 * h * (work.g[:, 0] + work.g[:, -1])

    edge_l = pc - eps
    edge_r = pc + eps
    has_l = in_range & (edge_l >= lo - 1e-12 * h)
    has_r = in_range & (edge_r <= hi + 1e-12 * h)
    both = has_l & has_r

    xl = np.clip(edge_l, lo, hi)
    xr = np.clip(edge_r, lo, hi)
    jl = np.clip(np.floor((xl - lo) / h + 1e-9).astype(np.int64), 0, n - 1)
    jr = np.clip(np.ceil((xr - lo) / h - 1e-9).astype(np.int64), 0, n - 1)
    rows = np.arange(m)
    g_jl = work.g[rows, jl]
    g_jr = work.g[rows, jr]
    g_xl = _lerp(numer, lo, h, xl) / denom_at(xl)
    g_xr = _lerp(numer, lo, h, xr) / denom_at(xr)
    part_l = (xl - (lo + jl * h)) * 0.5 * (g_jl + g_xl)
    part_r = ((lo + jr * h) - xr) * 0.5 * (g_jr + g_xr)

    fix = (np.where(has_l, part_l - 0.5 * h * g_jl, 0.0)
           + np.where(has_r, part_r - 0.5 * h * g_jr, 0.0))
    if pole_correction:
        corr = 2.0 * eps * _lerp(numer_prime, lo, h, np.clip(pc, lo, hi))
        corr = corr * correction_scale
        fix += np.where(both, corr, 0.0)
    if diag is not None:
        diag["one_sided_poles"] = diag.get("one_sided_poles", 0) + int(
            np.count_nonzero(in_range & ~both))
        diag["out_of_range_poles"] = diag.get("out_of_range_poles", 0) + int(
            np.count_nonzero(~in_range))
    return total + np.where(in_range, fix, 0.0)


def pv_inner_integral(samples: np.ndarray, axis: np.ndarray, pole: float,
                      denom: Callable[[np.ndarray], np.ndarray],
                      cfg: ReconConfig | None = None,
                      correction_scale: float = 1.0,
                      diag: dict | None = None) -> float:
    """Principal-value integral of samples/denom(x) across a simple pole.

    Parameters
    ----------
    samples : ndarray
        Integrand-numerator values on the uniform ``axis``.
    axis : ndarray
        Uniform sample positions (ascending).
    pole : float
        Pole position in axis units; the denominator must vanish only there.
    denom : callable
        Maps axis positions to denominator values (vectorized).
    cfg : ReconConfig, optional
        Supplies ``epsilon`` (default: one grid step) and ``pole_correction``.
    correction_scale : float
        Extra factor on the pole term (fan mode's 1/(D cos(alpha_i))).
    diag : dict, optional
        If given, incremented with ``one_sided_poles`` / ``out_of_range_poles``
        counts for boundary poles.

    Returns the quadrature over samples outside [pole - eps, pole + eps] plus
    the ``2*eps * d(samples)/dx|_pole`` pole replacement (two-sided case).
    """
    samples = np.asarray(samples, dtype=np.float64)
    axis = np.asarray(axis, dtype=np.float64)
    if cfg is None:
        cfg = ReconConfig()
    h = axis[1] - axis[0]
    eps = cfg.resolve_epsilon(h)
    poles = np.array([pole], dtype=np.float64)
    denom_nodes = denom(axis)[None, :].astype(np.float64)
    out = _pv_rows(axis, samples, central_difference(samples, h), poles,
                   denom_nodes, denom, eps,
                   pole_correction=cfg.pole_correction,
                   correction_scale=correction_scale, diag=diag)
    return float(out[0])


def _pixel_coords(grid_n: int, R: float):
    axis = np.linspace(-R, R, grid_n)
    X, Y = np.meshgrid(axis, axis)
    inside = np.hypot(X, Y) < R
    return X, Y, inside


def reconstruct_parallel(s: ParallelSinogram, cfg: ReconConfig) -> Image:
    """Invert a parallel sinogram on a grid_n x grid_n image over [-R, R]^2.

    Per pixel: dPhi/deta by central differences for each sigma, the PV inner
    integral with pole ``x sin(sigma) + y cos(sigma)``, a periodic trapezoid
    over sigma, and the -1/(4 pi^2) scale.  Pixels with r >= R are 0.
    """
    eta = s.eta_axis
    h_eta = eta[1] - eta[0]
    eps = cfg.resolve_epsilon(h_eta)
    sigma = s.sigma_axis
    dphi = central_difference(s.values, h_eta)
    d2phi = central_difference(dphi, h_eta)

    X, Y, inside = _pixel_coords(cfg.grid_n, s.R)
    px, py = X[inside], Y[inside]
    acc = np.zeros(px.size)
    work = _PVWorkspace(px.size, eta.size)
    denom_nodes = np.empty((px.size, eta.size))
    diag: dict = {}
    for k in range(sigma.size):
        sin_s, cos_s = np.sin(sigma[k]), np.cos(sigma[k])
        poles = px * sin_s + py * cos_s
        np.subtract(eta[None, :], poles[:, None], out=denom_nodes)
        acc += _pv_rows(eta, dphi[k], d2phi[k], poles, denom_nodes,
                        lambda x, p=poles: x - p, eps,
                        pole_correction=cfg.pole_correction,
                        work=work, diag=diag)
    values = np.zeros_like(X)
    values[inside] = -acc * (TWO_PI / sigma.size) / FOUR_PI_SQ
    return _finished(Image(values=values, R=s.R, meta={"method": "parallel", **diag}))


def reconstruct_fan(s: FanSinogram, cfg: ReconConfig) -> Image:
    """Invert a fan sinogram on a grid_n x grid_n image over [-R, R]^2.

    Per sigma sample (the tau grid reused as the sigma grid): gathers
    ``g(alpha) = ln I(alpha, alpha + sigma)`` with periodic linear
    interpolation in tau, differentiates in alpha, and accumulates the PV
    inner integral with denominator ``D sin(alpha) - p`` and pole
    ``arcsin(p/D)``; scale +1/(4 pi^2).  Pixels with r >= R are 0.
    """
    geom = s.geom
    alpha = s.alpha_axis
    h_alpha = alpha[1] - alpha[0]
    eps = cfg.resolve_epsilon(h_alpha)
    tau = s.tau_axis
    h_tau = TWO_PI / geom.n_tau
    n_tau, n_alpha = geom.n_tau, geom.n_alpha
    ln_i = np.log(s.values)
    d_sin = geom.D * np.sin(alpha)

    X, Y, inside = _pixel_coords(cfg.grid_n, geom.R)
    px, py = X[inside], Y[inside]
    acc = np.zeros(px.size)
    work = _PVWorkspace(px.size, n_alpha)
    denom_nodes = np.empty((px.size, n_alpha))
    cols = np.arange(n_alpha)
    diag: dict = {}
    for k in range(n_tau):
        t = (tau[k] + alpha) / h_tau
        i0 = np.floor(t).astype(np.int64) % n_tau
        fr = t - np.floor(t)
        g = ln_i[i0, cols] * (1.0 - fr) + ln_i[(i0 + 1) % n_tau, cols] * fr
        numer = central_difference(g, h_alpha)
        numer_prime = central_difference(numer, h_alpha)

        sin_s, cos_s = np.sin(tau[k]), np.cos(tau[k])
        pval = px * sin_s + py * cos_s
        poles = np.where(np.abs(pval) < geom.D,
                         np.arcsin(np.clip(pval / geom.D, -1.0, 1.0)),
                         np.inf)
        np.subtract(d_sin[None, :], pval[:, None], out=denom_nodes)
        if cfg.jacobian_correction:
            scale = 1.0 / (geom.D * np.cos(np.where(np.isfinite(poles), poles, 0.0)))
        else:
            scale = 1.0
        acc += _pv_rows(alpha, numer, numer_prime, poles, denom_nodes,
                        lambda x, p=pval: geom.D * np.sin(x) - p, eps,
                        pole_correction=cfg.pole_correction,
                        correction_scale=scale, work=work, diag=diag)
    values = np.zeros_like(X)
    values[inside] = acc * (TWO_PI / n_tau) / FOUR_PI_SQ
    return _finished(Image(values=values, R=geom.R, meta={"method": "fan", **diag}))


def _finished(image: Image) -> Image:
    if not np.all(np.isfinite(image.values)):
        raise FloatingPointError(
            f"{image.meta.get('method', '?')} reconstruction produced non-finite pixels")
    return image
