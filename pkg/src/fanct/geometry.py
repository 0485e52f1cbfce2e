"""Scanning geometry: fan-beam ray coordinates, line coordinates, and the maps
between them.

Conventions
-----------
A ray is addressed by the fan angle ``alpha`` (measured from the central ray
through the rotation axis) and the object rotation angle ``tau``.  A straight
line in the object plane is addressed by its signed offset ``eta`` and normal
angle ``sigma`` via ``x*sin(sigma) + y*cos(sigma) = eta``.  The two systems are
linked by ``sigma = tau - alpha`` and ``eta = D*sin(alpha)``.

The rotation sense is fixed by the ray parameterization
``x = x'*cos(tau) + (D+x')*tan(alpha)*sin(tau)``,
``y = -x'*sin(tau) + (D+x')*tan(alpha)*cos(tau)`` and the object-frame rotation
``x' = x*cos(tau) - y*sin(tau)``, ``y' = x*sin(tau) + y*cos(tau)``; the
round-trip and end-to-end reconstruction tests pin the handedness.

Angles ``tau`` and ``sigma`` are normalized into [0, 2*pi) on construction;
``alpha`` is a signed fan angle bounded by ``arcsin(R/D) < pi/2``, so the
``tan(alpha)`` singularity is unreachable for valid geometries (D > R).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def normalize_angle(angle: float) -> float:
    """Wrap an angle into [0, 2*pi)."""
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    return 0.0 if a == TWO_PI else a


@dataclass(frozen=True)
class FanGeometry:
    """Fan-beam scanning geometry.

    Parameters
    ----------
    D : float
        Source-to-rotation-axis distance.
    L : float
        Radius of the cylindrical film surface centered on the source.
        Affects only the K/L**2 intensity scale.
    R : float
        Object support cylinder radius; attenuation vanishes outside.
    K : float
        Source intensity constant.
    n_alpha : int
        Detector samples per view, uniform over [-alpha_max, +alpha_max].
        Odd counts place alpha = 0 on the grid.
    n_tau : int
        Number of views, uniform over [0, 2*pi), periodic.
    """

    D: float
    L: float
    R: float
    K: float
    n_alpha: int
    n_tau: int

    def __post_init__(self):
        if not (self.D > self.R > 0.0):
            raise ValueError(f"require D > R > 0, got D={self.D}, R={self.R}")
        if self.L <= 0.0 or self.K <= 0.0:
            raise ValueError(f"require L > 0 and K > 0, got L={self.L}, K={self.K}")
        if self.n_alpha < 3:
            raise ValueError(f"require n_alpha >= 3, got {self.n_alpha}")
        if self.n_tau < 4:
            raise ValueError(f"require n_tau >= 4, got {self.n_tau}")

    @property
    def alpha_max(self) -> float:
        """Largest fan angle whose ray still meets the support: arcsin(R/D)."""
        return math.asin(self.R / self.D)

    def to_dict(self) -> dict:
        return {"D": self.D, "L": self.L, "R": self.R, "K": self.K,
                "n_alpha": self.n_alpha, "n_tau": self.n_tau}

    @classmethod
    def from_dict(cls, d: dict) -> "FanGeometry":
        try:
            return cls(D=float(d["D"]), L=float(d["L"]), R=float(d["R"]),
                       K=float(d["K"]), n_alpha=int(d["n_alpha"]),
                       n_tau=int(d["n_tau"]))
        except KeyError as exc:
            raise ValueError(f"geometry JSON missing key {exc}") from exc


@dataclass(frozen=True)
class RayCoords:
    """A fan ray: fan angle ``alpha`` and view angle ``tau`` (wrapped)."""

    alpha: float
    tau: float

    def __post_init__(self):
        object.__setattr__(self, "tau", normalize_angle(self.tau))


@dataclass(frozen=True)
class LineCoords:
    """A line x*sin(sigma) + y*cos(sigma) = eta, with ``sigma`` wrapped."""

    eta: float
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "sigma", normalize_angle(self.sigma))


def fan_to_line(ray: RayCoords, D: float) -> LineCoords:
    """Map a fan ray to its line coordinates: eta = D*sin(alpha), sigma = tau - alpha."""
    return LineCoords(eta=D * math.sin(ray.alpha),
                      sigma=ray.tau - ray.alpha)


def line_to_fan(line: LineCoords, D: float) -> RayCoords:
    """Inverse of :func:`fan_to_line`: alpha = arcsin(eta/D), tau = sigma + alpha.

    Raises
    ------
    ValueError
        If ``|eta| >= D`` (no fan ray realizes the line).
    """
    if abs(line.eta) >= D:
        raise ValueError(f"|eta|={abs(line.eta)} >= D={D}: line has no fan ray")
    alpha = math.asin(line.eta / D)
    return RayCoords(alpha=alpha, tau=line.sigma + alpha)


def ray_entry_exit(alpha: float, geom: FanGeometry) -> tuple[float, float] | None:
    """Ray-parameter values where the ray crosses the support cylinder.

    Returns ``(x1, x2)`` with ``x1 <= x2`` from
    ``x'_{1,2} = (-D tan^2 a +- sqrt(R^2 + (R^2 - D^2) tan^2 a)) / (1 + tan^2 a)``,
    or ``None`` when the discriminant is negative (|D sin(alpha)| > R: miss).
    """
    t2 = math.tan(alpha) ** 2
    disc = geom.R ** 2 + (geom.R ** 2 - geom.D ** 2) * t2
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    denom = 1.0 + t2
    x1 = (-geom.D * t2 - root) / denom
    x2 = (-geom.D * t2 + root) / denom
    return (x1, x2)


def ray_point(alpha: float, tau: float, x_prime: float, D: float) -> tuple[float, float]:
    """Object-frame point at parameter ``x_prime`` along the ray (alpha, tau)."""
    ta = math.tan(alpha)
    x = x_prime * math.cos(tau) + (D + x_prime) * ta * math.sin(tau)
    y = -x_prime * math.sin(tau) + (D + x_prime) * ta * math.cos(tau)
    return (x, y)


def rotate_to_object_frame(x: float, y: float, tau: float) -> tuple[float, float]:
    """Rigid rotation into the object frame: x' = x cos(tau) - y sin(tau), y' = x sin(tau) + y cos(tau)."""
    c, s = math.cos(tau), math.sin(tau)
    return (x * c - y * s, x * s + y * c)
