"""Closed-form evaluation of the stretch map h, its power H, and ray data.

The family is parameterized by a stretch factor K >= 1 applied in the
direction e^{i theta}, followed by the n-th power map.  Everything in this
module is a direct formula; all evaluators accept numpy arrays in place of
scalars and are pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

#: tolerance for angle comparisons mod 2*pi
ANGLE_TOL = 1e-10


def wrap_angle(phi):
    """Map an angle (or array of angles) to the canonical range [0, 2*pi)."""
    return np.mod(phi, TWO_PI)


def angle_dist(a, b):
    """Distance between two angles mod 2*pi."""
    d = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def mu_from_params(K: float, theta: float) -> complex:
    """Complex dilatation e^{2 i theta} (K-1)/(K+1) of the stretch map."""
    if K < 1.0:
        raise ValueError(f"stretch factor must satisfy K >= 1, got {K}")
    return complex(np.exp(2j * theta)) * ((K - 1.0) / (K + 1.0))


@dataclass(frozen=True)
class MapParams:
    """Parameter triple (K, theta, n); mu is derived once and cached."""

    K: float
    theta: float
    n: int
    mu: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.K < 1.0:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.n < 2:
            raise ValueError(f"degree must be >= 2, got {self.n}")
        if not (-math.pi / 2 < self.theta <= math.pi / 2):
            raise ValueError(f"theta must lie in (-pi/2, pi/2], got {self.theta}")
        object.__setattr__(self, "mu", mu_from_params(self.K, self.theta))


@dataclass(frozen=True)
class Ray:
    """A ray from the origin, stored by its normalized angle."""

    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", float(wrap_angle(self.phi)))

    def antipode(self) -> "Ray":
        return Ray(self.phi + math.pi)


def eval_h(p: MapParams, z):
    """The R-linear stretch ((K+1) z + e^{2 i theta} (K-1) conj(z)) / 2."""
    a = 0.5 * (p.K + 1.0)
    b = 0.5 * (p.K - 1.0) * complex(np.exp(2j * p.theta))
    return a * z + b * np.conjugate(z)


def eval_H(p: MapParams, z):
    """The full map: n-th power of the stretch."""
    return eval_h(p, z) ** p.n


def radial_factor(p: MapParams, r, phi):
    """|H(r e^{i phi})| = r^n (1 + (K^2 - 1) cos^2(phi - theta))^{n/2}."""
    c = np.cos(np.asarray(phi, dtype=float) - p.theta)
    return np.asarray(r, dtype=float) ** p.n * (
        1.0 + (p.K * p.K - 1.0) * c * c
    ) ** (p.n / 2.0)


def fixed_ray_radius(p: MapParams, phi):
    """Radius alpha^{1/(1-n)} of the H-fixed point on a fixed ray.

    alpha is the angular stretch factor at phi.  The result is a genuine
    fixed point only when phi is actually a fixed ray of H; the angle is not
    checked here.
    """
    c = np.cos(np.asarray(phi, dtype=float) - p.theta)
    alpha = (1.0 + (p.K * p.K - 1.0) * c * c) ** (p.n / 2.0)
    return alpha ** (1.0 / (1.0 - p.n))
