"""Unit-determinant Moebius self-maps of the disk.

Trace-squared classification, the maps attached to fixed and switched rays
(which drive the dilatation recursion), and stable evaluation of long
composition sequences.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .circle_dynamics import RayKind
from .core_maps import TWO_PI, MapParams, angle_dist, wrap_angle
from .errors import SingularMatrixError

#: renormalize accumulated matrix products this often
RENORM_EVERY = 32


class MoebiusKind(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class DiskMoebius:
    """Matrix [[a, b], [c, d]] acting as z -> (a z + b)/(c z + d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def apply(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    __call__ = apply

    def compose(self, other: "DiskMoebius") -> "DiskMoebius":
        """self after other (matrix product self @ other)."""
        return DiskMoebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def rescaled(self) -> "DiskMoebius":
        s = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        return DiskMoebius(self.a / s, self.b / s, self.c / s, self.d / s)


IDENTITY = DiskMoebius(1.0 + 0j, 0j, 0j, 1.0 + 0j)


def normalize(a: complex, b: complex, c: complex, d: complex) -> DiskMoebius:
    """Scale entries to determinant 1, square-root branch with Re(a+d) >= 0."""
    det = a * d - b * c
    if abs(det) < 1e-150:
        raise SingularMatrixError(f"determinant {det!r} too close to zero")
    s = cmath.sqrt(det)
    a, b, c, d = a / s, b / s, c / s, d / s
    tr = a + d
    if tr.real < 0.0 or (tr.real == 0.0 and tr.imag < 0.0):
        a, b, c, d = -a, -b, -c, -d
    return DiskMoebius(a, b, c, d)


def trace_squared(m: DiskMoebius) -> tuple[float, MoebiusKind]:
    """(a + d)^2 of a unit-determinant matrix, and the kind it implies.

    The kind is parabolic within 1e-9 of 4, elliptic below, hyperbolic above.
    """
    tr = m.a + m.d
    tau = float((tr * tr).real)
    if abs(tau - 4.0) <= 1e-9:
        kind = MoebiusKind.PARABOLIC
    elif tau < 4.0:
        kind = MoebiusKind.ELLIPTIC
    else:
        kind = MoebiusKind.HYPERBOLIC
    return tau, kind


def ray_branch_index(p: MapParams, phi: float, kind: RayKind) -> int:
    """The k in {0, .., n-1} with arg h on the ray equal to (phi + 2k pi)/n
    for fixed rays, or (phi + (2k+1) pi)/n for switched rays."""
    from .circle_dynamics import arg_h_lift

    phi = float(wrap_angle(phi))
    argh = float(wrap_angle(arg_h_lift(p, phi)))
    if kind is RayKind.FIXED:
        k = round((p.n * argh - phi) / TWO_PI) % p.n
        target = (phi + 2.0 * k * math.pi) / p.n
    else:
        k = round((p.n * argh - phi - math.pi) / TWO_PI) % p.n
        target = (phi + (2.0 * k + 1.0) * math.pi) / p.n
    if float(angle_dist(target, argh)) > 1e-7:
        raise ValueError(f"angle {phi!r} is not a {kind.value} ray of these parameters")
    return int(k)


def ray_moebius(p: MapParams, phi: float, kind: RayKind, k: int) -> DiskMoebius:
    """The disk Moebius map whose power orbit of mu gives the dilatation of
    the iterates along the ray.

    Entries are normalized by D = e^{-(n-1) i (phi + 2k pi)/n} sqrt(1-|mu|^2)
    (with 2k+1 in place of 2k on switched rays), which has determinant 1 and
    a real trace.
    """
    if not 0 <= k < p.n:
        raise ValueError(f"branch index must lie in 0..{p.n - 1}, got {k}")
    shift = 2.0 * k * math.pi if kind is RayKind.FIXED else (2.0 * k + 1.0) * math.pi
    ang = (float(phi) + shift) / p.n
    half = cmath.exp(-1j * (p.n - 1) * ang)
    D = half * math.sqrt(1.0 - abs(p.mu) ** 2)
    alpha = half * half
    return DiskMoebius(alpha / D, p.mu / D, alpha * p.mu.conjugate() / D, 1.0 / D)


def tau_fixed_ray(p: MapParams, phi: float, k: int) -> float:
    """Closed-form trace-squared (K+1)^2 cos^2((n-1)(phi + 2k pi)/n) / K."""
    ang = (float(phi) + 2.0 * k * math.pi) / p.n
    c = math.cos((p.n - 1) * ang)
    return (p.K + 1.0) ** 2 * c * c / p.K


def compose_sequence(maps: Sequence[DiskMoebius] | Iterable[DiskMoebius], z: complex) -> complex:
    """Evaluate A_1 o A_2 o ... o A_m at z by accumulated matrix products.

    The product is rescaled every 32 factors so entries stay bounded.
    """
    if abs(z) >= 1.0:
        raise ValueError("the evaluation point must lie in the open unit disk")
    M = IDENTITY
    for i, A in enumerate(maps, start=1):
        M = M.compose(A)
        if i % RENORM_EVERY == 0:
            M = M.rescaled()
    return M.apply(z)


def moebius_power(A: DiskMoebius, m: int) -> DiskMoebius:
    """A^m as a single rescaled matrix."""
    M = IDENTITY
    for i in range(1, m + 1):
        M = M.compose(A)
        if i % RENORM_EVERY == 0:
            M = M.rescaled()
    return M
