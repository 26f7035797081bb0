"""Unicritical Blaschke products on the closed disk.

Covers evaluation and derivative, circle fixed points through the exact lift

    lift(t) = n * (t - 2 arg(1 + conj(mu) e^{i t})),

Denjoy-Wolff classification into elliptic / parabolic / hyperbolic, the
threshold K_theta where the type changes along a theta-slice of parameter
space, backward-orbit sampling of the circle Julia set, and a pixel
classifier for the parameter disk of w = -mu.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circle_dynamics import EPS_PAR, CircleLift, displacement_roots
from .core_maps import TWO_PI, MapParams, mu_from_params, wrap_angle
from .errors import BudgetExceededError, PoleAtError, QrdynError

#: orbit budget for the Denjoy-Wolff iteration
DW_MAX_STEPS = 100_000
#: successive-step threshold declaring orbit convergence
DW_STEP_TOL = 1e-13
#: an orbit limit is interior when its modulus is below 1 minus this margin
DW_INTERIOR_MARGIN = 1e-9
#: backward-orbit point budget for Julia sampling
JULIA_POINT_BUDGET = 1_000_000
#: upper end of the K-bisection; elliptic there reports an infinite threshold
K_MAX = 1e6


@dataclass(frozen=True)
class BlaschkeParams:
    """B(z) = ((z + mu)/(1 + conj(mu) z))^n; the parameter-space slot is w = -mu."""

    mu: complex
    n: int

    def __post_init__(self):
        if abs(self.mu) >= 1.0:
            raise ValueError(f"|mu| must be < 1, got {abs(self.mu)}")
        if self.n < 2:
            raise ValueError(f"degree must be >= 2, got {self.n}")


def blaschke_for_params(p: MapParams) -> BlaschkeParams:
    return BlaschkeParams(p.mu, p.n)


def _check_pole(b: BlaschkeParams, z) -> None:
    if np.ndim(z) == 0 and abs(b.mu) > 1e-150:
        pole = -1.0 / np.conjugate(b.mu)
        if abs(complex(z) - complex(pole)) < 1e-14:
            raise PoleAtError(f"evaluation at the pole {complex(pole)!r}")


def eval_B(b: BlaschkeParams, z):
    """Evaluate B; scalar arguments are checked against the pole."""
    _check_pole(b, z)
    m = (z + b.mu) / (1.0 + np.conjugate(b.mu) * z)
    return m ** b.n


def blaschke_derivative(b: BlaschkeParams, z):
    """Analytic derivative n m^{n-1} (1 - |mu|^2) / (1 + conj(mu) z)^2."""
    _check_pole(b, z)
    denom = 1.0 + np.conjugate(b.mu) * z
    m = (z + b.mu) / denom
    return b.n * m ** (b.n - 1) * (1.0 - abs(b.mu) ** 2) / (denom * denom)


def blaschke_lift(b: BlaschkeParams) -> CircleLift:
    """Exact lift of B restricted to the circle, value at 0 in [0, 2*pi)."""
    muc = np.conjugate(b.mu)

    def raw(t):
        t = np.asarray(t, dtype=float)
        return b.n * (t - 2.0 * np.angle(1.0 + muc * np.exp(1j * t)))

    shift = -TWO_PI * math.floor(float(raw(0.0)) / TWO_PI)
    return CircleLift(b.n, lambda t: raw(t) + shift)


def boundary_multiplier(b: BlaschkeParams, t):
    """Angular derivative n (1 - |mu|^2) / |1 + conj(mu) e^{i t}|^2.

    At a circle fixed point this equals the real multiplier B'(e^{i t}).
    """
    w = 1.0 + np.conjugate(b.mu) * np.exp(1j * np.asarray(t, dtype=float))
    return b.n * (1.0 - abs(b.mu) ** 2) / np.abs(w) ** 2


@dataclass(frozen=True)
class CircleFixedPoint:
    angle: float
    multiplier: float
    neutral_ambiguity: bool = False


def circle_fixed_points(b: BlaschkeParams) -> list[CircleFixedPoint]:
    """All circle fixed points of B with their real multipliers."""
    g = blaschke_lift(b)
    roots, flags = displacement_roots(g, 0.0)
    out = []
    for t, tangent in zip(roots, flags):
        m = float(boundary_multiplier(b, t))
        out.append(CircleFixedPoint(t, m, tangent or abs(m - 1.0) <= EPS_PAR))
    return out


class MapKind(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Classification:
    """Denjoy-Wolff data: kind, the common orbit limit, and its multiplier."""

    kind: MapKind
    denjoy_wolff: complex | None
    multiplier: float | None


def denjoy_wolff(b: BlaschkeParams) -> Classification:
    """Classify B by iterating 0 and, failing interior convergence, by the
    least circle multiplier.

    The orbit runs for at most 10^5 steps.  If successive steps drop below
    1e-13 with the limit strictly inside the disk, B is elliptic with that
    interior fixed point.  Otherwise the circle fixed point of smallest
    multiplier is the Denjoy-Wolff point when it is attracting or neutral;
    if every circle fixed point repels and the orbit did not settle, the
    classification is reported as unresolved rather than guessed.
    """
    mu, muc, n = b.mu, b.mu.conjugate(), b.n
    z = 0j
    converged = False
    for _ in range(DW_MAX_STEPS):
        z1 = ((z + mu) / (1.0 + muc * z)) ** n
        if abs(z1 - z) < DW_STEP_TOL:
            z = z1
            converged = True
            break
        z = z1
    if converged and abs(z) < 1.0 - DW_INTERIOR_MARGIN:
        return Classification(MapKind.ELLIPTIC, z, float(abs(blaschke_derivative(b, z))))
    pts = circle_fixed_points(b)
    best = min(pts, key=lambda c: c.multiplier)
    dw = cmath.exp(1j * best.angle)
    if best.multiplier < 1.0 - EPS_PAR:
        return Classification(MapKind.HYPERBOLIC, dw, best.multiplier)
    if abs(best.multiplier - 1.0) <= EPS_PAR:
        return Classification(MapKind.PARABOLIC, dw, best.multiplier)
    return Classification(MapKind.UNRESOLVED, None, None)


def classify_H(p: MapParams) -> Classification:
    """Classification of H through its associated Blaschke product."""
    return denjoy_wolff(blaschke_for_params(p))


def _kind_from_circle(b: BlaschkeParams) -> MapKind:
    # Exact type test: an attracting or neutral circle fixed point is the
    # Denjoy-Wolff point; if all circle fixed points repel, the map is elliptic.
    best = min(c.multiplier for c in circle_fixed_points(b))
    if best < 1.0 - EPS_PAR:
        return MapKind.HYPERBOLIC
    if abs(best - 1.0) <= EPS_PAR:
        return MapKind.PARABOLIC
    return MapKind.ELLIPTIC


def k_theta_threshold(theta: float, n: int) -> float:
    """The K where the theta-slice leaves the elliptic region, or inf.

    Bisection on [1, 10^6] against the classification kind, to 1e-6 relative.
    """
    if n < 2:
        raise ValueError("degree must be >= 2")

    def elliptic_at(K: float) -> bool:
        b = BlaschkeParams(mu_from_params(K, theta), n)
        return _kind_from_circle(b) is MapKind.ELLIPTIC

    if elliptic_at(K_MAX):
        return math.inf
    lo, hi = 1.0, K_MAX
    while hi - lo > 1e-6 * lo:
        mid = 0.5 * (lo + hi)
        if elliptic_at(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _dedup_sorted_angles(angles: np.ndarray) -> np.ndarray:
    angles = np.sort(wrap_angle(angles))
    if angles.size <= 1:
        return angles
    keep = np.ones(angles.size, dtype=bool)
    keep[1:] = np.diff(angles) > 1e-11
    if TWO_PI - angles[-1] + angles[0] <= 1e-11:
        keep[-1] = False
    return angles[keep]


def julia_on_circle(b: BlaschkeParams, depth: int, seed_angle: float | None = None) -> np.ndarray:
    """Backward-orbit tree of a repelling circle fixed point, to the given depth.

    Every level takes all n preimage branches, solved on the monotone lift,
    so the output is deterministic.  Returns the sorted union of all levels.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if b.n ** depth > JULIA_POINT_BUDGET:
        raise BudgetExceededError(
            f"{b.n}^{depth} preimages exceed the {JULIA_POINT_BUDGET} point budget"
        )
    if seed_angle is None:
        reps = [c for c in circle_fixed_points(b) if c.multiplier > 1.0 + EPS_PAR]
        if not reps:
            raise QrdynError(
                "no repelling circle fixed point to seed from (parabolic boundary)"
            )
        reps.sort(key=lambda c: (-c.multiplier, c.angle))
        seed_angle = reps[0].angle

    g = blaschke_lift(b)
    g0 = float(g.lift(0.0))
    current = np.array([float(wrap_angle(seed_angle))])
    collected = [current]
    for _ in range(depth):
        tau = current
        j0 = np.ceil((g0 - tau) / TWO_PI - 1e-12)
        targets = (tau[:, None] + TWO_PI * (j0[:, None] + np.arange(b.n)[None, :])).ravel()
        lo = np.zeros_like(targets)
        hi = np.full_like(targets, TWO_PI)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            less = np.asarray(g.lift(mid), dtype=float) < targets
            lo = np.where(less, mid, lo)
            hi = np.where(less, hi, mid)
        current = 0.5 * (lo + hi)
        collected.append(current)
    return _dedup_sorted_angles(np.concatenate(collected))


def julia_circle_H(p: MapParams, depth: int) -> np.ndarray:
    """Circle Julia angles of the induced map: the square-root preimage of
    the Blaschke angles, t -> {t/2, t/2 + pi}."""
    ang = julia_on_circle(blaschke_for_params(p), depth)
    half = ang / 2.0
    return _dedup_sorted_angles(np.concatenate([half, half + math.pi]))


#: atlas pixel codes
ATLAS_OUTSIDE = 0
ATLAS_ELLIPTIC = 1
ATLAS_HYPERBOLIC = 2
ATLAS_BAND = 3


def classify_disk_grid(
    n: int,
    res: int,
    iters: int = 1200,
    rows: tuple[int, int] | None = None,
) -> np.ndarray:
    """Classify the unit-disk grid of parameters w = -mu for degree n.

    Returns uint8 codes per pixel: 0 outside the disk, 1 elliptic,
    2 hyperbolic, 3 undecided band around the parabolic boundary.  The
    decision iterates the orbit of 0 per pixel: interior convergence is
    conclusive for elliptic; orbits parked near the circle after the budget
    are hyperbolic; the rest stay in the band.
    """
    if rows is None:
        rows = (0, res)
    r0, r1 = rows
    step = 2.0 / res
    ys = 1.0 - (np.arange(r0, r1, dtype=float) + 0.5) * step
    xs = -1.0 + (np.arange(res, dtype=float) + 0.5) * step
    W = xs[None, :] + 1j * ys[:, None]
    inside = np.abs(W) < 1.0 - 1e-12

    flat_idx = np.flatnonzero(inside.ravel())
    mu = -W.ravel()[flat_idx]
    muc = np.conjugate(mu)
    z = np.zeros(flat_idx.size, dtype=complex)
    code = np.full(flat_idx.size, ATLAS_BAND, dtype=np.uint8)
    act = np.arange(flat_idx.size)
    for _ in range(iters):
        if act.size == 0:
            break
        za = z[act]
        zn = ((za + mu[act]) / (1.0 + muc[act] * za)) ** n
        moved = np.abs(zn - za)
        z[act] = zn
        ell = (moved < 1e-12) & (np.abs(zn) < 1.0 - 5e-3)
        if ell.any():
            code[act[ell]] = ATLAS_ELLIPTIC
            act = act[~ell]
    if act.size:
        hyp = np.abs(z[act]) > 1.0 - 5e-3
        code[act[hyp]] = ATLAS_HYPERBOLIC

    out = np.zeros(W.size, dtype=np.uint8)
    out[flat_idx] = code
    return out.reshape(W.shape)
