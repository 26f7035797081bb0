"""The induced circle endomorphism, its lift, the half-angle operator T,
and enumeration of fixed and switched ray angles with stability data.

The lift of the circle map of H has the closed form

    g(x) = n * (x + delta(x - theta)),
    delta(t) = atan2((1 - K) sin t cos t, K cos^2 t + sin^2 t),

where delta is the smooth 2*pi-periodic angular correction of the stretch
(the real part of its atan2 argument is always >= 1, so the branch is
globally continuous).  Root finding for fixed and switched angles scans a
4096-point grid of the lift displacement and bisects every sign change;
near-tangent double roots are picked up by a secondary minimum scan.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .core_maps import TWO_PI, MapParams, wrap_angle
from .errors import DegenerateIntervalsError

#: half-width of the neutral multiplier band
EPS_PAR = 1e-8
#: central finite-difference step used for lift multipliers
FD_STEP = 1e-6
#: initial scan resolution for displacement roots
SCAN_POINTS = 4096
#: bisection stops once the bracket is this narrow
ROOT_TOL = 1e-13
#: refined residual below which a tangency counts as a (double) root
TANGENT_TOL = 1e-10
#: grid minima of the displacement below this are inspected for tangencies
TANGENT_SCAN_TOL = 1e-6


def _delta(p: MapParams, t):
    t = np.asarray(t, dtype=float)
    s, c = np.sin(t), np.cos(t)
    return np.arctan2((1.0 - p.K) * s * c, p.K * c * c + s * s)


def arg_h_lift(p: MapParams, x):
    """Continuous lift of x -> arg h(e^{i x}); increases by 2*pi per period."""
    x = np.asarray(x, dtype=float)
    return x + _delta(p, x - p.theta)


def circle_map_arg(p: MapParams, phi):
    """arg of the induced circle map at e^{i phi}, in [0, 2*pi)."""
    return wrap_angle(p.n * arg_h_lift(p, phi))


@dataclass(frozen=True)
class CircleLift:
    """A degree-n circle endomorphism given by a globally defined lift.

    ``lift`` must be evaluable at arbitrary real arguments (scalars or numpy
    arrays) and satisfy lift(x + 2*pi) = lift(x) + 2*pi*degree.
    """

    degree: int
    lift: Callable

    def __call__(self, x):
        return self.lift(x)


def build_lift(p: MapParams) -> CircleLift:
    """Lift of the circle map of H, normalized so the value at 0 is in [0, 2*pi)."""

    def raw(x):
        return p.n * arg_h_lift(p, x)

    shift = -TWO_PI * math.floor(float(raw(0.0)) / TWO_PI)
    return CircleLift(p.n, lambda x: raw(x) + shift)


def apply_T(g: CircleLift) -> CircleLift:
    """Half-angle rescaling: the endomorphism whose lift is x -> lift(2x)/2.

    The lift is returned as-is (no renormalization at 0) so that the exact
    functional equation 2*T(g)-lift(x) = g-lift(2x) holds.
    """
    return CircleLift(g.degree, lambda x: g.lift(2.0 * np.asarray(x, dtype=float)) / 2.0)


def _refine_tangency(g: CircleLift, offset: float, lo: float, hi: float) -> float:
    # shrink the window around the argmin of the wrapped displacement
    x = 0.5 * (lo + hi)
    for _ in range(5):
        xs = np.linspace(lo, hi, 513)
        v = np.asarray(g.lift(xs), dtype=float) - xs - offset
        d = np.abs(v - TWO_PI * np.round(v / TWO_PI))
        i = int(np.argmin(d))
        x = float(xs[i])
        width = (hi - lo) / 512.0
        lo, hi = x - 2.0 * width, x + 2.0 * width
    return x


def _circular_gap(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def displacement_roots(g: CircleLift, offset: float) -> tuple[list[float], list[bool]]:
    """All x in [0, 2*pi) with lift(x) - x = offset (mod 2*pi).

    The scan interval is padded by one cell at both ends so roots sitting at
    the wrap point (within float noise of 0) stay interior; all detected
    sign changes are then bisected simultaneously.  Returns the sorted roots
    and, per root, whether it came from a near-tangent minimum (a double
    root at a parabolic parameter) rather than a clean sign change.
    """
    step = TWO_PI / SCAN_POINTS
    xs = np.linspace(-step, TWO_PI + step, SCAN_POINTS + 3)
    vals = np.asarray(g.lift(xs), dtype=float) - xs - offset
    cells = xs.size - 1

    levels = np.floor(vals / TWO_PI)
    exact_hits = np.flatnonzero(vals == TWO_PI * np.round(vals / TWO_PI))
    exact: list[float] = [float(xs[i]) for i in exact_hits]

    blo: list[float] = []
    bhi: list[float] = []
    btarget: list[float] = []
    for i in np.flatnonzero(levels[:-1] != levels[1:]):
        flo, fhi = vals[i], vals[i + 1]
        jlo = int(min(levels[i], levels[i + 1])) + 1
        jhi = int(max(levels[i], levels[i + 1]))
        for j in range(jlo, jhi + 1):
            t = TWO_PI * j
            if (flo - t) * (fhi - t) < 0.0:
                blo.append(xs[i])
                bhi.append(xs[i + 1])
                btarget.append(t)

    clean: list[float] = list(exact)
    if blo:
        lo = np.array(blo)
        hi = np.array(bhi)
        tt = np.array(btarget)
        slo = np.asarray(g.lift(lo), dtype=float) - lo - offset - tt < 0.0
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            fm = np.asarray(g.lift(mid), dtype=float) - mid - offset - tt
            going_up = (fm < 0.0) == slo
            lo = np.where(going_up, mid, lo)
            hi = np.where(going_up, hi, mid)
        clean.extend((0.5 * (lo + hi)).tolist())

    # secondary scan: local minima of the wrapped displacement catch double
    # roots; candidates inside the flat basin of a clean root are artifacts
    tangent: list[float] = []
    dist = np.abs(vals - TWO_PI * np.round(vals / TWO_PI))
    interior = np.flatnonzero(
        (dist[1:-1] < TANGENT_SCAN_TOL)
        & (dist[1:-1] <= dist[:-2])
        & (dist[1:-1] <= dist[2:])
    )
    for i in interior + 1:
        x = _refine_tangency(g, offset, xs[i - 1], xs[i + 1])
        v = float(g.lift(x)) - x - offset
        if abs(v - TWO_PI * round(v / TWO_PI)) < TANGENT_TOL:
            tangent.append(x)
    tangent = [
        x for x in tangent if all(_circular_gap(x, r) > 2.0 * step for r in clean)
    ]
    tangent.sort()
    merged_tangent: list[float] = []
    for x in tangent:
        if merged_tangent and _circular_gap(x, merged_tangent[-1]) <= 2.0 * step:
            continue
        merged_tangent.append(x)

    found = [(x, False) for x in clean] + [(x, True) for x in merged_tangent]
    if not found:
        return [], []
    canonical: list[tuple[float, bool]] = []
    for x, flag in found:
        x = float(wrap_angle(x))
        if x >= TWO_PI - 1e-12:
            x = 0.0
        canonical.append((x, flag))
    canonical.sort(key=lambda rf: rf[0])
    roots: list[float] = []
    flags: list[bool] = []
    for x, flag in canonical:
        if roots and _circular_gap(x, roots[-1]) < 1e-9:
            flags[-1] = flags[-1] or flag
            continue
        roots.append(x)
        flags.append(flag)
    if len(roots) > 1 and _circular_gap(roots[-1], roots[0]) < 1e-9:
        roots.pop()
        flags.pop()
    return roots, flags


def lift_multiplier(g: CircleLift, x: float, iterate: int = 1) -> float:
    """Derivative of the (possibly second-iterate) lift at x, by central differences."""
    if iterate == 1:
        return (float(g.lift(x + FD_STEP)) - float(g.lift(x - FD_STEP))) / (2.0 * FD_STEP)
    if iterate == 2:
        def L(t: float) -> float:
            return float(g.lift(float(g.lift(t))))

        return (L(x + FD_STEP) - L(x - FD_STEP)) / (2.0 * FD_STEP)
    raise ValueError("only first and second iterates are supported")


class RayKind(Enum):
    FIXED = "fixed"
    SWITCHED = "switched"


class Stability(Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    NEUTRAL = "neutral"


def stability_of(multiplier: float) -> Stability:
    if abs(multiplier - 1.0) <= EPS_PAR:
        return Stability.NEUTRAL
    return Stability.ATTRACTING if multiplier < 1.0 else Stability.REPELLING


@dataclass(frozen=True)
class RayFixedPoint:
    """An angle fixed (or antipodally switched) by the circle map of H."""

    phi: float
    kind: RayKind
    stability: Stability
    multiplier: float
    neutral_ambiguity: bool = False


def fixed_and_switched_points(p: MapParams) -> list[RayFixedPoint]:
    """All fixed angles of the circle map and, for odd degree, all switched angles.

    Fixed angles solve lift(x) - x = 0 (mod 2*pi), switched angles solve
    lift(x) - x = pi (mod 2*pi); both are decided directly from the map, and
    multipliers of switched points come from the second-iterate lift.
    """
    g = build_lift(p)
    out: list[RayFixedPoint] = []
    roots, flags = displacement_roots(g, 0.0)
    for x, tangent in zip(roots, flags):
        m = lift_multiplier(g, x)
        st = stability_of(m)
        out.append(RayFixedPoint(x, RayKind.FIXED, st, m, tangent or st is Stability.NEUTRAL))
    if p.n % 2 == 1:
        roots, flags = displacement_roots(g, math.pi)
        for x, tangent in zip(roots, flags):
            m = lift_multiplier(g, x, iterate=2)
            st = stability_of(m)
            out.append(
                RayFixedPoint(x, RayKind.SWITCHED, st, m, tangent or st is Stability.NEUTRAL)
            )
    out.sort(key=lambda rp: rp.phi)
    return out


def interval_wrap_counts(p: MapParams) -> list[int]:
    """Per-arc wrap counts n_j between consecutive fixed points (odd degree).

    The j-th entry is 0 when the arc maps onto itself and 1 when the image
    wraps once around the circle; the counts satisfy n = 2 * sum(n_j) + 1.
    """
    if p.n % 2 == 0:
        raise ValueError("wrap counts are defined for odd degree only")
    g = build_lift(p)
    fixed, _ = displacement_roots(g, 0.0)
    if not fixed:
        raise ValueError("the circle map has no fixed points")
    fixed = sorted(fixed)
    w1 = fixed[0]
    half = [x for x in fixed if x < w1 + math.pi - 1e-9]
    arcs = half + [w1 + math.pi]
    for a, b in zip(arcs, arcs[1:]):
        if b - a < 1e-9:
            raise DegenerateIntervalsError(
                f"fixed points at {a!r} and {b!r} are not separated"
            )

    def disp(x: float) -> float:
        return float(g.lift(x)) - x

    return [round((disp(b) - disp(a)) / TWO_PI) for a, b in zip(arcs, arcs[1:])]
