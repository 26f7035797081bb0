"""Numerical conjugacy near a fixed point with constant local dilatation.

A local map is given in factored form f = f1 o f2, where f2 fixes z0 with
constant dilatation mu and f1 is holomorphic with Taylor expansion
z0 + (z - z0)^n + ... .  In logarithmic coordinates w = log(z - z0) the
factors become

    f2~(w) = w + log((K+1)/2 + (K-1)/2 * e^{2i(theta - Im w)}),
    f1~(w) = n w + log(1 + sum_j c_{n+j} e^{j w}),

whose correction terms have positive real part inside the working disk, so
the principal branch is globally continuous there.  The conjugacy candidate
at depth k is evaluated pointwise: push w forward k steps under f~, then
fold back k times with w -> (inverse stretch)~(w / n).  The construction
commutes with w -> w + 2 pi i, so the exponentiated map psi_k is well
defined independently of the log branch.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .blaschke import Classification, classify_H
from .circle_dynamics import RayFixedPoint, RayKind, Stability, fixed_and_switched_points
from .core_maps import TWO_PI, MapParams, eval_H, eval_h, mu_from_params
from .errors import BranchLossError, InversionFailureError, NonContractionError

#: residual may not grow by more than this between consecutive depths
RESIDUAL_SLACK = 1e-12
#: iteration stops early once the residual improves by less than this
EARLY_STOP_IMPROVEMENT = 1e-13


@dataclass(frozen=True)
class LocalMap:
    """Factored local map f = f1 o f2 at the fixed point z0.

    f1_coeffs are the Taylor coefficients of f1 - z0 at degrees n, n+1, ...;
    the leading one must be 1.
    """

    z0: complex
    n: int
    f2_mu: complex
    f1_coeffs: tuple[complex, ...] = (1.0 + 0j,)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("local index must be >= 2")
        if abs(self.f2_mu) >= 1.0:
            raise ValueError("|f2_mu| must be < 1")
        coeffs = tuple(complex(c) for c in self.f1_coeffs)
        if not coeffs or abs(coeffs[0] - 1.0) > 1e-12:
            raise ValueError("the degree-n coefficient of f1 must be 1")
        object.__setattr__(self, "f1_coeffs", coeffs)
        object.__setattr__(self, "z0", complex(self.z0))
        object.__setattr__(self, "f2_mu", complex(self.f2_mu))

    def params(self) -> MapParams:
        """Model parameters (K, theta, n) matching the constant dilatation."""
        k = abs(self.f2_mu)
        if k == 0.0:
            return MapParams(1.0, 0.0, self.n)
        K = (1.0 + k) / (1.0 - k)
        theta = cmath.phase(self.f2_mu) / 2.0
        return MapParams(K, theta, self.n)

    def f1(self, z: complex) -> complex:
        u = z - self.z0
        acc = 0j
        for c in reversed(self.f1_coeffs):
            acc = acc * u + c
        return self.z0 + acc * u ** self.n

    def f2(self, z: complex, p: MapParams | None = None) -> complex:
        p = p or self.params()
        return self.z0 + eval_h(p, z - self.z0)

    def apply(self, z: complex, p: MapParams | None = None) -> complex:
        return self.f1(self.f2(z, p))


def local_map_to_json(m: LocalMap) -> dict:
    return {
        "z0": [m.z0.real, m.z0.imag],
        "n": m.n,
        "mu": [m.f2_mu.real, m.f2_mu.imag],
        "f1_coeffs": [[c.real, c.imag] for c in m.f1_coeffs],
    }


def local_map_from_json(obj: dict) -> LocalMap:
    return LocalMap(
        z0=complex(obj["z0"][0], obj["z0"][1]),
        n=int(obj["n"]),
        f2_mu=complex(obj["mu"][0], obj["mu"][1]),
        f1_coeffs=tuple(complex(c[0], c[1]) for c in obj["f1_coeffs"]),
    )


def domain_radius(m: LocalMap, p: MapParams) -> float:
    """Working radius: the degree-n term of f1 dominates its tail by 10x and
    the map contracts the disk, so forward log-orbits march left."""
    cap = (2.2 * p.K ** p.n) ** (-1.0 / (p.n - 1))
    tail = [abs(c) for c in m.f1_coeffs[1:]]
    if not any(tail):
        return cap

    def ok(rho: float) -> bool:
        return sum(t * rho ** (j + 1) for j, t in enumerate(tail)) <= 0.1

    if ok(cap):
        return cap
    lo, hi = 0.0, cap
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _h_tilde(p: MapParams, w: complex) -> complex:
    return w + cmath.log(
        0.5 * (p.K + 1.0) + 0.5 * (p.K - 1.0) * cmath.exp(2j * (p.theta - w.imag))
    )


def _h_inv_tilde(p: MapParams, w: complex) -> complex:
    return w + cmath.log(
        (p.K + 1.0) / (2.0 * p.K)
        - (p.K - 1.0) / (2.0 * p.K) * cmath.exp(2j * (p.theta - w.imag))
    )


def _f1_tilde(m: LocalMap, w: complex) -> complex:
    ew = cmath.exp(w)
    s = 0j
    powv = 1.0 + 0j
    for c in m.f1_coeffs[1:]:
        powv *= ew
        s += c * powv
    return m.n * w + cmath.log(1.0 + s)


def _f_tilde(m: LocalMap, p: MapParams, w: complex) -> complex:
    return _f1_tilde(m, _h_tilde(p, w))


def _phi_k(m: LocalMap, p: MapParams, k: int, w: complex) -> complex:
    for _ in range(k):
        w = _f_tilde(m, p, w)
    v = _h_inv_tilde(p, w / m.n)
    for _ in range(k - 1):
        v = _h_inv_tilde(p, v / m.n)
    return v


def _psi_k(m: LocalMap, p: MapParams, k: int, z: complex) -> complex:
    u = complex(z) - m.z0
    if u == 0:
        return m.z0
    return m.z0 + cmath.exp(_phi_k(m, p, k, cmath.log(u)))


@dataclass(frozen=True)
class BoettcherApprox:
    """Depth-k conjugacy candidate psi_k with its residual history."""

    local_map: LocalMap
    model: MapParams
    k: int
    domain_radius: float
    residual: float
    residuals: tuple[float, ...]

    def eval(self, z: complex) -> complex:
        return _psi_k(self.local_map, self.model, self.k, z)

    __call__ = eval


def conjugacy_residual(
    m: LocalMap, p: MapParams, k: int, rho: float, grid: tuple[int, int] = (8, 64)
) -> float:
    """sup of |psi_k(f(z)) - H(psi_k(z))| over a sampled annulus [rho/2, rho]."""
    nr, na = grid
    radii = np.geomspace(rho / 2.0, rho, nr)
    angles = np.linspace(0.0, TWO_PI, na, endpoint=False)
    worst = 0.0
    for r in radii:
        for t in angles:
            z = m.z0 + r * cmath.exp(1j * t)
            lhs = _psi_k(m, p, k, m.apply(z, p))
            rhs = m.z0 + complex(eval_H(p, _psi_k(m, p, k, z) - m.z0))
            err = abs(lhs - rhs)
            if err > worst:
                worst = err
    return worst


def bottcher_iterate(
    m: LocalMap, p: MapParams, k: int = 12, grid: tuple[int, int] = (8, 64)
) -> BoettcherApprox:
    """Run the conjugacy iteration to depth k with residual tracking.

    Stops early when the residual improvement drops below 1e-13, and raises
    NonContractionError (reporting both values) if the residual grows by
    more than 1e-12 between consecutive depths.
    """
    if k < 1:
        raise ValueError("depth must be >= 1")
    if p.n != m.n:
        raise ValueError("model degree must match the local index")
    if abs(mu_from_params(p.K, p.theta) - m.f2_mu) > 1e-12:
        raise ValueError("model dilatation must match the local map")
    rho = domain_radius(m, p)
    residuals: list[float] = []
    final = 1
    for depth in range(1, k + 1):
        res = conjugacy_residual(m, p, depth, rho, grid)
        if residuals and res > residuals[-1] + RESIDUAL_SLACK:
            raise NonContractionError(depth, residuals[-1], res)
        improvement = math.inf if not residuals else residuals[-1] - res
        residuals.append(res)
        final = depth
        if improvement < EARLY_STOP_IMPROVEMENT:
            break
    return BoettcherApprox(m, p, final, rho, residuals[-1], tuple(residuals))


def log_transform(
    g: Callable[[complex], complex],
    z0: complex,
    w: complex,
    max_arg_step: float = math.pi / 8,
) -> complex:
    """log(g(z0 + e^w) - z0) with the branch continued from the real axis.

    The branch is anchored at Im = 0 (principal log there) and continued
    along the vertical segment to w, refining the subdivision until every
    argument increment stays below max_arg_step.
    """

    def value(wp: complex) -> complex:
        u = g(z0 + cmath.exp(wp)) - z0
        if u == 0:
            raise ValueError("g(z0 + e^w) must differ from z0 along the path")
        return u

    segments = max(8, int(abs(w.imag) / (math.pi / 16)) + 1)
    while segments <= 2 ** 20:
        u_prev = value(complex(w.real, 0.0))
        acc = cmath.log(u_prev)
        ok = True
        for j in range(1, segments + 1):
            uj = value(complex(w.real, w.imag * j / segments))
            ratio = uj / u_prev
            if abs(cmath.phase(ratio)) > max_arg_step:
                ok = False
                break
            acc += cmath.log(ratio)
            u_prev = uj
        if ok:
            return acc
        segments *= 2
    raise BranchLossError("argument step stayed too large along the anchoring path")


def external_ray(
    m: LocalMap,
    approx: BoettcherApprox,
    phi: float,
    r_max: float,
    steps: int,
    r_min: float | None = None,
) -> list[complex]:
    """The preimage under psi_k of the straight ray at angle phi.

    Points are computed on a log-spaced radius grid from r_max inward, each
    by a guarded secant iteration seeded from the previous point.
    """
    if r_max > approx.domain_radius * (1.0 + 1e-12):
        raise ValueError("r_max must not exceed the domain radius")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if r_min is None:
        r_min = r_max / 64.0
    rs = np.geomspace(r_max, r_min, steps)
    direction = cmath.exp(1j * phi)
    pts: list[complex] = []
    seed = m.z0 + r_max * direction
    last_good = None
    for r in rs:
        target = m.z0 + r * direction
        seed = _invert_psi(approx, target, seed, last_good)
        pts.append(seed)
        last_good = float(r)
    return pts


def _invert_psi(
    approx: BoettcherApprox, target: complex, seed: complex, last_good_r: float | None
) -> complex:
    z0 = approx.local_map.z0
    scale = max(abs(target - z0), 1e-30)
    za = seed
    fa = approx.eval(za) - target
    if abs(fa) < 1e-13 * scale:
        return za
    zb = za - fa
    for _ in range(80):
        if abs(zb - z0) > approx.domain_radius * 1.5 or zb != zb:
            raise InversionFailureError(last_good_r)
        fb = approx.eval(zb) - target
        if abs(fb) < 1e-13 * scale:
            return zb
        denom = fb - fa
        if denom == 0:
            break
        step = -fb * (zb - za) / denom
        limit = 0.5 * abs(zb - z0) + 1e-30
        if abs(step) > limit:
            step *= limit / abs(step)
        za, fa = zb, fb
        zb = zb + step
    raise InversionFailureError(last_good_r)


def dilatation_probe(approx: BoettcherApprox, radius: float, centers: int = 16) -> float:
    """Largest finite-difference Beltrami quotient of psi_k on a circle."""
    m = approx.local_map
    d = radius * 1e-3
    worst = 0.0
    for t in range(centers):
        z = m.z0 + radius * cmath.exp(2j * math.pi * t / centers)
        fx = (approx.eval(z + d) - approx.eval(z - d)) / (2.0 * d)
        fy = (approx.eval(z + 1j * d) - approx.eval(z - 1j * d)) / (2.0 * d)
        psi_z = 0.5 * (fx - 1j * fy)
        psi_zb = 0.5 * (fx + 1j * fy)
        worst = max(worst, abs(psi_zb / psi_z))
    return worst


@dataclass(frozen=True)
class ExternalRayReport:
    """Classification plus the fixed/switched external ray census."""

    classification: Classification
    rays: tuple[RayFixedPoint, ...]
    fixed_count: int
    switched_count: int
    attracting_count: int


def fixed_external_rays(m: LocalMap) -> ExternalRayReport:
    """Counts and stabilities of fixed and switched external rays at z0.

    Delegates to the global classification and the ray census of the model
    map with the same (K, theta, n).
    """
    p = m.params()
    cls = classify_H(p)
    rays = tuple(fixed_and_switched_points(p))
    fixed = sum(1 for r in rays if r.kind is RayKind.FIXED)
    switched = sum(1 for r in rays if r.kind is RayKind.SWITCHED)
    attracting = sum(1 for r in rays if r.stability is Stability.ATTRACTING)
    return ExternalRayReport(cls, rays, fixed, switched, attracting)
