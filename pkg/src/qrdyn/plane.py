"""Decomposition of the plane into the basin of 0, the escaping set, and
their common boundary.

Verdicts are certified: once an orbit enters |z| <= R_in = (2 K^n)^{-1/(n-1)}
the modulus at least halves each step, and once it exits
|z| >= R_out = 2^{1/(n-1)} the modulus at least doubles, so Basin0 and
Escaping labels are proofs, not heuristics.  Points that reach neither
radius within the budget stay Undecided and are rendered, never guessed.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core_maps import MapParams
from .errors import BudgetExceededError


class Verdict(Enum):
    UNDECIDED = 0
    BASIN0 = 1
    ESCAPING = 2


class Certificate(Enum):
    INNER_RADIUS = "inner-radius"
    OUTER_RADIUS = "outer-radius"
    ITER_BUDGET = "iter-budget"


@dataclass(frozen=True)
class PlaneCell:
    verdict: Verdict
    certificate: Certificate
    iterations_used: int


@dataclass(frozen=True)
class RenderConfig:
    center: complex = 0j
    half_width: float = 1.5
    resolution: int = 512
    max_iter: int = 256

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("resolution must be >= 1")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


def inner_radius(p: MapParams) -> float:
    return (2.0 * p.K ** p.n) ** (-1.0 / (p.n - 1))


def outer_radius(p: MapParams) -> float:
    return 2.0 ** (1.0 / (p.n - 1))


def classify_grid(p: MapParams, z, max_iter: int) -> tuple[np.ndarray, np.ndarray]:
    """Vector kernel: verdict codes and iterations used, same shape as z."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    zf = np.array(z, dtype=complex)
    shape = zf.shape
    zf = zf.reshape(-1)
    r_in, r_out = inner_radius(p), outer_radius(p)
    verdict = np.zeros(zf.shape, dtype=np.uint8)
    iters = np.full(zf.shape, max_iter, dtype=np.int32)
    active = np.arange(zf.size)
    az = np.abs(zf)
    acoef = 0.5 * (p.K + 1.0)
    bcoef = 0.5 * (p.K - 1.0) * complex(np.exp(2j * p.theta))
    for m in range(max_iter + 1):
        if active.size == 0:
            break
        a = az[active]
        inner = a <= r_in
        outer = a >= r_out
        decided = inner | outer
        if decided.any():
            idx = active[decided]
            verdict[idx] = np.where(inner[decided], Verdict.BASIN0.value, Verdict.ESCAPING.value)
            iters[idx] = m
            active = active[~decided]
            if active.size == 0:
                break
        if m == max_iter:
            break
        zz = zf[active]
        zz = (acoef * zz + bcoef * np.conjugate(zz)) ** p.n
        zf[active] = zz
        az[active] = np.abs(zz)
    return verdict.reshape(shape), iters.reshape(shape)


def classify_point(p: MapParams, z: complex, max_iter: int = 256) -> PlaneCell:
    """Classify one point with a certificate of how it was decided."""
    v, it = classify_grid(p, [complex(z)], max_iter)
    verdict = Verdict(int(v[0]))
    if verdict is Verdict.BASIN0:
        cert = Certificate.INNER_RADIUS
    elif verdict is Verdict.ESCAPING:
        cert = Certificate.OUTER_RADIUS
    else:
        cert = Certificate.ITER_BUDGET
    return PlaneCell(verdict, cert, int(it[0]))


def boundary_radii(p: MapParams, phis, tol: float, max_iter: int = 256) -> np.ndarray:
    """Boundary radius per ray angle, by bisection between certified radii."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    u = np.exp(1j * phis)
    lo = np.full(phis.shape, inner_radius(p))
    hi = np.full(phis.shape, outer_radius(p))
    vlo, _ = classify_grid(p, lo * u, max_iter)
    vhi, _ = classify_grid(p, hi * u, max_iter)
    if (vlo != Verdict.BASIN0.value).any():
        bad = phis[vlo != Verdict.BASIN0.value][0]
        raise BudgetExceededError(f"inner bracket not certified on the ray {bad!r}")
    if (vhi != Verdict.ESCAPING.value).any():
        bad = phis[vhi != Verdict.ESCAPING.value][0]
        raise BudgetExceededError(f"outer bracket not certified on the ray {bad!r}")
    result = np.full(phis.shape, np.nan)
    settled = np.zeros(phis.shape, dtype=bool)
    while True:
        open_mask = (~settled) & (hi - lo > tol)
        if not open_mask.any():
            break
        idx = np.flatnonzero(open_mask)
        mid = 0.5 * (lo[idx] + hi[idx])
        v, _ = classify_grid(p, mid * u[idx], max_iter)
        basin = v == Verdict.BASIN0.value
        esc = v == Verdict.ESCAPING.value
        und = v == Verdict.UNDECIDED.value
        lo[idx[basin]] = mid[basin]
        hi[idx[esc]] = mid[esc]
        if und.any():
            # an undecidable midpoint sits within budget-resolution of the
            # boundary, far below tol; take it as the answer for that ray
            result[idx[und]] = mid[und]
            settled[idx[und]] = True
    result[~settled] = 0.5 * (lo[~settled] + hi[~settled])
    return result


def boundary_radius_on_ray(p: MapParams, phi: float, tol: float, max_iter: int = 256) -> float:
    return float(boundary_radii(p, [phi], tol, max_iter)[0])


def boundary_polyline(p: MapParams, samples: int, tol: float, max_iter: int = 256) -> np.ndarray:
    """Closed polyline r*(phi_k) e^{i phi_k} on equispaced angles."""
    if samples < 3:
        raise ValueError("samples must be >= 3")
    phis = TWO_PI_ARANGE(samples)
    rs = boundary_radii(p, phis, tol, max_iter)
    return rs * np.exp(1j * phis)


def TWO_PI_ARANGE(samples: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(samples) / samples


def _colorize(verdict: np.ndarray, iters: np.ndarray, max_iter: int) -> np.ndarray:
    s = np.clip((iters.astype(np.int64) * 255) // max(max_iter, 1), 0, 255)
    img = np.zeros(verdict.shape + (3,), dtype=np.uint8)
    bm = verdict == Verdict.BASIN0.value
    img[..., 0][bm] = 18
    img[..., 1][bm] = (70 + (150 * (255 - s[bm])) // 255).astype(np.uint8)
    img[..., 2][bm] = 205
    em = verdict == Verdict.ESCAPING.value
    img[..., 0][em] = (250 - (170 * s[em]) // 255).astype(np.uint8)
    img[..., 1][em] = (100 + (90 * s[em]) // 255).astype(np.uint8)
    img[..., 2][em] = 40
    return img


def render_rows(p: MapParams, cfg: RenderConfig, row_start: int, row_stop: int) -> np.ndarray:
    """RGB rows [row_start, row_stop) of the verdict image, top row first."""
    res = cfg.resolution
    step = 2.0 * cfg.half_width / res
    xs = cfg.center.real - cfg.half_width + (np.arange(res, dtype=float) + 0.5) * step
    ys = cfg.center.imag + cfg.half_width - (np.arange(row_start, row_stop, dtype=float) + 0.5) * step
    Z = xs[None, :] + 1j * ys[:, None]
    verdict, iters = classify_grid(p, Z, cfg.max_iter)
    return _colorize(verdict, iters, cfg.max_iter)


def _render_worker(args) -> bytes:
    p, cfg, a, b = args
    return render_rows(p, cfg, a, b).tobytes()


def render(p: MapParams, cfg: RenderConfig, jobs: int = 1) -> np.ndarray:
    """Deterministic verdict image (resolution x resolution x 3, uint8).

    Basin0 pixels are blue shades, Escaping pixels warm shades (both shaded
    by iterations used), Undecided pixels black.  The output is byte-
    identical for any worker count: rows are assembled in order and every
    pixel is an independent pure computation.
    """
    res = cfg.resolution
    if jobs <= 1 or res < 64:
        return render_rows(p, cfg, 0, res)
    chunks = max(jobs * 4, 1)
    size = max(1, -(-res // chunks))
    bounds = [(a, min(a + size, res)) for a in range(0, res, size)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        slabs = list(ex.map(_render_worker, [(p, cfg, a, b) for a, b in bounds]))
    img = b"".join(slabs)
    return np.frombuffer(img, dtype=np.uint8).reshape(res, res, 3).copy()
