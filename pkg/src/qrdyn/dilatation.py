"""Beltrami bookkeeping along orbits of H.

The composition rule for complex dilatations, the unimodular rotation factor
r_H(z) = e^{-2(n-1) i arg h(z)}, the dilatation of the m-th iterate, and
distortion profiles demonstrating blow-up.

Orbits are tracked through their angles only: mu of the m-th iterate depends
on z through arg h at the successive orbit points, so basin orbits whose
moduli underflow double precision are handled exactly.  The origin check
therefore applies to the seed, the only point whose orbit ever reaches 0.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .circle_dynamics import arg_h_lift
from .core_maps import MapParams
from .errors import OrbitHitOriginError

ORIGIN_TOL = 1e-300
#: profiles stop once |mu| exceeds this (distortion beyond ~2e12)
SATURATION = 1.0 - 1e-12


def compose_dilatation(mu_f: complex, r_f: complex, mu_g_at_fz: complex) -> complex:
    """Dilatation of g o f from mu_f, the rotation factor of f, and mu_g at f(z)."""
    return (mu_f + r_f * mu_g_at_fz) / (1.0 + r_f * mu_f.conjugate() * mu_g_at_fz)


# The rotation factor and the dilatation recursion are invariant under
# z -> -z, so orbits are tracked through their angles reduced mod pi; this
# makes the antipodal identity exact in floating point as well.


def _half_angle(phi: float) -> float:
    return float(math.fmod(math.fmod(phi, math.pi) + math.pi, math.pi))


def _half_angle_step(p: MapParams, psi: float) -> float:
    return _half_angle(p.n * float(arg_h_lift(p, psi)))


def _r_from_angle(p: MapParams, phi: float) -> complex:
    return cmath.exp(-2j * (p.n - 1) * float(arg_h_lift(p, _half_angle(phi))))


def r_H(p: MapParams, z: complex) -> complex:
    """Rotation factor conj(H_z)/H_z; unimodular, and even under z -> -z."""
    if abs(z) <= ORIGIN_TOL:
        raise OrbitHitOriginError("the rotation factor is undefined at the origin")
    return _r_from_angle(p, cmath.phase(z))


@dataclass(frozen=True)
class DilatationState:
    mu_iter: complex
    m: int
    K_iter: float


def _state(mu: complex, m: int) -> DilatationState:
    a = abs(mu)
    return DilatationState(mu, m, (1.0 + a) / (1.0 - a) if a < 1.0 else math.inf)


def iterate_dilatation(p: MapParams, z: complex, m: int) -> DilatationState:
    """mu of the m-th iterate at z, folded back-to-front along the orbit."""
    if m < 1:
        raise ValueError("iterate count must be >= 1")
    if abs(z) <= ORIGIN_TOL:
        raise OrbitHitOriginError("orbit seed is at the origin")
    psis = [_half_angle(cmath.phase(z))]
    for _ in range(m - 2):
        psis.append(_half_angle_step(p, psis[-1]))
    acc = p.mu
    for i in range(m - 2, -1, -1):
        acc = compose_dilatation(p.mu, _r_from_angle(p, psis[i]), acc)
    return _state(acc, m)


@dataclass(frozen=True)
class DistortionProfile:
    """Rows (m, |mu_iter|, K_iter); saturated marks an early stop."""

    rows: tuple[tuple[int, float, float], ...]
    saturated: bool


def distortion_profile(p: MapParams, z: complex, m_max: int) -> DistortionProfile:
    """Distortion of the iterates at z for m = 1..m_max.

    Uses the same recursion as iterate_dilatation, reassociated into one
    running Moebius product so the whole profile costs O(m_max).
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if abs(z) <= ORIGIN_TOL:
        raise OrbitHitOriginError("orbit seed is at the origin")
    mu = p.mu
    muc = mu.conjugate()
    a, b, c, d = 1.0 + 0j, 0j, 0j, 1.0 + 0j
    psi = _half_angle(cmath.phase(z))
    rows: list[tuple[int, float, float]] = []
    saturated = False
    for m in range(1, m_max + 1):
        w = (a * mu + b) / (c * mu + d)
        aw = abs(w)
        rows.append((m, aw, (1.0 + aw) / (1.0 - aw) if aw < 1.0 else math.inf))
        if aw > SATURATION:
            saturated = True
            break
        r = _r_from_angle(p, psi)
        a, b, c, d = a * r + b * r * muc, a * mu + b, c * r + d * r * muc, c * mu + d
        if m % 32 == 0:
            s = max(abs(a), abs(b), abs(c), abs(d))
            a, b, c, d = a / s, b / s, c / s, d / s
        psi = _half_angle_step(p, psi)
    return DistortionProfile(tuple(rows), saturated)
