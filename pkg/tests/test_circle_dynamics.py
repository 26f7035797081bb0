import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrdyn import (
    CircleLift,
    MapParams,
    RayKind,
    Stability,
    apply_T,
    build_lift,
    circle_map_arg,
    eval_H,
    fixed_and_switched_points,
    interval_wrap_counts,
)
from qrdyn.blaschke import blaschke_for_params, blaschke_lift, circle_fixed_points
from qrdyn.core_maps import TWO_PI, angle_dist

params_st = st.builds(
    MapParams,
    st.floats(1.0, 10.0),
    st.floats(-math.pi / 2 + 1e-9, math.pi / 2),
    st.integers(2, 7),
)


def test_circle_map_arg_examples():
    p = MapParams(2.0, 0.0, 2)
    assert circle_map_arg(p, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert circle_map_arg(p, math.pi / 2) == pytest.approx(math.pi)
    assert circle_map_arg(p, math.pi / 4) == pytest.approx(2 * math.atan(0.5))


@given(params_st, st.floats(0.0, 2 * math.pi - 1e-12))
def test_circle_map_arg_matches_direct_argument(p, phi):
    direct = cmath.phase(complex(eval_H(p, cmath.exp(1j * phi))))
    assert float(angle_dist(circle_map_arg(p, phi), direct)) < 1e-10


def test_build_lift_conformal_case():
    g = build_lift(MapParams(1.0, 0.0, 2))
    xs = np.linspace(0.0, 2 * TWO_PI, 41)
    assert np.allclose(g.lift(xs), 2.0 * xs, atol=1e-14)


def test_build_lift_degree_and_normalization():
    rng = np.random.default_rng(5)
    for _ in range(10):
        p = MapParams(
            float(rng.uniform(1, 10)),
            float(rng.uniform(-math.pi / 2 + 1e-6, math.pi / 2)),
            int(rng.integers(2, 8)),
        )
        g = build_lift(p)
        assert 0.0 <= float(g.lift(0.0)) < TWO_PI
        xs = rng.uniform(-10, 10, size=100)
        assert np.max(np.abs(g.lift(xs + TWO_PI) - g.lift(xs) - TWO_PI * p.n)) < 1e-10
        fine = np.linspace(0.0, TWO_PI, 4001)
        assert np.all(np.diff(g.lift(fine)) > 0.0)


def test_build_lift_value_example():
    g = build_lift(MapParams(2.0, 0.0, 2))
    assert float(g.lift(TWO_PI)) - float(g.lift(0.0)) == pytest.approx(2 * TWO_PI)
    assert float(g.lift(math.pi / 4)) == pytest.approx(0.927295218, abs=1e-9)


def test_apply_T_conformal_and_affine():
    g = build_lift(MapParams(1.0, 0.0, 2))
    T = apply_T(g)
    xs = np.linspace(0.0, TWO_PI, 33)
    assert np.allclose(T.lift(xs), 2.0 * xs, atol=1e-14)

    aff = CircleLift(3, lambda x: 3.0 * np.asarray(x, dtype=float) + 0.8)
    T2 = apply_T(aff)
    assert np.allclose(T2.lift(xs), 3.0 * xs + 0.4, atol=1e-14)
    assert T2.degree == 3


def test_apply_T_reproduces_induced_lift():
    # the half-angle rescaling of the Blaschke boundary map is the induced map
    p = MapParams(2.0, 0.0, 2)
    T = apply_T(blaschke_lift(blaschke_for_params(p)))
    g = build_lift(p)
    xs = np.linspace(0.0, TWO_PI, 1025)
    assert np.max(np.abs(T.lift(xs) - g.lift(xs))) < 1e-10


@given(params_st)
@settings(max_examples=40)
def test_half_angle_functional_equation(p):
    # arg B(e^{2 i phi}) = 2 arg of the induced map at e^{i phi} (mod 2 pi)
    b = blaschke_for_params(p)
    gB = blaschke_lift(b)
    phis = np.linspace(0.0, TWO_PI, 257)
    lhs = np.mod(gB.lift(2.0 * phis), TWO_PI)
    rhs = np.mod(2.0 * np.asarray(circle_map_arg(p, phis)), TWO_PI)
    d = np.mod(lhs - rhs, TWO_PI)
    assert np.max(np.minimum(d, TWO_PI - d)) < 1e-9


@given(params_st, st.floats(0.0, 2 * math.pi - 1e-12))
@settings(max_examples=60)
def test_antipodal_symmetry(p, phi):
    a = circle_map_arg(p, phi)
    b = circle_map_arg(p, phi + math.pi)
    if p.n % 2 == 0:
        assert float(angle_dist(a, b)) < 1e-10
    else:
        assert float(angle_dist(a, b + math.pi)) < 1e-10


def _split(points):
    fixed = [q for q in points if q.kind is RayKind.FIXED]
    switched = [q for q in points if q.kind is RayKind.SWITCHED]
    return fixed, switched


def test_example_hyperbolic_odd_fixed_rays():
    pts = fixed_and_switched_points(MapParams(5.0, 0.0, 3))
    fixed, switched = _split(pts)
    assert len(fixed) == 6
    assert len(switched) == 2
    at0 = next(q for q in fixed if float(angle_dist(q.phi, 0.0)) < 1e-9)
    atpi = next(q for q in fixed if float(angle_dist(q.phi, math.pi)) < 1e-9)
    assert at0.stability is Stability.ATTRACTING
    assert atpi.stability is Stability.ATTRACTING
    assert at0.multiplier == pytest.approx(3.0 / 5.0, abs=1e-8)
    sw_angles = sorted(q.phi for q in switched)
    assert sw_angles[0] == pytest.approx(math.pi / 2, abs=1e-9)
    assert sw_angles[1] == pytest.approx(3 * math.pi / 2, abs=1e-9)


def test_example_hyperbolic_odd_switched_rays():
    pts = fixed_and_switched_points(MapParams(5.0, math.pi / 2, 3))
    fixed, switched = _split(pts)
    assert len(fixed) == 2
    assert len(switched) == 6
    fx = sorted(q.phi for q in fixed)
    assert fx[0] == pytest.approx(0.0, abs=1e-9)
    assert fx[1] == pytest.approx(math.pi, abs=1e-9)


def test_example_elliptic_odd():
    pts = fixed_and_switched_points(MapParams(1.5, 0.0, 3))
    fixed, switched = _split(pts)
    assert len(fixed) == 2
    assert len(switched) == 2
    assert all(q.stability is Stability.REPELLING for q in pts)


def test_switched_points_come_in_antipodal_pairs():
    for p in (MapParams(5.0, 0.0, 3), MapParams(5.0, math.pi / 2, 3), MapParams(8.0, 0.7, 5)):
        _, switched = _split(fixed_and_switched_points(p))
        angles = sorted(q.phi for q in switched)
        k = len(angles) // 2
        for a, b in zip(angles[:k], angles[k:]):
            assert float(angle_dist(a + math.pi, b)) < 1e-8


def test_count_identity_odd_degree():
    rng = np.random.default_rng(12)
    for _ in range(12):
        p = MapParams(
            float(rng.uniform(1, 8)),
            float(rng.uniform(-math.pi / 2 + 1e-6, math.pi / 2)),
            int(rng.choice([3, 5, 7])),
        )
        pts = fixed_and_switched_points(p)
        if any(abs(q.multiplier - 1.0) < 1e-4 for q in pts):
            continue
        nb = len(circle_fixed_points(blaschke_for_params(p)))
        assert len(pts) == 2 * nb


def test_roots_reevaluate_to_zero_displacement():
    rng = np.random.default_rng(9)
    for _ in range(15):
        p = MapParams(
            float(rng.uniform(1, 10)),
            float(rng.uniform(-math.pi / 2 + 1e-6, math.pi / 2)),
            int(rng.integers(2, 8)),
        )
        g = build_lift(p)
        for q in fixed_and_switched_points(p):
            off = 0.0 if q.kind is RayKind.FIXED else math.pi
            v = float(g.lift(q.phi)) - q.phi - off
            assert abs(v - TWO_PI * round(v / TWO_PI)) < 1e-10


def test_parabolic_neutral_flag():
    pts = fixed_and_switched_points(MapParams(2.0, 0.0, 2))
    assert len(pts) == 1
    assert pts[0].stability is Stability.NEUTRAL
    assert pts[0].neutral_ambiguity
    assert pts[0].phi == pytest.approx(0.0, abs=1e-9)


def test_interval_wrap_counts_examples():
    counts = interval_wrap_counts(MapParams(5.0, 0.0, 3))
    assert len(counts) == 3
    assert set(counts) <= {0, 1}
    assert sum(counts) == 1
    assert interval_wrap_counts(MapParams(1.5, 0.0, 3)) == [1]


def test_interval_wrap_counts_identity_and_stability_link():
    rng = np.random.default_rng(21)
    checked = 0
    while checked < 10:
        p = MapParams(
            float(rng.uniform(1, 9)),
            float(rng.uniform(-math.pi / 2 + 1e-6, math.pi / 2)),
            int(rng.choice([3, 5, 7])),
        )
        pts = fixed_and_switched_points(p)
        fixed, _ = _split(pts)
        if not fixed or any(abs(q.multiplier - 1.0) < 1e-4 for q in pts):
            continue
        counts = interval_wrap_counts(p)
        assert p.n == 2 * sum(counts) + 1
        assert set(counts) <= {0, 1}
        # an arc mapped onto itself has an attracting or neutral endpoint
        angles = sorted(q.phi for q in fixed)
        w1 = angles[0]
        half = [x for x in angles if x < w1 + math.pi - 1e-9] + [w1 + math.pi]

        def stab_at(x):
            return next(
                q.stability for q in fixed if float(angle_dist(q.phi, x)) < 1e-9
            )

        for (a, b), nj in zip(zip(half, half[1:]), counts):
            if nj == 0:
                ok = (stab_at(a) is not Stability.REPELLING) or (
                    stab_at(b) is not Stability.REPELLING
                )
                assert ok
        checked += 1


def test_interval_wrap_counts_rejects_even_degree():
    with pytest.raises(ValueError):
        interval_wrap_counts(MapParams(2.0, 0.0, 2))
