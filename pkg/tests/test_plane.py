import cmath
import math

import numpy as np
import pytest

from qrdyn import (
    Certificate,
    MapParams,
    RenderConfig,
    Verdict,
    boundary_polyline,
    boundary_radii,
    boundary_radius_on_ray,
    classify_grid,
    classify_point,
    eval_H,
    inner_radius,
    outer_radius,
    render,
)

P22 = MapParams(2.0, 0.0, 2)


def test_certified_radii_values():
    assert inner_radius(P22) == pytest.approx(0.125)
    assert outer_radius(P22) == pytest.approx(2.0)
    p = MapParams(3.0, 0.1, 4)
    assert inner_radius(p) == pytest.approx((2 * 81.0) ** (-1 / 3))
    assert outer_radius(p) == pytest.approx(2.0 ** (1 / 3))


def test_classify_point_examples():
    cell = classify_point(P22, 0j)
    assert cell.verdict is Verdict.BASIN0
    assert cell.certificate is Certificate.INNER_RADIUS
    assert cell.iterations_used == 0

    cell = classify_point(P22, 10 + 0j)
    assert cell.verdict is Verdict.ESCAPING
    assert cell.certificate is Certificate.OUTER_RADIUS
    assert cell.iterations_used == 0

    for budget in (64, 512):
        cell = classify_point(P22, 0.25 + 0j, max_iter=budget)
        assert cell.verdict is Verdict.UNDECIDED
        assert cell.certificate is Certificate.ITER_BUDGET
        assert cell.iterations_used == budget


def test_certificate_soundness():
    rng = np.random.default_rng(2)
    p = MapParams(2.5, 0.6, 3)
    r_in, r_out = inner_radius(p), outer_radius(p)
    for _ in range(50):
        z = r_in * rng.uniform(0.05, 1.0) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        for _ in range(50):
            w = complex(eval_H(p, z))
            assert abs(w) <= 0.5 * abs(z) + 1e-300
            z = w
            if abs(z) == 0.0:
                break
        z = r_out * rng.uniform(1.0, 1.5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        while abs(z) < 1e100:
            w = complex(eval_H(p, z))
            assert abs(w) >= 2.0 * abs(z)
            z = w


def test_boundary_radius_on_fixed_ray():
    assert boundary_radius_on_ray(P22, 0.0, 1e-8) == pytest.approx(0.25, abs=1e-6)


def test_boundary_radius_conformal_circle():
    p = MapParams(1.0, 0.0, 2)
    for phi in (0.0, 1.0, 4.5):
        assert boundary_radius_on_ray(p, phi, 1e-8) == pytest.approx(1.0, abs=1e-6)


def test_boundary_radius_orthogonal_ray_is_half():
    # exact chain: 0.5 i -> -0.25 -> 0.25, and 0.25 is the fixed point,
    # so the escape boundary on the ray at pi/2 sits at radius 1/2
    assert eval_H(P22, 0.5j) == pytest.approx(-0.25)
    assert eval_H(P22, -0.25 + 0j) == pytest.approx(0.25)
    assert eval_H(P22, 0.25 + 0j) == pytest.approx(0.25)
    # brute-force bracket as an independent check of the bisection result
    rs = np.linspace(0.49, 0.51, 2001)
    v, _ = classify_grid(P22, rs * 1j, 512)
    basins = rs[v == Verdict.BASIN0.value]
    escapes = rs[v == Verdict.ESCAPING.value]
    assert basins.max() < 0.5 < escapes.min()
    assert boundary_radius_on_ray(P22, math.pi / 2, 1e-8) == pytest.approx(0.5, abs=1e-6)


def test_boundary_radius_postcondition():
    for p, phi in ((P22, 0.3), (MapParams(3.0, 0.5, 3), 2.0), (MapParams(1.2, 0.0, 4), 5.0)):
        r = boundary_radius_on_ray(p, phi, 1e-7)
        u = cmath.exp(1j * phi)
        assert classify_point(p, 0.99 * r * u).verdict is Verdict.BASIN0
        assert classify_point(p, 1.01 * r * u).verdict is Verdict.ESCAPING


def test_boundary_polyline_landmarks():
    poly = boundary_polyline(MapParams(1.0, 0.0, 2), 90, 1e-8)
    assert np.max(np.abs(np.abs(poly) - 1.0)) < 1e-6

    poly = boundary_polyline(P22, 360, 1e-8)
    assert poly[0] == pytest.approx(0.25, abs=1e-6)
    assert poly[90] == pytest.approx(0.5j, abs=1e-6)
    # radii vary continuously along the curve (steepest near the neutral ray)
    rs = np.abs(poly)
    jumps = np.abs(np.diff(np.concatenate([rs, rs[:1]])))
    assert jumps.max() < 0.1


def test_boundary_polyline_validation():
    with pytest.raises(ValueError):
        boundary_polyline(P22, 2, 1e-6)
    with pytest.raises(ValueError):
        boundary_radius_on_ray(P22, 0.0, -1.0)


def test_star_likeness_probe():
    p = MapParams(3.0, 0.4, 2)
    phis = 2 * math.pi * np.arange(36) / 36
    rs = boundary_radii(p, phis, 1e-7)
    u = np.exp(1j * phis)
    v_in, _ = classify_grid(p, 0.5 * rs * u, 256)
    v_out, _ = classify_grid(p, 2.0 * rs * u, 256)
    assert np.all(v_in == Verdict.BASIN0.value)
    assert np.all(v_out == Verdict.ESCAPING.value)


def test_complete_invariance_probe():
    p = MapParams(2.5, -0.3, 3)
    rng = np.random.default_rng(8)
    z = rng.uniform(-1.5, 1.5, 300) + 1j * rng.uniform(-1.5, 1.5, 300)
    v, _ = classify_grid(p, z, 256)
    images = eval_H(p, z)
    vi, _ = classify_grid(p, images, 256)
    for verdict in (Verdict.BASIN0.value, Verdict.ESCAPING.value):
        mask = v == verdict
        assert mask.any()
        assert np.all(vi[mask] == verdict)


def test_classify_grid_matches_classify_point():
    p = MapParams(2.25, 0.75, 6)
    rng = np.random.default_rng(3)
    zs = rng.uniform(-1.5, 1.5, 300) + 1j * rng.uniform(-1.5, 1.5, 300)
    v, it = classify_grid(p, zs, 128)
    for k in range(zs.size):
        cell = classify_point(p, complex(zs[k]), 128)
        assert cell.verdict.value == v[k]
        assert cell.iterations_used == it[k]


def test_classify_grid_preserves_shape():
    v, it = classify_grid(P22, np.zeros((4, 5), dtype=complex), 8)
    assert v.shape == (4, 5)
    assert it.shape == (4, 5)


def test_render_deterministic_and_parallel_identical():
    cfg = RenderConfig(center=0j, half_width=1.5, resolution=96, max_iter=64)
    img1 = render(P22, cfg, jobs=1)
    img2 = render(P22, cfg, jobs=1)
    img3 = render(P22, cfg, jobs=3)
    assert img1.shape == (96, 96, 3)
    assert img1.dtype == np.uint8
    assert img1.tobytes() == img2.tobytes()
    assert img1.tobytes() == img3.tobytes()


def test_render_conformal_undecided_near_unit_circle():
    p = MapParams(1.0, 0.0, 2)
    cfg = RenderConfig(center=0j, half_width=1.5, resolution=128, max_iter=128)
    img = render(p, cfg, jobs=1)
    undecided = np.all(img == 0, axis=2)
    step = 2 * 1.5 / 128
    xs = -1.5 + (np.arange(128) + 0.5) * step
    ys = 1.5 - (np.arange(128) + 0.5) * step
    rad = np.abs(xs[None, :] + 1j * ys[:, None])
    if undecided.any():
        assert np.all(np.abs(rad[undecided] - 1.0) < 1.5 * step)
    # both decided regions are present
    assert (img[..., 2] == 205).any()
    assert (img[..., 2] == 40).any()


def test_render_config_validation():
    with pytest.raises(ValueError):
        RenderConfig(resolution=0)
    with pytest.raises(ValueError):
        RenderConfig(half_width=0.0)
    with pytest.raises(ValueError):
        RenderConfig(max_iter=0)
