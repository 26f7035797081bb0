"""Command-line frontend.

Subcommands: classify, rays, param-atlas, render, dilatation, julia-circle,
bottcher-check.  JSON goes to stdout unless --out is given; CSV likewise;
images are binary PPM (P6, maxval 255) and require --out.  All outputs are
byte-deterministic for fixed flags, independent of the worker count.

Exit codes: 0 success, 2 invalid flags, 3 computation could not resolve.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .blaschke import (
    ATLAS_BAND,
    ATLAS_ELLIPTIC,
    ATLAS_HYPERBOLIC,
    MapKind,
    blaschke_for_params,
    classify_disk_grid,
    classify_H,
    julia_circle_H,
    julia_on_circle,
    k_theta_threshold,
)
from .boettcher import bottcher_iterate, dilatation_probe, local_map_from_json
from .circle_dynamics import RayKind, fixed_and_switched_points
from .core_maps import MapParams, fixed_ray_radius
from .dilatation import distortion_profile
from .errors import QrdynError
from .moebius import ray_branch_index, ray_moebius, tau_fixed_ray, trace_squared
from .plane import RenderConfig, render

#: atlas colors, indexed by pixel code
_ATLAS_COLORS = np.array(
    [
        [0, 0, 0],        # outside the disk
        [64, 126, 214],   # elliptic
        [204, 78, 60],    # hyperbolic
        [248, 212, 88],   # undecided band
    ],
    dtype=np.uint8,
)


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def write_ppm(path: str, img: np.ndarray) -> None:
    """Binary PPM: header exactly 'P6\\n<w> <h>\\n255\\n', then RGB rows."""
    h, w = img.shape[0], img.shape[1]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img, dtype=np.uint8).tobytes())


def _emit_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit_text(json.dumps(obj, indent=2, sort_keys=False) + "\n", out)


def _add_params(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--K", type=float, required=True, help="stretch factor, >= 1")
    sub.add_argument("--theta", type=float, required=True,
                     help="stretch direction in radians, in (-pi/2, pi/2]")
    sub.add_argument("--n", type=int, required=True, help="degree, >= 2")


def _params_from(args, parser: argparse.ArgumentParser) -> MapParams:
    theta = args.theta
    # accept boundary values rounded in the last digits
    if abs(theta - math.pi / 2) < 1e-9:
        theta = math.pi / 2
    if abs(theta + math.pi / 2) < 1e-9:
        parser.error("theta must lie in (-pi/2, pi/2]")
    try:
        return MapParams(args.K, theta, args.n)
    except ValueError as exc:
        parser.error(str(exc))
    raise AssertionError("unreachable")


def _ray_entry(p: MapParams, rp, detailed: bool) -> dict:
    entry = {
        "phi": float(rp.phi),
        "kind": rp.kind.value,
        "stability": rp.stability.value,
        "multiplier": float(rp.multiplier),
    }
    if detailed:
        k = ray_branch_index(p, rp.phi, rp.kind)
        tau, mkind = trace_squared(ray_moebius(p, rp.phi, rp.kind, k))
        entry["branch_k"] = k
        entry["tau"] = tau
        entry["moebius_kind"] = mkind.value
        if rp.kind is RayKind.FIXED:
            entry["fixed_radius"] = float(fixed_ray_radius(p, rp.phi))
            entry["tau_closed_form"] = tau_fixed_ray(p, rp.phi, k)
    return entry


def _classify_report(p: MapParams, detailed: bool) -> tuple[dict, int]:
    cls = classify_H(p)
    if cls.kind is MapKind.UNRESOLVED:
        return {}, 3
    kt = k_theta_threshold(p.theta, p.n)
    rays = fixed_and_switched_points(p)
    report = {
        "K": float(p.K),
        "theta": float(p.theta),
        "n": int(p.n),
        "mu": _complex_pair(p.mu),
        "kind": cls.kind.value,
        "denjoy_wolff": _complex_pair(cls.denjoy_wolff),
        "multiplier": float(cls.multiplier),
        "k_theta": ("infinity" if math.isinf(kt) else float(kt)),
        "fixed_rays": sum(1 for r in rays if r.kind is RayKind.FIXED),
        "switched_rays": sum(1 for r in rays if r.kind is RayKind.SWITCHED),
        "rays": [_ray_entry(p, r, detailed) for r in rays],
    }
    return report, 0


def _cmd_classify(args, parser) -> int:
    p = _params_from(args, parser)
    report, code = _classify_report(p, detailed=False)
    if code != 0:
        sys.stderr.write("classification unresolved within the orbit budget\n")
        return code
    _emit_json(report, args.out)
    return 0


def _cmd_rays(args, parser) -> int:
    p = _params_from(args, parser)
    report, code = _classify_report(p, detailed=True)
    if code != 0:
        sys.stderr.write("classification unresolved within the orbit budget\n")
        return code
    _emit_json(report, args.out)
    return 0


def _atlas_worker(task) -> bytes:
    n, res, iters, a, b = task
    return classify_disk_grid(n, res, iters, rows=(a, b)).tobytes()


def _cmd_param_atlas(args, parser) -> int:
    if args.n < 2:
        parser.error("degree must be >= 2")
    if not (1 <= args.res <= 4096):
        parser.error("resolution must lie in 1..4096")
    if args.out is None:
        parser.error("binary PPM output requires --out")
    res, n = args.res, args.n
    jobs = args.jobs or os.cpu_count() or 1
    if jobs <= 1 or res < 64:
        codes = classify_disk_grid(n, res, args.iters)
    else:
        chunk = max(1, -(-res // (jobs * 4)))
        bounds = [(a, min(a + chunk, res)) for a in range(0, res, chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            slabs = list(ex.map(_atlas_worker, [(n, res, args.iters, a, b) for a, b in bounds]))
        codes = np.frombuffer(b"".join(slabs), dtype=np.uint8).reshape(res, res)
    img = _ATLAS_COLORS[codes]
    # overlay the circle |w| = (n-1)/(n+1)
    step = 2.0 / res
    ys = 1.0 - (np.arange(res) + 0.5) * step
    xs = -1.0 + (np.arange(res) + 0.5) * step
    rad = np.abs(xs[None, :] + 1j * ys[:, None])
    ring = np.abs(rad - (n - 1.0) / (n + 1.0)) <= step
    img = img.copy()
    img[ring] = (255, 255, 255)
    write_ppm(args.out, img)
    return 0


def _cmd_render(args, parser) -> int:
    p = _params_from(args, parser)
    if not (1 <= args.res <= 4096):
        parser.error("resolution must lie in 1..4096")
    if args.out is None:
        parser.error("binary PPM output requires --out")
    cfg = RenderConfig(
        center=complex(args.center_re, args.center_im),
        half_width=args.half_width,
        resolution=args.res,
        max_iter=args.max_iter,
    )
    jobs = args.jobs or os.cpu_count() or 1
    write_ppm(args.out, render(p, cfg, jobs=jobs))
    return 0


def _cmd_dilatation(args, parser) -> int:
    p = _params_from(args, parser)
    if args.m_max < 1:
        parser.error("m-max must be >= 1")
    z = complex(args.z_re, args.z_im)
    profile = distortion_profile(p, z, args.m_max)
    lines = ["m,abs_mu,K_iter"]
    for m, abs_mu, k_iter in profile.rows:
        lines.append(f"{m},{abs_mu!r},{k_iter!r}")
    _emit_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_julia_circle(args, parser) -> int:
    p = _params_from(args, parser)
    if args.depth < 1:
        parser.error("depth must be >= 1")
    if args.level == "H":
        angles = julia_circle_H(p, args.depth)
    else:
        angles = julia_on_circle(blaschke_for_params(p), args.depth)
    lines = ["angle"] + [f"{float(a)!r}" for a in angles]
    _emit_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_bottcher_check(args, parser) -> int:
    if args.k < 1:
        parser.error("k must be >= 1")
    try:
        with open(args.map) as fh:
            obj = json.load(fh)
        m = local_map_from_json(obj)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        parser.error(f"cannot read local map: {exc}")
    p = m.params()
    approx = bottcher_iterate(m, p, k=args.k)
    rho = approx.domain_radius
    probe = [dilatation_probe(approx, r) for r in (rho, rho / 2.0, rho / 4.0)]
    _emit_json(
        {
            "k": approx.k,
            "domain_radius": approx.domain_radius,
            "residuals": list(approx.residuals),
            "dilatation_probe": probe,
        },
        args.out,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrdyn",
        description="numerical dynamics of planar stretch-and-power maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="type, threshold, and ray table as JSON")
    _add_params(c)
    c.add_argument("--out", default=None)

    c = sub.add_parser("rays", help="ray table with radii and trace data as JSON")
    _add_params(c)
    c.add_argument("--out", default=None)

    c = sub.add_parser("param-atlas", help="classify the parameter disk to a PPM")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--res", type=int, required=True)
    c.add_argument("--iters", type=int, default=1200)
    c.add_argument("--jobs", type=int, default=None)
    c.add_argument("--out", default=None)

    c = sub.add_parser("render", help="basin/escaping verdict image as a PPM")
    _add_params(c)
    c.add_argument("--center-re", type=float, default=0.0)
    c.add_argument("--center-im", type=float, default=0.0)
    c.add_argument("--half-width", type=float, default=1.5)
    c.add_argument("--res", type=int, default=512)
    c.add_argument("--max-iter", type=int, default=256)
    c.add_argument("--jobs", type=int, default=None)
    c.add_argument("--out", default=None)

    c = sub.add_parser("dilatation", help="distortion profile of the iterates as CSV")
    _add_params(c)
    c.add_argument("--z-re", type=float, required=True)
    c.add_argument("--z-im", type=float, required=True)
    c.add_argument("--m-max", type=int, default=500)
    c.add_argument("--out", default=None)

    c = sub.add_parser("julia-circle", help="circle Julia angles as CSV")
    _add_params(c)
    c.add_argument("--depth", type=int, required=True)
    c.add_argument("--level", choices=("H", "B"), default="H")
    c.add_argument("--out", default=None)

    c = sub.add_parser("bottcher-check", help="conjugacy residuals for a local map")
    c.add_argument("--map", required=True, help="path to a local-map JSON document")
    c.add_argument("--k", type=int, default=12)
    c.add_argument("--out", default=None)

    return parser


_DISPATCH = {
    "classify": _cmd_classify,
    "rays": _cmd_rays,
    "param-atlas": _cmd_param_atlas,
    "render": _cmd_render,
    "dilatation": _cmd_dilatation,
    "julia-circle": _cmd_julia_circle,
    "bottcher-check": _cmd_bottcher_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args, parser)
    except QrdynError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
