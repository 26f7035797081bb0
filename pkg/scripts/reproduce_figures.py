#!/usr/bin/env python3
"""Reproduce the standard gallery: two plane renders, three parameter
atlases, and the boundary polylines of the rendered maps.

Writes PPM images and CSV files into out/ (or a directory given as the
first argument).  Everything is deterministic.
"""
import pathlib
import sys
import time

import numpy as np

from qrdyn import MapParams, RenderConfig, boundary_polyline, render
from qrdyn.blaschke import classify_disk_grid
from qrdyn.cli import _ATLAS_COLORS, write_ppm

GALLERY = [
    ("stretch225_theta075_deg6", MapParams(2.25, 0.75, 6)),
    ("stretch500_theta000_deg5", MapParams(5.0, 0.0, 5)),
]


def main() -> int:
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("out")
    out.mkdir(parents=True, exist_ok=True)
    cfg = RenderConfig(center=0j, half_width=1.5, resolution=512, max_iter=256)

    for name, p in GALLERY:
        t0 = time.monotonic()
        img = render(p, cfg, jobs=1)
        path = out / f"render_{name}.ppm"
        write_ppm(str(path), img)
        print(f"{path}  ({time.monotonic() - t0:.2f}s)")

        poly = boundary_polyline(p, 720, 1e-8)
        csv = out / f"boundary_{name}.csv"
        with open(csv, "w", newline="") as fh:
            fh.write("re,im\n")
            for z in poly:
                fh.write(f"{z.real!r},{z.imag!r}\n")
        print(f"{csv}  (radius range {np.abs(poly).min():.4f}..{np.abs(poly).max():.4f})")

    for n in (2, 3, 4):
        t0 = time.monotonic()
        codes = classify_disk_grid(n, 384, iters=1200)
        img = _ATLAS_COLORS[codes]
        path = out / f"atlas_degree{n}.ppm"
        write_ppm(str(path), img)
        frac = (codes == 1).sum() / (codes > 0).sum()
        print(f"{path}  (elliptic fraction {frac:.3f}, {time.monotonic() - t0:.2f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
