#!/usr/bin/env python3
"""Smoke test for the polyfold Python bindings.

Builds the extension with cargo if needed, imports it, and checks a few
known answers on the unit cube. Run from anywhere:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    lib = None
    for profile in ("release", "debug"):
        cand = ROOT / "target" / profile / "libpolyfold.so"
        if cand.exists():
            lib = cand
            break
    if lib is None:
        subprocess.run(
            ["cargo", "build", "-p", "polyfold-py"], cwd=ROOT, check=True
        )
        lib = ROOT / "target" / "debug" / "libpolyfold.so"
    stage = Path(tempfile.mkdtemp(prefix="polyfold-py-"))
    shutil.copy2(lib, stage / "polyfold.so")
    sys.path.insert(0, str(stage))
    import polyfold

    return polyfold


def approx(a, b, eps=1e-9):
    assert abs(a - b) <= eps, f"{a} != {b} (+-{eps})"


def main():
    polyfold = load_module()

    cube = polyfold.Complex.box([0, 0, 0], [1, 1, 1])
    assert cube.surface_dim == 2
    assert cube.ambient_dim == 3
    assert cube.facet_count == 6
    assert cube.ridge_count == 12

    facet, point = cube.locate([0.5, 0.5, 0.0])
    assert len(point) == 2

    u = polyfold.Unfolding(cube, [[0.5, 0.5, 0.0]])
    assert u.source_count == 1
    assert u.event_count == 17
    counts = u.image_counts()
    assert sorted(counts.values()) == [1, 3, 3, 3, 3, 4]

    approx(u.distance_ambient([0.5, 0.5, 1.0]), 2.0)
    top, tp = cube.locate([0.5, 0.5, 1.0])
    approx(u.brute_force_distance(top, tp, max_len=3), 2.0)
    paths = u.paths(top, tp)
    assert len(paths) == 4
    for p in paths:
        approx(p["length"], 2.0)
        assert p["points"][0][0] == facet
        assert p["points"][-1][0] == top

    f = u.foldout()
    assert f["dim"] == 2
    assert len(f["cells"]) == 9
    area = 0.0
    for c in f["cells"]:
        vs = c["vertices"]
        cx = sum(v[0] for v in vs) / len(vs)
        cy = sum(v[1] for v in vs) / len(vs)
        vs = sorted(vs, key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
        for i in range(len(vs)):
            x0, y0 = vs[i]
            x1, y1 = vs[(i + 1) % len(vs)]
            area += 0.5 * (x0 * y1 - x1 * y0)
    approx(area, 6.0, 1e-7)

    cl = u.cut_locus()
    assert cl["pieces"] and cl["skeleton"]

    two = polyfold.Unfolding(cube, [[0.5, 0.5, 0.0], [0.5, 0.5, 1.0]])
    cells = two.voronoi_cells()
    assert {c["source_index"] for c in cells} == {0, 1}
    assert {c["facet"] for c in cells} == set(range(6))

    tet = polyfold.Complex.from_points(
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    )
    assert tet.facet_count == 4
    checks = tet.verify(oracle_targets=10, star_segments=10)
    bad = [name for name, ok, _ in checks if not ok]
    assert not bad, f"failed checks: {bad}"

    print("smoke test passed")


if __name__ == "__main__":
    main()
