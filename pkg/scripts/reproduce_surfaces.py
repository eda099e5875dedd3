"""Regenerate the four 41x41 entropy surfaces as CSV (and SVG heatmaps).

    python3 scripts/reproduce_surfaces.py --out surfaces --workers 4
"""

import argparse
import math
import time
from pathlib import Path

from cpewalk.asymptotics import SweepGrid, sweep
from cpewalk.cli import sweep_csv
from cpewalk.heatmap import write_heatmap
from cpewalk.walk import initial_local, initial_nonlocal

SURFACES = {
    "local_even": (initial_local, "even"),
    "local_odd": (initial_local, "odd"),
    "nonlocal_even": (lambda: initial_nonlocal(+1), "even"),
    "nonlocal_odd": (lambda: initial_nonlocal(+1), "odd"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("surfaces"))
    ap.add_argument("--resolution", type=int, default=41)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--no-svg", action="store_true")
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    grid = SweepGrid((0.0, math.pi), (0.0, math.pi), (args.resolution, args.resolution))
    for name, (make_init, parity) in SURFACES.items():
        start = time.perf_counter()
        rows = sweep(grid, make_init(), parity, workers=args.workers)
        (args.out / f"{name}.csv").write_text(sweep_csv(rows))
        if not args.no_svg:
            write_heatmap(rows, grid, args.out / f"{name}.svg", title=name.replace("_", " "))
        closed = sum(r.method == "closed-form" for r in rows)
        failed = sum(r.method == "failed" for r in rows)
        print(f"{name}: {len(rows)} cells ({closed} closed-form, {failed} failed) in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
