"""Cross-check quadrature against time-averaged simulation on the 7x7 grid.

Writes ``<out>.txt`` and ``<out>.csv``; exits with status 1 if any point fails.
"""

import argparse
import sys
from pathlib import Path

from cpewalk.verify import format_report, records_to_csv, run_verification, verification_grid
from cpewalk.walk import initial_local, initial_nonlocal


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("verification"))
    ap.add_argument("--points", type=int, default=7)
    ap.add_argument("--window", default="400:500")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    lo, hi = (int(x) for x in args.window.split(":"))
    records = run_verification(
        {"local": initial_local(), "nonlocal-plus": initial_nonlocal(+1), "nonlocal-minus": initial_nonlocal(-1)},
        verification_grid(0.3, 1.4, args.points),
        window=(lo, hi),
        workers=args.workers,
    )
    report = format_report(records)
    args.out.with_suffix(".txt").write_text(report)
    args.out.with_suffix(".csv").write_text(records_to_csv(records))
    print(report, end="")
    return 0 if all(r.passed for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
