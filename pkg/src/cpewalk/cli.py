"""Command-line front end.

    cpewalk simulate   --theta0 pi/2 --theta1 1.0 --steps 100
    cpewalk asymptotic --theta0 pi/4 --theta1 pi/6 --parity even
    cpewalk sweep      --initial local --parity even --grid 41x41 --range 0:pi --out fig1.csv --svg fig1.svg
    cpewalk verify     --out report

Exit status: 0 success, 1 usage or input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .asymptotics import SweepGrid, SweepRow, asymptotic_density, sweep
from .entanglement import InvalidDensityError, entropy, reduced_density
from .kspace import fourier_initial
from .quadrature import QuadratureError, QuadratureSpec
from .verify import format_report, records_to_csv, run_verification, verification_grid
from .walk import (
    HALF_PLUS_I,
    CoinPair,
    Spinor,
    WalkState,
    dump_initial_state,
    initial_local,
    initial_nonlocal,
    load_initial_state,
    support,
    trajectory,
)

EXIT_USAGE = 1
EXIT_NUMERIC = 2

_ANGLE = re.compile(r"^([+-]?)(\d+(?:\.\d*)?|\.\d+)?\*?pi(?:/(\d+(?:\.\d*)?))?$")


class UsageError(Exception):
    pass


_SNAP_DENOMINATORS = (1, 2, 3, 4, 6, 8, 12)
_SNAP_MIN_DECIMALS = 8


def _snap_decimal(value: float, decimals: int) -> float:
    """Replace a long decimal that is a rounding of ``m pi/n`` by that angle.

    ``1.5707963268`` is pi/2 rounded to ten places; taken literally its cosine
    is 2e-11, enough to let a bounded walk leak past the occupancy threshold.
    Only inputs with at least eight decimals are considered, and only when
    ``m pi/n`` lies within half a unit of the last printed digit.
    """
    if decimals < _SNAP_MIN_DECIMALS:
        return value
    half_unit = 0.5 * 10.0 ** (-decimals)
    for n in _SNAP_DENOMINATORS:
        m = round(value * n / math.pi)
        candidate = m * math.pi / n
        if abs(candidate - value) <= half_unit:
            return candidate
    return value


def parse_angle(text: str, snap: bool = True) -> float:
    """Decimal radians or multiples of pi such as ``pi``, ``-pi/4``, ``3pi/4``, ``2*pi/3``."""
    s = text.strip().replace(" ", "").lower()
    m = _ANGLE.match(s)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        if den == 0:
            raise UsageError(f"division by zero in angle {text!r}")
        return sign * num * math.pi / den
    try:
        value = float(s)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"angle must be finite: {text!r}")
    if snap:
        frac = re.fullmatch(r"[+-]?\d*\.(\d+)", s)
        value = _snap_decimal(value, len(frac.group(1)) if frac else 0)
    return value


def parse_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"range must look like LO:HI, got {text!r}")
    lo, hi = (parse_angle(p) for p in parts)
    if not hi > lo:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def parse_grid(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)x(\d+)", text.strip().lower())
    if not m:
        raise UsageError(f"grid must look like 41x41, got {text!r}")
    n0, n1 = int(m.group(1)), int(m.group(2))
    if min(n0, n1) < 2:
        raise UsageError("grid resolution must be at least 2 per axis")
    return n0, n1


def parse_coin_state(text: str) -> Spinor:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"coin state must be two complex numbers 'a,b', got {text!r}")
    try:
        a, b = (complex(p.strip().replace(" ", "")) for p in parts)
    except ValueError:
        raise UsageError(f"cannot parse coin state {text!r}") from None
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    if norm == 0 or not math.isfinite(norm):
        raise UsageError("coin state must be nonzero and finite")
    if abs(norm - 1.0) > 1e-12:
        a, b = a / norm, b / norm
    return Spinor(a, b)


def fmt(x: float) -> str:
    """12 significant digits; -0 is written as 0."""
    return f"{float(x) + 0.0:.12g}"


@dataclass
class RunConfig:
    mode: str
    theta0: float = math.pi / 4
    theta1: float = math.pi / 4
    initial: str = "local"
    coin_state: Spinor = HALF_PLUS_I
    steps: int = 100
    window: tuple[int, int] = (400, 500)
    parity: str = "both"
    grid: tuple[int, int] | None = None
    range0: tuple[float, float] | None = None
    range1: tuple[float, float] | None = None
    nodes: int = 4096
    out: Path | None = None
    svg: Path | None = None
    dump_initial: Path | None = None
    workers: int = 1
    verify_points: int = 7
    verify_range: tuple[float, float] = (0.3, 1.4)
    tolerance: float = 2e-3
    messages: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in ("simulate", "asymptotic", "sweep", "verify"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.mode == "sweep":
            if self.grid is None or self.range0 is None or self.range1 is None:
                raise UsageError("sweep needs --grid and --range (or --range0/--range1)")
        if self.parity not in ("even", "odd", "both"):
            raise UsageError(f"parity must be even, odd or both, got {self.parity!r}")
        if self.steps < 0:
            raise UsageError("--steps must be nonnegative")
        if self.nodes < 64 or self.nodes % 2:
            raise UsageError("--nodes must be even and at least 64")

    @property
    def coins(self) -> CoinPair:
        return CoinPair(self.theta0, self.theta1)

    @property
    def parities(self) -> list[str]:
        return ["even", "odd"] if self.parity == "both" else [self.parity]

    @property
    def spec(self) -> QuadratureSpec:
        return QuadratureSpec(nodes=self.nodes)


def build_initial(config: RunConfig) -> WalkState | None:
    kind = config.initial
    if kind == "auto":
        return None
    if kind == "local":
        return initial_local(config.coin_state)
    if kind == "nonlocal-plus":
        return initial_nonlocal(+1, config.coin_state)
    if kind == "nonlocal-minus":
        return initial_nonlocal(-1, config.coin_state)
    try:
        loaded = load_initial_state(kind)
    except OSError as exc:
        raise UsageError(f"cannot read initial-state file {kind!r}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise UsageError(f"bad initial-state file {kind!r}: {exc}") from None
    config.messages.append(f"loaded {kind}: support parity {loaded.parity_label}")
    return loaded.state


def _require_uniform(state: WalkState, mode: str) -> None:
    if state.parity() is None:
        raise UsageError(f"{mode} needs an initial state whose sites all share one parity (got mixed)")


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, path: Path | None, stdout) -> None:
    if path is None:
        stdout.write(text)
    else:
        path.write_text(text)


def _with_suffix(path: Path, tag: str) -> Path:
    return path.with_name(f"{path.stem}_{tag}{path.suffix}")


# -- modes ---------------------------------------------------------------------


def run_simulate(config: RunConfig, init: WalkState, stdout) -> int:
    rows = []
    for state in trajectory(init, config.coins, config.steps):
        rho = reduced_density(state)
        lo, hi = support(state)
        rows.append(
            [str(state.step), fmt(entropy(rho)), fmt(rho.alpha), fmt(rho.beta.real), fmt(rho.beta.imag), str(lo), str(hi)]
        )
    header = ["t", "s_e", "alpha", "beta_re", "beta_im", "support_min", "support_max"]
    _emit(_csv(header, rows), config.out, stdout)
    return 0


def run_asymptotic(config: RunConfig, init: WalkState, stdout) -> int:
    _require_uniform(init, "asymptotic")
    lsp = fourier_initial(init)
    header = ["theta0", "theta1"]
    row = [fmt(config.theta0), fmt(config.theta1)]
    for parity in config.parities:
        res = asymptotic_density(config.coins, lsp, parity, config.spec)
        header += [f"{c}_{parity}" for c in ("s_e", "alpha", "beta_re", "beta_im", "method")]
        rho = res.density
        row += [fmt(res.entropy), fmt(rho.alpha), fmt(rho.beta.real), fmt(rho.beta.imag), res.method]
    _emit(_csv(header, [row]), config.out, stdout)
    return 0


SWEEP_HEADER = ["theta0", "theta1", "s_e", "alpha", "beta_re", "beta_im", "method", "error"]


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    return _csv(
        SWEEP_HEADER,
        [
            [fmt(r.theta0), fmt(r.theta1), fmt(r.entropy), fmt(r.alpha), fmt(r.beta.real), fmt(r.beta.imag), r.method, r.error]
            for r in rows
        ],
    )


def run_sweep(config: RunConfig, init: WalkState, stdout) -> int:
    _require_uniform(init, "sweep")
    grid = SweepGrid(config.range0, config.range1, config.grid)
    lsp = fourier_initial(init)
    failed = 0
    for parity in config.parities:
        rows = sweep(grid, lsp, parity, config.spec, workers=config.workers)
        failed += sum(r.method == "failed" for r in rows)
        out = config.out
        if out is not None and len(config.parities) > 1:
            out = _with_suffix(out, parity)
        _emit(sweep_csv(rows), out, stdout)
        if config.svg is not None:
            from .heatmap import write_heatmap

            svg = config.svg if len(config.parities) == 1 else _with_suffix(config.svg, parity)
            write_heatmap(rows, grid, svg, title=f"S_E after {parity} steps ({config.initial})")
    if failed:
        config.messages.append(f"{failed} sweep cell(s) failed; see the error column")
        return EXIT_NUMERIC
    return 0


def run_verify(config: RunConfig, init: WalkState | None, stdout) -> int:
    if init is None:
        # default: one state of each support parity
        initials = {"local": initial_local(config.coin_state), "nonlocal-plus": initial_nonlocal(+1, config.coin_state)}
    else:
        _require_uniform(init, "verify")
        initials = {config.initial: init}
    points = verification_grid(*config.verify_range, config.verify_points)
    records = run_verification(
        initials,
        points,
        parities=config.parities,
        window=config.window,
        spec=config.spec,
        tolerance=config.tolerance,
        workers=config.workers,
    )
    text = format_report(records)
    if config.out is None:
        stdout.write(text)
    else:
        config.out.with_suffix(".txt").write_text(text)
        config.out.with_suffix(".csv").write_text(records_to_csv(records))
        stdout.write(text)
    return 0 if all(r.passed for r in records) else EXIT_NUMERIC


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        init = build_initial(config)
        if config.dump_initial is not None:
            if init is None:
                raise UsageError("--dump-initial needs an explicit --initial")
            dump_initial_state(init, config.dump_initial)
        handler = {
            "simulate": run_simulate,
            "asymptotic": run_asymptotic,
            "sweep": run_sweep,
            "verify": run_verify,
        }[config.mode]
        status = handler(config, init, stdout)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (QuadratureError, InvalidDensityError) as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    for msg in config.messages:
        stderr.write(msg + "\n")
    return status


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cpewalk", description="Coin-position entanglement of two-period quantum walks.")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--theta0", default="pi/4", help="coin angle on even sites (radians or pi/4, 3pi/4, ...)")
    common.add_argument("--theta1", default="pi/4", help="coin angle on odd sites")
    common.add_argument(
        "--literal-angles",
        action="store_true",
        help="do not read long decimals such as 1.5707963268 as the nearby multiple of pi",
    )
    common.add_argument(
        "--initial",
        default=None,
        help="local (default; verify uses local and nonlocal-plus) | nonlocal-plus | nonlocal-minus | path to an initial-state file",
    )
    common.add_argument("--coin-state", default=None, help="coin state 'a,b' as complex numbers, default (1, i)/sqrt 2")
    common.add_argument("--nodes", type=int, default=4096, help="quadrature nodes")
    common.add_argument("--out", type=Path, default=None, help="output CSV (stdout if omitted)")
    common.add_argument("--dump-initial", type=Path, default=None, help="write the initial state to this file")
    common.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("simulate", parents=[common], help="direct lattice simulation, one CSV row per step")
    p.add_argument("--steps", type=int, default=100)

    p = sub.add_parser("asymptotic", parents=[common], help="long-time density by quadrature")
    p.add_argument("--parity", default="both", choices=["even", "odd", "both"])

    p = sub.add_parser("sweep", parents=[common], help="asymptotic entropy over a (theta0, theta1) grid")
    p.add_argument("--parity", default="even", choices=["even", "odd", "both"])
    p.add_argument("--grid", default="41x41")
    p.add_argument("--range", dest="range_", default=None, help="LO:HI for both axes, e.g. 0:pi")
    p.add_argument("--range0", default=None, help="LO:HI for theta0")
    p.add_argument("--range1", default=None, help="LO:HI for theta1")
    p.add_argument("--svg", type=Path, default=None, help="also write a heatmap SVG")

    p = sub.add_parser("verify", parents=[common], help="simulation vs quadrature on a parameter grid")
    p.add_argument("--parity", default="both", choices=["even", "odd", "both"])
    p.add_argument("--window", default="400:500", help="averaging window T0:T1 in steps")
    p.add_argument("--points", type=int, default=7, help="grid points per axis")
    p.add_argument("--range", dest="range_", default="0.3:1.4")
    p.add_argument("--tolerance", type=float, default=2e-3)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = dict(
        mode=ns.mode,
        theta0=parse_angle(ns.theta0, snap=not ns.literal_angles),
        theta1=parse_angle(ns.theta1, snap=not ns.literal_angles),
        initial=ns.initial or ("auto" if ns.mode == "verify" else "local"),
        nodes=ns.nodes,
        out=ns.out,
        dump_initial=ns.dump_initial,
        workers=ns.workers,
    )
    if ns.coin_state is not None:
        kw["coin_state"] = parse_coin_state(ns.coin_state)
    if hasattr(ns, "parity"):
        kw["parity"] = ns.parity
    if ns.mode == "simulate":
        kw["steps"] = ns.steps
    if ns.mode == "sweep":
        both = parse_range(ns.range_) if ns.range_ else None
        kw["grid"] = parse_grid(ns.grid)
        kw["range0"] = parse_range(ns.range0) if ns.range0 else both
        kw["range1"] = parse_range(ns.range1) if ns.range1 else both
        kw["svg"] = ns.svg
    if ns.mode == "verify":
        lo, hi = ns.window.split(":") if ":" in ns.window else (None, None)
        try:
            kw["window"] = (int(lo), int(hi))
        except (TypeError, ValueError):
            raise UsageError(f"window must look like 400:500, got {ns.window!r}") from None
        kw["verify_points"] = ns.points
        kw["verify_range"] = parse_range(ns.range_)
        kw["tolerance"] = ns.tolerance
    return RunConfig(**kw)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
