"""Independent checks of the asymptotic densities.

The quadrature route is compared against plain direct simulation averaged
over a window of steps, and the oscillatory terms dropped by the quadrature
route are evaluated explicitly to show that they decay.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .asymptotics import asymptotic_density
from .entanglement import CoinDensity, entropy, reduced_density
from .kspace import LaurentSpinor, eigen_system, fourier_initial
from .quadrature import QuadratureSpec, periodic_average
from .walk import CoinPair, WalkState, evolve, step

__all__ = [
    "AverageWindow",
    "ComparisonReport",
    "time_averaged_density",
    "compare_routes",
    "oscillatory_residuals",
    "riemann_lebesgue_decay",
    "decays",
    "VerificationRecord",
    "verification_grid",
    "run_verification",
    "format_report",
    "records_to_csv",
]


@dataclass(frozen=True)
class AverageWindow:
    """Steps ``t_min <= t <= t_max`` of one parity."""

    t_min: int = 400
    t_max: int = 500
    parity: str = "even"
    min_steps: int = 20

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.t_min < 0 or self.t_max < self.t_min:
            raise ValueError(f"bad window [{self.t_min}, {self.t_max}]")
        if len(self.steps()) < self.min_steps:
            raise ValueError(
                f"window [{self.t_min}, {self.t_max}] has {len(self.steps())} {self.parity} steps, "
                f"need at least {self.min_steps}"
            )

    def steps(self) -> list[int]:
        want = 1 if self.parity == "odd" else 0
        return [t for t in range(self.t_min, self.t_max + 1) if t % 2 == want]


def time_averaged_density(coins: CoinPair, init: WalkState, window: AverageWindow) -> CoinDensity:
    """Arithmetic mean of the reduced density over the window's steps."""
    included = set(window.steps())
    state = evolve(init, coins, window.t_min - init.step) if window.t_min > init.step else init
    if state.step != window.t_min:
        raise ValueError(f"initial state is already at step {init.step} > t_min={window.t_min}")
    densities = []
    while True:
        if state.step in included:
            densities.append(reduced_density(state))
        if state.step >= window.t_max:
            break
        state = step(state, coins)
    return CoinDensity.mean(densities).validate()


@dataclass(frozen=True)
class ComparisonReport:
    max_density_diff: float
    entropy_diff: float
    routes: tuple[str, str]
    coins: CoinPair
    step_parity: str
    entropy_sim: float
    entropy_quad: float
    density_sim: CoinDensity
    density_quad: CoinDensity


def compare_routes(
    coins: CoinPair,
    init: WalkState,
    step_parity: str,
    window: AverageWindow | None = None,
    spec: QuadratureSpec = QuadratureSpec(),
) -> ComparisonReport:
    if window is None:
        window = AverageWindow(400, 500, step_parity)
    if window.parity != step_parity:
        raise ValueError("window parity and step parity differ")
    sim = time_averaged_density(coins, init, window)
    quad = asymptotic_density(coins, fourier_initial(init), step_parity, spec).density
    s_sim, s_quad = entropy(sim), entropy(quad)
    return ComparisonReport(
        max_density_diff=sim.max_abs_diff(quad),
        entropy_diff=abs(s_sim - s_quad),
        routes=("time-averaged simulation", "asymptotic quadrature"),
        coins=coins,
        step_parity=step_parity,
        entropy_sim=s_sim,
        entropy_quad=s_quad,
        density_sim=sim,
        density_quad=quad,
    )


def _nodes_for(t: int, spec: QuadratureSpec) -> QuadratureSpec:
    # lambda^{2t} oscillates at up to 4t radians per unit k
    n = spec.nodes
    while n < 32 * t:
        n *= 2
    return QuadratureSpec(n, spec.offset, spec.refinement, spec.max_refinements, spec.tol)


def oscillatory_residuals(terms, t_list: Sequence[int], spec: QuadratureSpec = QuadratureSpec()) -> list[float]:
    """``|int dk/2pi sum_j lam_j(k)^{2t} amp_j(k)|`` for each t.

    ``terms(k)`` returns a list of ``(lam, amp)`` array pairs, or of
    ``(lam, amp)`` where ``amp`` has a leading axis for several integrands, in
    which case the largest magnitude is reported.
    """
    out = []
    for t in t_list:

        def integrand(k, t=t):
            return sum(lam ** (2 * t) * amp for lam, amp in terms(k))

        res = periodic_average(integrand, _nodes_for(t, spec))
        out.append(float(np.max(np.abs(res.value))))
    return out


def riemann_lebesgue_decay(
    coins: CoinPair,
    init: LaurentSpinor | WalkState,
    t_list: Sequence[int],
    spec: QuadratureSpec = QuadratureSpec(),
) -> list[float]:
    """Size of the oscillating part of the density after ``2t`` steps.

    The returned value is ``max(|alpha(2t) - alpha_bar|, |beta(2t) - beta_bar|)``
    computed from the cross terms ``lambda0^{2t} F G*/(N0 N1)`` and its
    conjugate partner.
    """
    if isinstance(init, WalkState):
        init = fourier_initial(init)

    def terms(k):
        es = eigen_system(k, coins, init.order, init, strict=False)
        x = es.f * np.conj(es.g) / (es.n0 * es.n1)
        u2 = np.abs(es.u) ** 2
        # alpha picks up |u|^2 (l0 X + l1 X*); beta picks up u v*(l0 X + l1 X*) - u w*(l0 X - l1 X*),
        # i.e. u (v-w)* l0 X + u (v+w)* l1 X*
        amp0 = np.stack([u2 * x, es.u * np.conj(es.vm) * x])
        amp1 = np.stack([u2 * np.conj(x), es.u * np.conj(es.vp) * np.conj(x)])
        return [(es.lambda0, amp0), (es.lambda1, amp1)]

    return oscillatory_residuals(terms, t_list, spec)


def decays(residuals: Sequence[float]) -> bool:
    """True when the largest residual in the later half is below the earlier half's."""
    half = len(residuals) // 2
    if half == 0:
        raise ValueError("need at least two residuals")
    return max(residuals[half:]) < max(residuals[:half])


# -- grid verification -----------------------------------------------------------

DEFAULT_T_LIST = tuple(2**j for j in range(10))


@dataclass(frozen=True)
class VerificationRecord:
    initial: str
    step_parity: str
    theta0: float
    theta1: float
    entropy_sim: float
    entropy_quad: float
    entropy_diff: float
    max_density_diff: float
    decay_first_half: float
    decay_second_half: float
    tolerance: float

    @property
    def decay_ok(self) -> bool:
        return self.decay_second_half < self.decay_first_half

    @property
    def passed(self) -> bool:
        return self.entropy_diff < self.tolerance and self.decay_ok


def verification_grid(lo: float = 0.3, hi: float = 1.4, n: int = 7) -> list[tuple[float, float]]:
    axis = np.linspace(lo, hi, n)
    return [(float(a), float(b)) for a in axis for b in axis]


def _verify_point(args) -> VerificationRecord:
    name, init, parity, theta0, theta1, window_bounds, spec, t_list, tol = args
    coins = CoinPair(theta0, theta1)
    window = AverageWindow(window_bounds[0], window_bounds[1], parity)
    rep = compare_routes(coins, init, parity, window, spec)
    res = riemann_lebesgue_decay(coins, init, t_list, spec)
    half = len(res) // 2
    return VerificationRecord(
        name,
        parity,
        theta0,
        theta1,
        rep.entropy_sim,
        rep.entropy_quad,
        rep.entropy_diff,
        rep.max_density_diff,
        max(res[:half]),
        max(res[half:]),
        tol,
    )


def run_verification(
    initials: dict[str, WalkState],
    points: Iterable[tuple[float, float]],
    parities: Sequence[str] = ("even", "odd"),
    window: tuple[int, int] = (400, 500),
    spec: QuadratureSpec = QuadratureSpec(),
    t_list: Sequence[int] = DEFAULT_T_LIST,
    tolerance: float = 2e-3,
    workers: int = 1,
) -> list[VerificationRecord]:
    points = list(points)
    tasks = [
        (name, init, parity, a, b, window, spec, tuple(t_list), tolerance)
        for name, init in initials.items()
        for parity in parities
        for a, b in points
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_verify_point, tasks))
    return [_verify_point(t) for t in tasks]


def records_to_csv(records: Sequence[VerificationRecord]) -> str:
    buf = io.StringIO()
    fields = list(VerificationRecord.__dataclass_fields__) + ["decay_ok", "passed"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in records:
        row = asdict(r)
        writer.writerow(
            [_fmt(row[f]) for f in VerificationRecord.__dataclass_fields__]
            + [str(r.decay_ok).lower(), str(r.passed).lower()]
        )
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v + 0.0:.12g}"
    return str(v)


def format_report(records: Sequence[VerificationRecord]) -> str:
    lines = []
    groups: dict[tuple[str, str], list[VerificationRecord]] = {}
    for r in records:
        groups.setdefault((r.initial, r.step_parity), []).append(r)
    for (name, parity), recs in groups.items():
        worst = max(recs, key=lambda r: r.entropy_diff)
        worst_density = max(r.max_density_diff for r in recs)
        ndecay = sum(r.decay_ok for r in recs)
        status = "PASS" if all(r.passed for r in recs) else "FAIL"
        lines.append(
            f"{status} {name:<15} {parity:<4} points={len(recs):3d} "
            f"max|dS|={worst.entropy_diff:.3e} at ({worst.theta0:.4f}, {worst.theta1:.4f}) "
            f"max|drho|={worst_density:.3e} decay {ndecay}/{len(recs)}"
        )
    total_pass = all(r.passed for r in records)
    lines.append(f"overall: {'PASS' if total_pass else 'FAIL'} ({len(records)} comparisons)")
    return "\n".join(lines) + "\n"
