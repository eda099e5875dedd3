"""Long-time coin density from the momentum-space spectral decomposition.

Dropping every term that carries ``lambda^{2t}(k)`` (they vanish by the
Riemann-Lebesgue lemma) leaves time-independent integrands built from

    A = |F|^2/N0^2 + |G|^2/N1^2,    D = |F|^2/N0^2 - |G|^2/N1^2.

After even steps ``alpha = int |u|^2 A`` and
``beta = int (u v* A + u w* D)``; after odd steps the first coin of the
period is applied once more.  ``gamma`` is integrated separately from the
``|b~|^2`` integrand and ``alpha + gamma = 1`` is checked.

The integrands are evaluated in the equivalent eigenvector form (see
:func:`asymptotic_integrands`), which avoids the cancellation in ``v - w``
near diagonal coin pairs.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .closed_forms import degenerate_density
from .entanglement import CoinDensity, InvalidDensityError, entropy
from .kspace import LaurentSpinor, eigen_system, fourier_initial, fully_degenerate
from .quadrature import QuadratureError, QuadratureSpec, integrate_periodic, periodic_average
from .walk import CoinPair, WalkState, cos_sin

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "integrate_periodic",
    "AsymptoticResult",
    "asymptotic_integrands",
    "asymptotic_density",
    "SweepGrid",
    "SweepRow",
    "sweep",
]

TRACE_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class AsymptoticResult:
    density: CoinDensity
    entropy: float
    step_parity: str
    branch: str  # "even-support" or "odd-support"
    method: str = "quadrature"  # or "closed-form"
    residual: float = 0.0
    skipped: int = 0
    trace_defect: float = 0.0


def asymptotic_integrands(k: np.ndarray, coins: CoinPair, init: LaurentSpinor, step_parity: str) -> np.ndarray:
    """Stacked (alpha, beta, gamma) integrands on the momenta ``k``; NaN at degenerate nodes.

    Written with the eigenvector components ``u`` and ``v +- w``: after even
    steps ``alpha = |u|^2 A`` and ``beta = u v* A + u w* D`` become
    ``|u|^2 (pf + pg)`` and ``u ((v+w)* pf + (v-w)* pg)`` with
    ``pf = |F|^2/N0^2`` and ``pg = |G|^2/N1^2``.  After odd steps each
    eigenvector is first rotated by the coin of the period's first step.
    """
    es = eigen_system(k, coins, init.order, init, strict=False)
    pf = np.abs(es.f) ** 2 / es.n0**2
    pg = np.abs(es.g) ** 2 / es.n1**2
    u, vp, vm = es.u, es.vp, es.vm
    if step_parity == "even":
        top0 = top1 = u
        bot0, bot1 = vp, vm
        phase = 1.0
    elif step_parity == "odd":
        theta = coins.theta0 if init.order == "even" else coins.theta1
        c, s = cos_sin(theta)
        top0, top1 = c * u + s * vp, c * u + s * vm
        bot0, bot1 = s * u - c * vp, s * u - c * vm
        phase = np.exp(2j * k)
    else:
        raise ValueError(f"step_parity must be 'even' or 'odd', got {step_parity!r}")
    alpha = np.abs(top0) ** 2 * pf + np.abs(top1) ** 2 * pg
    beta = phase * (top0 * bot0.conj() * pf + top1 * bot1.conj() * pg)
    gamma = np.abs(bot0) ** 2 * pf + np.abs(bot1) ** 2 * pg
    return np.stack([alpha, beta, gamma])


def _branch(init: LaurentSpinor) -> str:
    return "odd-support" if init.parity else "even-support"


def asymptotic_density(
    coins: CoinPair,
    init: LaurentSpinor | WalkState,
    step_parity: str,
    spec: QuadratureSpec = QuadratureSpec(),
) -> AsymptoticResult:
    """Long-time (Cesaro) coin density after even or odd steps.

    Pauli-X/Pauli-Z coin pairs, where the decomposition fails at every
    momentum, are handled exactly by :func:`closed_forms.degenerate_density`.
    """
    if isinstance(init, WalkState):
        init = fourier_initial(init)
    if step_parity not in ("even", "odd"):
        raise ValueError(f"step_parity must be 'even' or 'odd', got {step_parity!r}")
    if fully_degenerate(coins):
        rho = degenerate_density(coins, init, step_parity).validate()
        return AsymptoticResult(rho, entropy(rho), step_parity, _branch(init), method="closed-form")

    res = periodic_average(lambda k: asymptotic_integrands(k, coins, init, step_parity), spec)
    alpha, beta, gamma = res.value
    defect = abs(alpha.real + gamma.real - 1.0)
    if defect > TRACE_CHECK_TOL:
        raise InvalidDensityError(f"alpha + gamma = {alpha.real + gamma.real!r}, expected 1")
    rho = CoinDensity(alpha.real, beta, 1.0 - alpha.real).validate()
    return AsymptoticResult(
        rho,
        entropy(rho),
        step_parity,
        _branch(init),
        residual=res.residual,
        skipped=res.skipped,
        trace_defect=defect,
    )


# -- parameter sweeps -----------------------------------------------------------


@dataclass(frozen=True)
class SweepGrid:
    theta0: tuple[float, float]
    theta1: tuple[float, float]
    resolution: tuple[int, int]

    def __post_init__(self):
        if min(self.resolution) < 2:
            raise ValueError("sweep resolution must be at least 2 per axis")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(*self.theta0, self.resolution[0]),
            np.linspace(*self.theta1, self.resolution[1]),
        )

    def points(self) -> list[tuple[float, float]]:
        t0, t1 = self.axes()
        return [(float(a), float(b)) for a in t0 for b in t1]


@dataclass(frozen=True)
class SweepRow:
    theta0: float
    theta1: float
    entropy: float
    alpha: float
    beta: complex
    method: str
    error: str = ""

    @property
    def flagged(self) -> bool:
        return self.method != "quadrature" or bool(self.error)


def _sweep_cell(args) -> SweepRow:
    theta0, theta1, init, step_parity, spec = args
    try:
        res = asymptotic_density(CoinPair(theta0, theta1), init, step_parity, spec)
    except (QuadratureError, InvalidDensityError, ValueError) as exc:
        nan = math.nan
        return SweepRow(theta0, theta1, nan, nan, complex(nan, nan), "failed", f"{type(exc).__name__}: {exc}")
    return SweepRow(theta0, theta1, res.entropy, res.density.alpha, res.density.beta, res.method)


def sweep(
    grid: SweepGrid,
    init: LaurentSpinor | WalkState,
    step_parity: str,
    spec: QuadratureSpec = QuadratureSpec(),
    workers: int = 1,
) -> list[SweepRow]:
    """Asymptotic entropy on a theta0-major grid; failures are recorded per row."""
    if isinstance(init, WalkState):
        init = fourier_initial(init)
    tasks = [(a, b, init, step_parity, spec) for a, b in grid.points()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_cell, tasks, chunksize=32))
    return [_sweep_cell(t) for t in tasks]
