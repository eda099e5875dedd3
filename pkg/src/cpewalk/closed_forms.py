"""Exact wave functions and coin densities for the bounded walks.

When one coin is the Pauli X (angle pi/2) the walker never leaves a few sites
around the origin.  The four cases below start from the coin state
``(|L> + i|R>)/sqrt(2)``, either at the origin (local) or on ``(|-1> + |1>)/sqrt(2)``
(nonlocal), and are written with their exact global phases so they can be
compared amplitude by amplitude with direct simulation.

``degenerate_density`` covers the two coin families for which the momentum
space decomposition breaks down at every k (both coins Pauli X, or both Pauli Z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .entanglement import CoinDensity, reduced_density
from .kspace import LaurentSpinor, fully_degenerate
from .walk import CoinPair, Spinor, WalkState, initial_local, initial_nonlocal, step

__all__ = ["Bounded", "BoundedCase", "closed_state", "closed_density", "degenerate_density"]

SQRT2 = math.sqrt(2.0)
HALF_PI = math.pi / 2


class Bounded(Enum):
    LOCAL_THETA0 = "local-theta0"  # theta0 = pi/2, walker confined to [-2, 2]
    LOCAL_THETA1 = "local-theta1"  # theta1 = pi/2, walker confined to [-1, 1]
    NONLOCAL_THETA1 = "nonlocal-theta1"  # theta1 = pi/2, confined to [-3, 3]
    NONLOCAL_THETA0 = "nonlocal-theta0"  # theta0 = pi/2, confined to [-2, 2]


@dataclass(frozen=True)
class BoundedCase:
    which: Bounded
    free_angle: float

    @property
    def coins(self) -> CoinPair:
        if self.which in (Bounded.LOCAL_THETA0, Bounded.NONLOCAL_THETA0):
            return CoinPair(HALF_PI, self.free_angle)
        return CoinPair(self.free_angle, HALF_PI)

    @property
    def local(self) -> bool:
        return self.which in (Bounded.LOCAL_THETA0, Bounded.LOCAL_THETA1)

    def initial_state(self) -> WalkState:
        return initial_local() if self.local else initial_nonlocal(+1)


def _add(amps: dict[int, list[complex]], x: int, a: complex = 0, b: complex = 0) -> None:
    cell = amps.setdefault(x, [0j, 0j])
    cell[0] += a
    cell[1] += b


def closed_state(case: BoundedCase, n: int) -> WalkState:
    """Exact state after ``n`` steps."""
    if n < 0:
        raise ValueError("step count must be nonnegative")
    t, odd = divmod(n, 2)
    th = case.free_angle
    sign = (-1) ** t
    plus = cmath.exp(-1j * t * th) + sign * cmath.exp(1j * t * th)
    minus = cmath.exp(-1j * t * th) - sign * cmath.exp(1j * t * th)
    amps: dict[int, list[complex]] = {}
    which = case.which

    if which is Bounded.LOCAL_THETA0:
        f = 1j**t / (2 * SQRT2)
        if not odd:
            _add(amps, 0, f * plus, 1j * f * plus)
            _add(amps, -2, a=f * minus)
            _add(amps, 2, b=1j * f * minus)
        else:
            _add(amps, -1, a=1j * f * plus)
            _add(amps, 1, b=f * plus)
            _add(amps, 1, a=1j * f * minus)
            _add(amps, -1, b=f * minus)

    elif which is Bounded.LOCAL_THETA1:
        if not odd:
            f = (-1j) ** t / SQRT2 * cmath.exp(1j * t * th)
            _add(amps, 0, f, 1j * f)
        else:
            f = (-1j) ** t / SQRT2 * cmath.exp(1j * (t + 1) * th)
            _add(amps, -1, a=f)
            _add(amps, 1, b=-1j * f)

    elif which is Bounded.NONLOCAL_THETA1:
        f = 1j**t / 4
        g = 1j**t / 2 * cmath.exp(-1j * t * th)
        if not odd:
            _add(amps, 1, a=f * plus)
            _add(amps, -1, b=1j * f * plus)
            _add(amps, -3, a=f * minus)
            _add(amps, 3, b=1j * f * minus)
            _add(amps, -1, a=g)
            _add(amps, 1, b=1j * g)
        else:
            _add(amps, -2, a=1j * f * plus)
            _add(amps, 2, b=f * plus)
            _add(amps, 2, a=1j * f * minus)
            _add(amps, -2, b=f * minus)
            _add(amps, 0, 1j * g, g)

    else:  # NONLOCAL_THETA0
        if not odd:
            f = (-1j) ** t / 2 * cmath.exp(1j * t * th)
            _add(amps, -1, f, 1j * f)
            _add(amps, 1, f, 1j * f)
        else:
            # at odd times the walker occupies {-2, 0, 2}, not the origin alone
            f = (-1j) ** t / 2 * cmath.exp(1j * (t + 1) * th)
            _add(amps, -2, a=f)
            _add(amps, 0, f, -1j * f)
            _add(amps, 2, b=-1j * f)

    return WalkState.from_amplitudes({x: Spinor(*ab) for x, ab in amps.items()}, step=n)


def closed_density(
    case: BoundedCase,
    step_parity: str,
    averaged: bool = True,
    n: int | None = None,
) -> CoinDensity:
    """Reduced coin density of a bounded walk.

    With ``averaged`` the long-time mean over steps of the given parity is
    returned; otherwise ``n`` (whose parity must match) selects one step.
    Averages assume a free angle that is not a rational multiple of pi; at
    such resonant angles the oscillating term of the even-step density need
    not average out.
    """
    if step_parity not in ("even", "odd"):
        raise ValueError(f"step_parity must be 'even' or 'odd', got {step_parity!r}")
    if not averaged:
        if n is None:
            raise ValueError("an unaveraged density needs the step index n")
        if (n % 2 == 1) != (step_parity == "odd"):
            raise ValueError(f"step {n} does not have parity {step_parity}")
    t = None if n is None else n // 2
    which, th = case.which, case.free_angle
    even = step_parity == "even"

    if which in (Bounded.LOCAL_THETA0, Bounded.NONLOCAL_THETA1):
        if not even:
            beta = 0j if which is Bounded.LOCAL_THETA0 else 0.25j
        elif averaged:
            beta = -0.25j
        else:
            beta = -0.25j * (1 + (-1) ** t * math.cos(2 * t * th))
    elif which is Bounded.LOCAL_THETA1:
        beta = -0.5j if even else 0j
    else:
        beta = -0.5j if even else 0.25j
    return CoinDensity(0.5, beta, 0.5)


def degenerate_density(coins: CoinPair, init: LaurentSpinor, step_parity: str) -> CoinDensity:
    """Long-time coin density when both coins are Pauli X or both Pauli Z (mod sign).

    Pauli-X coins make the walk periodic with period two (up to a global sign),
    so even steps reproduce the initial density and odd steps the one-step
    density.  Pauli-Z coins never mix |L> and |R>: the two components separate
    ballistically, populations stay fixed and the coherence vanishes.
    """
    kind = fully_degenerate(coins)
    if kind is None:
        raise ValueError(f"{coins} is not a fully degenerate coin pair")
    state = init.to_state()
    rho0 = reduced_density(state)
    if kind == "pauli-x":
        if step_parity == "even":
            return rho0
        return reduced_density(step(state, coins))
    return CoinDensity(rho0.alpha, 0j, rho0.gamma)
