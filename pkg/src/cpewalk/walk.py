"""Two-period discrete-time quantum walk on the integer line.

A walker carries a two-component coin spinor (a, b) on every occupied site,
the coefficients of |L> and |R>.  One step applies H(theta0) on even sites and
H(theta1) on odd sites, then moves the |L> component one site to the left and
the |R> component one site to the right.

States are stored as a contiguous window of sites ``[offset, offset + n)``
holding two complex arrays.  Exactly-zero entries at the window edges are
trimmed after every step, which keeps bounded walks small without discarding
any amplitude.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "OCCUPIED_THRESHOLD",
    "HALF_PLUS_I",
    "Spinor",
    "CoinPair",
    "WalkState",
    "make_coin",
    "cos_sin",
    "initial_local",
    "initial_nonlocal",
    "step",
    "evolve",
    "trajectory",
    "support",
    "LoadedState",
    "load_initial_state",
    "dump_initial_state",
]

OCCUPIED_THRESHOLD = 1e-14
NORM_TOL = 1e-12


@dataclass(frozen=True)
class Spinor:
    """Coin amplitudes ``a |L> + b |R>`` at one site (or one momentum)."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        if not all(math.isfinite(z) for z in (a.real, a.imag, b.real, b.imag)):
            raise ValueError(f"non-finite spinor component: ({a}, {b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def norm2(self) -> float:
        return abs(self.a) ** 2 + abs(self.b) ** 2

    def __mul__(self, z: complex) -> "Spinor":
        return Spinor(self.a * z, self.b * z)

    __rmul__ = __mul__


HALF_PLUS_I = Spinor(1 / math.sqrt(2), 1j / math.sqrt(2))


_QUARTER_TURN = math.pi / 2
_AXIS_CS = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


def cos_sin(theta: float) -> tuple[float, float]:
    """``(cos theta, sin theta)``, exact when theta is a multiple of pi/2 up to rounding.

    ``math.cos(math.pi / 2)`` is 6e-17 rather than 0; over a thousand steps
    that residue leaks amplitude past the occupancy threshold, so the float
    nearest ``n pi/2`` is treated as the exact angle.
    """
    q = round(theta / _QUARTER_TURN)
    if abs(theta - q * _QUARTER_TURN) <= 8 * sys.float_info.epsilon * max(1.0, abs(theta)):
        return _AXIS_CS[q % 4]
    return math.cos(theta), math.sin(theta)


@dataclass(frozen=True)
class CoinPair:
    """Coin angles in radians: ``theta0`` acts on even sites, ``theta1`` on odd sites."""

    theta0: float
    theta1: float

    def __post_init__(self):
        for name in ("theta0", "theta1"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)

    @property
    def c0(self) -> float:
        return cos_sin(self.theta0)[0]

    @property
    def s0(self) -> float:
        return cos_sin(self.theta0)[1]

    @property
    def c1(self) -> float:
        return cos_sin(self.theta1)[0]

    @property
    def s1(self) -> float:
        return cos_sin(self.theta1)[1]

    def coin(self, parity: int) -> np.ndarray:
        return make_coin(self.theta1 if parity % 2 else self.theta0)


def make_coin(theta: float) -> np.ndarray:
    """Return ``[[cos t, sin t], [sin t, -cos t]]``.

    The matrix is real, symmetric and orthogonal with determinant -1, so it is
    its own inverse.  ``theta = pi/4`` gives the Hadamard coin and
    ``theta = pi/2`` the Pauli X.
    """
    c, s = cos_sin(theta)
    return np.array([[c, s], [s, -c]], dtype=float)


@dataclass(frozen=True, eq=False)
class WalkState:
    """Walker state ``sum_x |x> (a(x)|L> + b(x)|R>)`` after ``step`` steps.

    ``a[i]`` and ``b[i]`` are the amplitudes at site ``offset + i``.  The arrays
    are never mutated in place; every operation returns a new state.
    """

    offset: int
    a: np.ndarray
    b: np.ndarray
    step: int = 0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("a and b must be 1-d arrays of equal length")
        if self.step < 0:
            raise ValueError("step counter must be nonnegative")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "offset", int(self.offset))

    @classmethod
    def from_amplitudes(cls, amplitudes: Mapping[int, Spinor], step: int = 0) -> "WalkState":
        if not amplitudes:
            raise ValueError("empty amplitude map")
        lo, hi = min(amplitudes), max(amplitudes)
        a = np.zeros(hi - lo + 1, dtype=complex)
        b = np.zeros(hi - lo + 1, dtype=complex)
        for x, sp in amplitudes.items():
            a[x - lo] += sp.a
            b[x - lo] += sp.b
        return cls(lo, a, b, step)

    @property
    def positions(self) -> np.ndarray:
        return self.offset + np.arange(len(self.a))

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.a) ** 2 + np.abs(self.b) ** 2

    @property
    def amplitudes(self) -> dict[int, Spinor]:
        """Ordered map of occupied sites (amplitude norm above threshold) to spinors."""
        occ = self.probabilities > OCCUPIED_THRESHOLD**2
        return {
            int(x): Spinor(a, b)
            for x, a, b, keep in zip(self.positions, self.a, self.b, occ)
            if keep
        }

    def __getitem__(self, x: int) -> Spinor:
        i = x - self.offset
        if 0 <= i < len(self.a):
            return Spinor(self.a[i], self.b[i])
        return Spinor(0, 0)

    def __iter__(self) -> Iterator[tuple[int, Spinor]]:
        return iter(self.amplitudes.items())

    def norm(self) -> float:
        return float(np.sqrt(self.probabilities.sum()))

    def parity(self) -> int | None:
        """Common parity (0 or 1) of all occupied sites, or None if mixed."""
        xs = [x for x in self.amplitudes]
        if not xs:
            raise ValueError("state has no occupied site")
        parities = {x % 2 for x in xs}
        return parities.pop() if len(parities) == 1 else None

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Amplitudes on sites ``lo..hi`` as an array of shape (hi - lo + 1, 2)."""
        out = np.zeros((hi - lo + 1, 2), dtype=complex)
        for x in range(lo, hi + 1):
            sp = self[x]
            out[x - lo] = sp.a, sp.b
        return out


def _check_unit(coin_state: Spinor) -> None:
    if abs(coin_state.norm2 - 1.0) > NORM_TOL:
        raise ValueError(f"coin state is not normalized (|a|^2+|b|^2 = {coin_state.norm2!r})")


def initial_local(coin_state: Spinor = HALF_PLUS_I) -> WalkState:
    """Walker at the origin with the given normalized coin state."""
    _check_unit(coin_state)
    return WalkState.from_amplitudes({0: coin_state})


def initial_nonlocal(sign: int, coin_state: Spinor = HALF_PLUS_I) -> WalkState:
    """Superposition ``(|-1> + sign |1>)/sqrt(2)`` tensored with ``coin_state``."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    _check_unit(coin_state)
    r = 1 / math.sqrt(2)
    return WalkState.from_amplitudes({-1: coin_state * r, 1: coin_state * (sign * r)})


def _trim(offset: int, a: np.ndarray, b: np.ndarray) -> tuple[int, np.ndarray, np.ndarray]:
    nz = np.flatnonzero((a != 0) | (b != 0))
    if nz.size == 0:
        return offset, a[:1], b[:1]
    lo, hi = nz[0], nz[-1] + 1
    return offset + int(lo), a[lo:hi], b[lo:hi]


def step(state: WalkState, coins: CoinPair) -> WalkState:
    """One coin-then-shift step; the coin at each site is chosen by its parity."""
    n = len(state.a)
    even = (state.positions % 2) == 0
    c = np.where(even, coins.c0, coins.c1)
    s = np.where(even, coins.s0, coins.s1)
    left = c * state.a + s * state.b
    right = s * state.a - c * state.b
    a = np.zeros(n + 2, dtype=complex)
    b = np.zeros(n + 2, dtype=complex)
    # new window starts at offset - 1: site x-1 lands on index i, x+1 on index i+2
    a[:n] = left
    b[2:] = right
    offset, a, b = _trim(state.offset - 1, a, b)
    return WalkState(offset, a, b, state.step + 1)


def evolve(state: WalkState, coins: CoinPair, steps: int) -> WalkState:
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    for _ in range(steps):
        state = step(state, coins)
    return state


def trajectory(state: WalkState, coins: CoinPair, steps: int) -> Iterator[WalkState]:
    """Yield the state at t = 0, 1, ..., steps."""
    yield state
    for _ in range(steps):
        state = step(state, coins)
        yield state


def support(state: WalkState) -> tuple[int, int]:
    """Tightest interval containing every site with amplitude norm above 1e-14."""
    occ = np.flatnonzero(np.sqrt(state.probabilities) > OCCUPIED_THRESHOLD)
    if occ.size == 0:
        raise ValueError("state has no occupied site")
    return state.offset + int(occ[0]), state.offset + int(occ[-1])


# -- initial-state files ------------------------------------------------------


@dataclass(frozen=True)
class LoadedState:
    state: WalkState
    parity: int | None  # None means mixed

    @property
    def parity_label(self) -> str:
        return "mixed" if self.parity is None else "uniform"


def _parse_lines(lines: Iterable[str]) -> dict[int, Spinor]:
    amps: dict[int, Spinor] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise ValueError(f"line {lineno}: expected 5 fields 'x re(a) im(a) re(b) im(b)', got {len(fields)}")
        try:
            x = int(fields[0])
            ar, ai, br, bi = (float(f) for f in fields[1:])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if x in amps:
            raise ValueError(f"line {lineno}: site {x} listed twice")
        amps[x] = Spinor(complex(ar, ai), complex(br, bi))
    if not amps:
        raise ValueError("initial-state file lists no sites")
    return amps


def load_initial_state(path: str | Path) -> LoadedState:
    """Read ``x re(a) im(a) re(b) im(b)`` lines, normalize, and report parity."""
    with open(path) as fh:
        amps = _parse_lines(fh)
    state = WalkState.from_amplitudes(amps)
    norm = state.norm()
    if norm == 0:
        raise ValueError("initial state has zero norm")
    # leave already-normalized input bit-identical
    if abs(norm - 1.0) > 1e-14:
        state = WalkState(state.offset, state.a / norm, state.b / norm)
    return LoadedState(state, state.parity())


def dump_initial_state(state: WalkState, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write("# x re(a) im(a) re(b) im(b)\n")
        for x, a, b in zip(state.positions, state.a, state.b):
            if a == 0 and b == 0:
                continue
            fh.write(" ".join([str(int(x))] + [repr(float(v)) for v in (a.real, a.imag, b.real, b.imag)]) + "\n")
