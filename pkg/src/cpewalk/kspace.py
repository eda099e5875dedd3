"""Momentum-space propagation of two-period walks.

With ``psi~(k) = sum_x exp(-ikx) psi(x)`` one step becomes ``H~ = R(k) H`` with
``R(k) = diag(exp(ik), exp(-ik))``.  When the support has a single parity all
sites share one coin at every step, so two steps act as ``H~1 H~0`` (even
support) or ``H~0 H~1`` (odd support) at each momentum separately.

The two-step operator has eigenvalues ``tau +- i sqrt(1 - tau^2)`` with
``tau = c0 c1 cos 2k + s0 s1`` and unnormalised eigenvectors ``(u, v +- w)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import QuadratureSpec, periodic_average
from .walk import CoinPair, Spinor, WalkState, cos_sin

__all__ = [
    "DEGENERACY_TOL",
    "DegenerateMomentumError",
    "FullyDegenerateError",
    "LaurentSpinor",
    "EigenSystem",
    "fully_degenerate",
    "fourier_initial",
    "kspace_coin",
    "two_step_matrix",
    "eigen_system",
    "spinor_at",
    "inverse_fourier",
]

DEGENERACY_TOL = 1e-8
FULL_DEGENERACY_TOL = 1e-9


class DegenerateMomentumError(ValueError):
    """Momentum where both two-step eigenvalues coincide (|w| < 1e-8)."""


class FullyDegenerateError(ValueError):
    """Coin pair whose two-step operator is degenerate or diagonal at every momentum."""


def fully_degenerate(coins: CoinPair) -> str | None:
    """'pauli-x' if both angles are pi/2 mod pi, 'pauli-z' if both are 0 mod pi.

    For Pauli-X coins the two-step operator is the identity; for Pauli-Z coins
    it is diagonal and the eigenvector formula returns the zero vector.
    """
    if abs(coins.c0) < FULL_DEGENERACY_TOL and abs(coins.c1) < FULL_DEGENERACY_TOL:
        return "pauli-x"
    if abs(coins.s0) < FULL_DEGENERACY_TOL and abs(coins.s1) < FULL_DEGENERACY_TOL:
        return "pauli-z"
    return None


@dataclass(frozen=True, eq=False)
class LaurentSpinor:
    """Finite Fourier series ``a~(k) = sum_x a(x) exp(-ikx)`` (likewise b~)."""

    positions: np.ndarray
    a: np.ndarray
    b: np.ndarray
    parity: int

    def __call__(self, k) -> tuple[np.ndarray, np.ndarray]:
        k = np.asarray(k, dtype=float)
        phase = np.exp(-1j * np.multiply.outer(k, self.positions))
        return phase @ self.a, phase @ self.b

    @property
    def order(self) -> str:
        return "odd" if self.parity else "even"

    def to_state(self) -> WalkState:
        return WalkState.from_amplitudes(
            {int(x): Spinor(a, b) for x, a, b in zip(self.positions, self.a, self.b)}
        )

    def norm2(self) -> float:
        """Position-space norm, equal to ``int dk/2pi (|a~|^2 + |b~|^2)``."""
        return float(np.sum(np.abs(self.a) ** 2 + np.abs(self.b) ** 2))


def fourier_initial(state: WalkState) -> LaurentSpinor:
    parity = state.parity()
    if parity is None:
        raise ValueError(
            "initial support mixes even and odd sites; k-space propagation needs a single parity"
        )
    amps = state.amplitudes
    xs = np.array(sorted(amps), dtype=float)
    a = np.array([amps[int(x)].a for x in xs], dtype=complex)
    b = np.array([amps[int(x)].b for x in xs], dtype=complex)
    return LaurentSpinor(xs, a, b, parity)


def kspace_coin(k, theta: float) -> np.ndarray:
    """``R(k) H(theta)``; broadcasts over k, returning shape k.shape + (2, 2)."""
    k = np.asarray(k, dtype=float)
    c, s = cos_sin(theta)
    e = np.exp(1j * k)
    out = np.empty(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = e * c
    out[..., 0, 1] = e * s
    out[..., 1, 0] = s / e
    out[..., 1, 1] = -c / e
    return out


def _first_theta(coins: CoinPair, order: str) -> tuple[float, float]:
    if order == "even":
        return coins.theta0, coins.theta1
    if order == "odd":
        return coins.theta1, coins.theta0
    raise ValueError(f"order must be 'even' or 'odd', got {order!r}")


def two_step_matrix(k, coins: CoinPair, order: str) -> np.ndarray:
    """``H~1 H~0`` for even order, ``H~0 H~1`` for odd order."""
    first, second = _first_theta(coins, order)
    return kspace_coin(k, second) @ kspace_coin(k, first)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Spectral data of the two-step operator at one or many momenta.

    Eigenvector ``gamma`` is ``(u, v + (-1)^gamma w) / sqrt(n_gamma)`` with
    eigenvalue ``lambda_gamma``; ``f`` and ``g`` are the overlaps of the
    unnormalised eigenvectors with the initial spinor.  ``vp`` and ``vm`` hold
    ``v + w`` and ``v - w`` computed without cancellation.
    """

    k: np.ndarray
    order: str
    lambda0: np.ndarray
    lambda1: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    vp: np.ndarray
    vm: np.ndarray
    n0: np.ndarray
    n1: np.ndarray
    f: np.ndarray
    g: np.ndarray
    degenerate: np.ndarray

    def eigenvectors(self) -> tuple[np.ndarray, np.ndarray]:
        V0 = np.stack([self.u, self.vp], axis=-1) / np.sqrt(self.n0)[..., None]
        V1 = np.stack([self.u, self.vm], axis=-1) / np.sqrt(self.n1)[..., None]
        return V0, V1

    def amplitudes(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        """``(p0, p1) = (lambda0^m F/N0, lambda1^m G/N1)`` after m two-step periods.

        The spinor is then ``a~ = u (p0 + p1)``, ``b~ = (v + w) p0 + (v - w) p1``.
        """
        return self.lambda0**m * self.f / self.n0, self.lambda1**m * self.g / self.n1


def _split_roots(r: np.ndarray, x: np.ndarray, u2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(r - x, r + x)`` using ``(r - x)(r + x) = |u|^2`` for the smaller factor."""
    big = r + np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big > 0, u2 / np.where(big > 0, big, 1.0), 0.0)
    pos = x >= 0
    return np.where(pos, small, big), np.where(pos, big, small)


def eigen_system(
    k,
    coins: CoinPair,
    order: str,
    init: LaurentSpinor | None = None,
    strict: bool = True,
) -> EigenSystem:
    """Eigen-decomposition of the two-step operator at momentum ``k``.

    With ``strict`` a degenerate momentum raises DegenerateMomentumError;
    otherwise degenerate entries are marked in ``degenerate`` and hold NaN.

    ``|w|`` is evaluated as ``sqrt(|u|^2 + (c0 c1 sin 2k)^2)``, which equals
    ``sqrt(1 - tau^2)`` but stays accurate when tau is close to +-1.
    """
    kind = fully_degenerate(coins)
    if kind is not None:
        raise FullyDegenerateError(f"coins {coins} are {kind}: no spectral decomposition")
    first, second = _first_theta(coins, order)
    c_a, s_a = cos_sin(first)
    c_b, s_b = cos_sin(second)
    k = np.asarray(k, dtype=float)
    cc = coins.c0 * coins.c1
    tau = cc * np.cos(2 * k) + coins.s0 * coins.s1
    u = s_a * c_b * np.exp(2j * k) - c_a * s_b
    u2 = np.abs(u) ** 2
    x = cc * np.sin(2 * k)
    root = np.sqrt(u2 + x * x)
    w = 1j * root
    lam0 = tau + 1j * root
    lam1 = tau - 1j * root
    v = -1j * x
    d_plus, d_minus = _split_roots(root, x, u2)
    vp, vm = 1j * d_plus, -1j * d_minus  # v + w, v - w
    n0 = u2 + d_plus**2
    n1 = u2 + d_minus**2
    degenerate = root < DEGENERACY_TOL
    if strict and np.any(degenerate):
        bad = np.atleast_1d(k)[np.atleast_1d(degenerate)]
        raise DegenerateMomentumError(f"degenerate momentum k={bad[0]!r} for {coins}")
    if init is None:
        f = g = np.full(k.shape, np.nan + 0j)
    else:
        a0, b0 = init(k)
        f = np.conj(u) * a0 + np.conj(vp) * b0
        g = np.conj(u) * a0 + np.conj(vm) * b0
    if np.any(degenerate):
        nan = np.where(degenerate, np.nan, 1.0)
        n0, n1, f, g = n0 * nan, n1 * nan, f * nan, g * nan
    return EigenSystem(k, order, lam0, lam1, u, v, w, vp, vm, n0, n1, f, g, degenerate)


def spinor_at(k, t: int, coins: CoinPair, init: LaurentSpinor, strict: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """``(a~(k, t), b~(k, t))`` from the spectral decomposition.

    Even steps use ``a~ = u P``, ``b~ = v P + w M`` with ``P, M = p0 +- p1``; an odd step then applies
    the first coin of the period, ``R(k) H``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    k = np.asarray(k, dtype=float)
    if t == 0:
        return init(k)
    es = eigen_system(k, coins, init.order, init, strict=strict)
    p0, p1 = es.amplitudes(t // 2)
    a = es.u * (p0 + p1)
    b = es.vp * p0 + es.vm * p1
    if t % 2:
        first, _ = _first_theta(coins, init.order)
        c, s = cos_sin(first)
        e = np.exp(1j * k)
        a, b = e * (c * a + s * b), (s * a - c * b) / e
    return a, b


def inverse_fourier(
    spinor: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    x: int,
    spec: QuadratureSpec = QuadratureSpec(),
) -> Spinor:
    """``int dk/2pi exp(ikx) (a~(k), b~(k))`` by periodic quadrature."""

    def integrand(k):
        a, b = spinor(k)
        e = np.exp(1j * k * x)
        return np.stack([e * a, e * b])

    res = periodic_average(integrand, spec)
    return Spinor(res.value[0], res.value[1])
