"""Reduced coin density operator and coin-position entanglement entropy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walk import WalkState

__all__ = [
    "CoinDensity",
    "InvalidDensityError",
    "reduced_density",
    "density_eigenvalues",
    "entropy",
]

TRACE_TOL = 1e-10
PSD_TOL = 1e-12
CLAMP_TOL = 1e-12
DISCRIMINANT_TOL = 1e-9


class InvalidDensityError(ValueError):
    """The 2x2 matrix is not a valid density operator beyond round-off."""


@dataclass(frozen=True)
class CoinDensity:
    """``[[alpha, beta], [conj(beta), gamma]]``, Hermitian by construction."""

    alpha: float
    beta: complex
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.alpha, self.beta], [self.beta.conjugate(), self.gamma]], dtype=complex
        )

    @property
    def trace(self) -> float:
        return self.alpha + self.gamma

    @property
    def determinant(self) -> float:
        return self.alpha * self.gamma - abs(self.beta) ** 2

    def validate(self) -> "CoinDensity":
        """Raise InvalidDensityError unless trace is 1 and the matrix is PSD."""
        if abs(self.trace - 1.0) > TRACE_TOL:
            raise InvalidDensityError(f"trace {self.trace!r} differs from 1")
        if self.determinant < -PSD_TOL or self.alpha < -PSD_TOL or self.gamma < -PSD_TOL:
            raise InvalidDensityError(f"not positive semidefinite: {self}")
        return self

    def conjugate(self) -> "CoinDensity":
        return CoinDensity(self.alpha, self.beta.conjugate(), self.gamma)

    def max_abs_diff(self, other: "CoinDensity") -> float:
        return float(
            max(
                abs(self.alpha - other.alpha),
                abs(self.beta - other.beta),
                abs(self.gamma - other.gamma),
            )
        )

    @classmethod
    def mean(cls, densities) -> "CoinDensity":
        densities = list(densities)
        if not densities:
            raise ValueError("cannot average an empty sequence of densities")
        n = len(densities)
        return cls(
            math.fsum(d.alpha for d in densities) / n,
            complex(
                math.fsum(d.beta.real for d in densities) / n,
                math.fsum(d.beta.imag for d in densities) / n,
            ),
            math.fsum(d.gamma for d in densities) / n,
        )


def reduced_density(state: WalkState) -> CoinDensity:
    """Trace out position: alpha = sum |a|^2, beta = sum a b*, gamma = sum |b|^2."""
    a, b = state.a, state.b
    return CoinDensity(
        float(np.vdot(a, a).real),
        complex(np.sum(a * b.conj())),
        float(np.vdot(b, b).real),
    )


def _clamp(r: float) -> float:
    if r < 0.0:
        if r < -CLAMP_TOL:
            raise InvalidDensityError(f"eigenvalue {r!r} is negative")
        return 0.0
    if r > 1.0:
        if r > 1.0 + CLAMP_TOL:
            raise InvalidDensityError(f"eigenvalue {r!r} exceeds 1")
        return 1.0
    return r


def density_eigenvalues(rho: CoinDensity) -> tuple[float, float]:
    """Eigenvalues ``r1 >= r2`` of a unit-trace 2x2 density, via the closed form.

    ``r1,2 = (1 +- sqrt(1 + 4(|beta|^2 - alpha*gamma))) / 2``.  Round-off outside
    [0, 1] is clamped; anything larger raises InvalidDensityError.
    """
    disc = 1.0 + 4.0 * (abs(rho.beta) ** 2 - rho.alpha * rho.gamma)
    if disc > 1.0 + DISCRIMINANT_TOL:
        raise InvalidDensityError(f"discriminant {disc!r} > 1: not a density operator")
    if disc < 0.0:
        if disc < -DISCRIMINANT_TOL:
            raise InvalidDensityError(f"negative discriminant {disc!r}")
        disc = 0.0
    r1 = _clamp(0.5 * (1.0 + math.sqrt(disc)))
    r2 = 1.0 - r1
    return r1, r2


def entropy(rho: CoinDensity) -> float:
    """Von Neumann entropy in bits, with 0 log 0 = 0."""
    total = 0.0
    for r in density_eigenvalues(rho):
        if r > 1e-300:
            total -= r * math.log2(r)
    return min(max(total, 0.0), 1.0)
