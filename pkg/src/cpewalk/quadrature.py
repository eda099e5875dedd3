"""Uniform-grid quadrature for 2pi-periodic integrands, ``int dk/2pi f(k)``.

On a periodic interval the rectangle and trapezoid rules coincide and converge
geometrically for analytic integrands.  Nodes sit at the cell midpoints
``k_j = -pi + (j + 1/2) h`` so that, for node counts divisible by four, the
special momenta 0, +-pi/2 and pi are never sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["QuadratureSpec", "QuadratureError", "periodic_grid", "periodic_average", "integrate_periodic"]


class QuadratureError(RuntimeError):
    """Successive grid refinements disagree, or no node could be evaluated."""


@dataclass(frozen=True)
class QuadratureSpec:
    nodes: int = 4096
    offset: bool = True
    refinement: int = 2
    max_refinements: int = 2
    tol: float = 1e-8

    def __post_init__(self):
        if self.nodes < 64 or self.nodes % 2:
            raise ValueError(f"nodes must be even and >= 64, got {self.nodes}")
        if self.refinement < 2:
            raise ValueError("refinement factor must be at least 2")


def periodic_grid(n: int, offset: bool = True) -> np.ndarray:
    h = 2 * math.pi / n
    shift = 0.5 if offset else 0.0
    return -math.pi + (np.arange(n) + shift) * h


def _fill_flagged(values: np.ndarray) -> tuple[np.ndarray, int]:
    """Replace NaN nodes by the mean of their nearest valid periodic neighbours."""
    bad = ~np.isfinite(values)
    if values.ndim > 1:
        bad = bad.any(axis=0)
    nbad = int(bad.sum())
    if nbad == 0:
        return values, 0
    n = bad.size
    if nbad == n:
        raise QuadratureError("every quadrature node is flagged")
    good = np.flatnonzero(~bad)
    idx = np.flatnonzero(bad)
    # nearest valid node on each side, wrapping around
    right = np.searchsorted(good, idx) % good.size
    left = (right - 1) % good.size
    out = values.copy()
    out[..., idx] = 0.5 * (values[..., good[left]] + values[..., good[right]])
    return out, nbad


@dataclass(frozen=True)
class AverageResult:
    value: np.ndarray | complex
    residual: float
    skipped: int
    nodes: int


def _average_once(f, n: int, offset: bool) -> tuple[np.ndarray, int]:
    k = periodic_grid(n, offset)
    vals = np.asarray(f(k), dtype=complex)
    vals, skipped = _fill_flagged(vals)
    return vals.mean(axis=-1), skipped


def periodic_average(f: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec = QuadratureSpec()) -> AverageResult:
    """Average ``f`` over one period with refinement until two grids agree.

    ``f`` maps an array of momenta (shape (n,)) to values of shape (n,) or
    (m, n) for m integrands at once; NaN marks nodes the integrand refuses.
    """
    n = spec.nodes
    prev, skipped = _average_once(f, n, spec.offset)
    residual = math.inf
    for _ in range(spec.max_refinements):
        n *= spec.refinement
        cur, skipped = _average_once(f, n, spec.offset)
        residual = float(np.max(np.abs(cur - prev)))
        if residual < spec.tol:
            value = cur if np.ndim(cur) else complex(cur)
            return AverageResult(value, residual, skipped, n)
        prev = cur
    raise QuadratureError(
        f"no convergence after {spec.max_refinements} refinements "
        f"(last change {residual:.3e} >= {spec.tol:.1e} at {n} nodes)"
    )


def integrate_periodic(f: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec = QuadratureSpec()) -> complex:
    """``int_{-pi}^{pi} dk/2pi f(k)`` for a scalar integrand."""
    res = periodic_average(f, spec)
    if np.ndim(res.value):
        raise ValueError("integrand is vector valued; use periodic_average")
    return complex(res.value)
