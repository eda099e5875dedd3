"""Coin-position entanglement of one-dimensional quantum walks with two-period coins."""

from .asymptotics import AsymptoticResult, SweepGrid, SweepRow, asymptotic_density, sweep
from .closed_forms import Bounded, BoundedCase, closed_density, closed_state, degenerate_density
from .entanglement import CoinDensity, InvalidDensityError, density_eigenvalues, entropy, reduced_density
from .kspace import (
    DegenerateMomentumError,
    EigenSystem,
    FullyDegenerateError,
    LaurentSpinor,
    eigen_system,
    fourier_initial,
    inverse_fourier,
    spinor_at,
    two_step_matrix,
)
from .quadrature import QuadratureError, QuadratureSpec, integrate_periodic, periodic_average
from .verify import AverageWindow, compare_routes, riemann_lebesgue_decay, time_averaged_density
from .walk import (
    HALF_PLUS_I,
    CoinPair,
    Spinor,
    WalkState,
    evolve,
    initial_local,
    initial_nonlocal,
    load_initial_state,
    dump_initial_state,
    make_coin,
    step,
    support,
    trajectory,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
