import math

import numpy as np
import pytest

from cpewalk.closed_forms import Bounded, BoundedCase, closed_density, closed_state, degenerate_density
from cpewalk.entanglement import entropy, reduced_density
from cpewalk.kspace import fourier_initial
from cpewalk.walk import CoinPair, Spinor, WalkState, initial_local, initial_nonlocal, support, trajectory

PI = math.pi
R2 = math.sqrt(2)
FREE = [0.3, 1.0, 2.2, PI / 3]


@pytest.mark.parametrize("which", list(Bounded))
@pytest.mark.parametrize("free", FREE)
def test_closed_state_matches_simulation(which, free):
    case = BoundedCase(which, free)
    for sim in trajectory(case.initial_state(), case.coins, 200):
        exact = closed_state(case, sim.step)
        lo = min(sim.offset, exact.offset) - 1
        hi = max(sim.offset + len(sim.a), exact.offset + len(exact.a)) + 1
        assert np.max(np.abs(sim.dense(lo, hi) - exact.dense(lo, hi))) < 1e-12, sim.step
        assert exact.norm() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("which", list(Bounded))
def test_unaveraged_density_matches_state(which):
    case = BoundedCase(which, 1.0)
    for n in range(201):
        parity = "odd" if n % 2 else "even"
        rho = closed_density(case, parity, averaged=False, n=n)
        assert rho.max_abs_diff(reduced_density(closed_state(case, n))) < 1e-12


def test_local_theta1_even_steps_sit_at_origin():
    case = BoundedCase(Bounded.LOCAL_THETA1, 0.8)
    for t in range(0, 60, 2):
        s = closed_state(case, t)
        assert support(s) == (0, 0)
        # spinor is (1, i)/sqrt2 up to a global phase
        assert abs(s[0].b - 1j * s[0].a) < 1e-15
        assert abs(s[0].a) == pytest.approx(1 / R2)


def test_local_theta0_sites():
    case = BoundedCase(Bounded.LOCAL_THETA0, 0.4)
    for n in range(40):
        sites = set(closed_state(case, n).amplitudes)
        assert sites <= ({-2, 0, 2} if n % 2 == 0 else {-1, 1})


def test_nonlocal_theta0_occupies_pm2_at_odd_steps():
    case = BoundedCase(Bounded.NONLOCAL_THETA0, 1.0)
    assert set(closed_state(case, 1).amplitudes) == {-2, 0, 2}
    assert set(closed_state(case, 2).amplitudes) == {-1, 1}


def test_averaged_density_examples():
    r = closed_density(BoundedCase(Bounded.LOCAL_THETA0, 1.0), "even")
    assert (r.alpha, r.beta, r.gamma) == (0.5, -0.25j, 0.5)
    assert entropy(r) == pytest.approx(0.811278, abs=5e-7)
    r = closed_density(BoundedCase(Bounded.LOCAL_THETA0, 1.0), "odd")
    assert r.beta == 0 and entropy(r) == 1.0
    even = closed_density(BoundedCase(Bounded.NONLOCAL_THETA0, 1.0), "even")
    odd = closed_density(BoundedCase(Bounded.NONLOCAL_THETA0, 1.0), "odd")
    # simulation fixes the sign of the even-step coherence to -i/2; the entropy is 0 either way
    assert even.beta == -0.5j and entropy(even) == 0.0
    assert odd.beta == 0.25j and entropy(odd) == pytest.approx(0.811278, abs=5e-7)


@pytest.mark.parametrize("which", list(Bounded))
@pytest.mark.parametrize("parity", ["even", "odd"])
def test_time_average_converges_for_generic_angle(which, parity):
    case = BoundedCase(which, 1.0)
    start = 0 if parity == "even" else 1
    rhos = [closed_density(case, parity, averaged=False, n=n) for n in range(start, 10_000, 2)]
    mean_beta = np.mean([r.beta for r in rhos])
    assert abs(mean_beta - closed_density(case, parity).beta) < 1e-3


def test_unaveraged_needs_matching_step():
    case = BoundedCase(Bounded.LOCAL_THETA0, 1.0)
    with pytest.raises(ValueError):
        closed_density(case, "even", averaged=False)
    with pytest.raises(ValueError):
        closed_density(case, "even", averaged=False, n=3)
    with pytest.raises(ValueError):
        closed_state(case, -1)


@pytest.mark.parametrize("init", [initial_local(), initial_nonlocal(+1), initial_nonlocal(-1, Spinor(0.6, 0.8j))])
def test_pauli_x_pair_is_two_periodic(init):
    coins = CoinPair(PI / 2, -PI / 2)
    lsp = fourier_initial(init)
    for sim in trajectory(init, coins, 12):
        parity = "odd" if sim.step % 2 else "even"
        assert degenerate_density(coins, lsp, parity).max_abs_diff(reduced_density(sim)) < 1e-15


def test_pauli_z_pair_loses_coherence():
    coins = CoinPair(0.0, PI)
    init = initial_nonlocal(+1, Spinor(0.6, 0.8j))
    rho = degenerate_density(coins, fourier_initial(init), "odd")
    assert (rho.alpha, rho.beta) == pytest.approx((0.36, 0))
    # the two coin components drift apart, so overlap vanishes after a few steps
    late = reduced_density(list(trajectory(init, coins, 5))[-1])
    assert late.max_abs_diff(rho) < 1e-15


def test_degenerate_density_rejects_generic_coins():
    with pytest.raises(ValueError):
        degenerate_density(CoinPair(0.3, 0.4), fourier_initial(initial_local()), "even")
