import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpewalk.walk import (
    HALF_PLUS_I,
    CoinPair,
    Spinor,
    WalkState,
    cos_sin,
    dump_initial_state,
    evolve,
    initial_local,
    initial_nonlocal,
    load_initial_state,
    make_coin,
    step,
    support,
    trajectory,
)
from oracles import dense_walk

R2 = math.sqrt(2)
angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def unit_spinors():
    comps = st.floats(-1, 1, allow_nan=False)
    return st.tuples(comps, comps, comps, comps).filter(lambda t: sum(x * x for x in t) > 1e-3).map(
        lambda t: (lambda n: Spinor(complex(t[0], t[1]) / n, complex(t[2], t[3]) / n))(math.sqrt(sum(x * x for x in t)))
    )


def amps(state):
    return {x: (sp.a, sp.b) for x, sp in state}


# -- coins ----------------------------------------------------------------------


def test_make_coin_examples():
    np.testing.assert_allclose(make_coin(math.pi / 4), np.array([[1, 1], [1, -1]]) / R2, atol=1e-15)
    np.testing.assert_array_equal(make_coin(math.pi / 2), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(make_coin(0.0), [[1, 0], [0, -1]])


@settings(max_examples=100)
@given(angles)
def test_coin_is_orthogonal_symmetric_reflection(theta):
    h = make_coin(theta)
    np.testing.assert_allclose(h @ h.T, np.eye(2), atol=1e-15)
    np.testing.assert_array_equal(h, h.T)
    assert np.linalg.det(h) == pytest.approx(-1.0, abs=1e-15)


def test_cos_sin_exact_on_quarter_turns():
    for n in range(-8, 9):
        c, s = cos_sin(n * math.pi / 2)
        assert (c, s) == [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][n % 4]
    assert cos_sin(1.0) == (math.cos(1.0), math.sin(1.0))
    # a genuinely different angle is not rounded
    assert cos_sin(math.pi / 2 + 1e-12)[0] != 0.0


def test_coin_pair_rejects_non_finite():
    with pytest.raises(ValueError):
        CoinPair(math.nan, 0.0)
    with pytest.raises(ValueError):
        CoinPair(0.0, math.inf)


def test_spinor_rejects_non_finite():
    with pytest.raises(ValueError):
        Spinor(complex(math.nan, 0), 0)


# -- initial states -------------------------------------------------------------


def test_initial_local_examples():
    assert amps(initial_local()) == {0: (1 / R2, 1j / R2)}
    assert amps(initial_local(Spinor(1, 0))) == {0: (1, 0)}
    assert amps(initial_local(Spinor(0.6, 0.8j))) == {0: (0.6, 0.8j)}
    assert initial_local().step == 0


def test_initial_local_rejects_unnormalized():
    with pytest.raises(ValueError, match="normalized"):
        initial_local(Spinor(1, 1))


def test_initial_nonlocal_examples():
    plus = amps(initial_nonlocal(+1))
    minus = amps(initial_nonlocal(-1))
    for x in (-1, 1):
        assert plus[x] == pytest.approx((0.5, 0.5j), abs=1e-15)
    assert minus[-1] == pytest.approx((0.5, 0.5j), abs=1e-15)
    assert minus[1] == pytest.approx((-0.5, -0.5j), abs=1e-15)
    z = amps(initial_nonlocal(+1, Spinor(1, 0)))
    assert z == pytest.approx({-1: (1 / R2, 0), 1: (1 / R2, 0)})
    with pytest.raises(ValueError):
        initial_nonlocal(2)


# -- stepping -------------------------------------------------------------------


def test_step_examples():
    s = step(initial_local(Spinor(1, 0)), CoinPair(0.0, 0.0))
    assert amps(s) == {-1: (1, 0)}
    assert s.step == 1
    s = step(initial_local(Spinor(0, 1)), CoinPair(math.pi / 4, 0.3))
    got = amps(s)
    assert got[-1] == pytest.approx((1 / R2, 0), abs=1e-15)
    assert got[1] == pytest.approx((0, -1 / R2), abs=1e-15)


def test_pauli_x_pair_returns_to_origin_on_even_steps():
    coins = CoinPair(math.pi / 2, math.pi / 2)
    for s in trajectory(initial_local(), coins, 40):
        if s.step % 2 == 0:
            assert support(s) == (0, 0)


def test_evolve_zero_steps_is_identity():
    s = initial_nonlocal(-1)
    assert evolve(s, CoinPair(0.4, 1.1), 0) is s


def test_evolve_negative_steps():
    with pytest.raises(ValueError):
        evolve(initial_local(), CoinPair(0.1, 0.2), -1)


@pytest.mark.parametrize("theta1", [0.0, 1.0, math.pi / 6, 2.5])
def test_local_theta0_half_pi_stays_in_pm2(theta1):
    s = evolve(initial_local(), CoinPair(math.pi / 2, theta1), 100)
    lo, hi = support(s)
    assert -2 <= lo and hi <= 2


def test_hadamard_matches_dense_oracle():
    got = evolve(initial_local(), CoinPair(math.pi / 4, math.pi / 4), 20)
    ref = dense_walk(math.pi / 4, math.pi / 4, {0: (1 / R2, 1j / R2)}, 20)
    for x in range(-22, 23):
        a, b = ref.get(x, (0, 0))
        sp = got[x]
        assert abs(sp.a - a) < 1e-12 and abs(sp.b - b) < 1e-12
        assert abs(sp.norm2 - (abs(a) ** 2 + abs(b) ** 2)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(angles, angles, unit_spinors(), st.integers(0, 30))
def test_two_period_matches_dense_oracle(t0, t1, spinor, steps):
    init = initial_nonlocal(-1, spinor)
    got = evolve(init, CoinPair(t0, t1), steps)
    ref = dense_walk(t0, t1, amps(init), steps)
    for x, (a, b) in ref.items():
        assert abs(got[x].a - a) < 1e-12 and abs(got[x].b - b) < 1e-12


# -- invariants -----------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(angles, angles, unit_spinors(), st.integers(0, 400))
def test_norm_conserved(t0, t1, spinor, steps):
    s = evolve(initial_local(spinor), CoinPair(t0, t1), steps)
    assert abs(s.norm() - 1.0) < 1e-12


def test_norm_conserved_over_ten_thousand_steps():
    rng = np.random.default_rng(7)
    z = rng.normal(size=4)
    z /= np.linalg.norm(z)
    spinor = Spinor(complex(z[0], z[1]), complex(z[2], z[3]))
    t0, t1 = rng.uniform(0, math.pi, 2)
    s = evolve(initial_nonlocal(+1, spinor), CoinPair(t0, t1), 10_000)
    assert abs(s.norm() - 1.0) < 1e-12


@settings(max_examples=30, deadline=None)
@given(angles, angles, st.sampled_from([-3, 0, 2, 5]), st.integers(0, 60))
def test_parity_alternates(t0, t1, x0, steps):
    init = WalkState.from_amplitudes({x0: HALF_PLUS_I})
    s = evolve(init, CoinPair(t0, t1), steps)
    assert s.parity() == (x0 + steps) % 2


@settings(max_examples=20, deadline=None)
@given(angles, angles)
def test_support_grows_at_most_one_site_per_side(t0, t1):
    prev = None
    for s in trajectory(initial_nonlocal(+1), CoinPair(t0, t1), 50):
        lo, hi = support(s)
        if prev is not None:
            assert lo >= prev[0] - 1 and hi <= prev[1] + 1
        prev = lo, hi


@pytest.mark.parametrize(
    "coins, init, bound",
    [
        (CoinPair(math.pi / 2, 1.0), initial_local(), 2),
        (CoinPair(1.0, math.pi / 2), initial_local(), 1),
        (CoinPair(1.0, math.pi / 2), initial_nonlocal(+1), 3),
        # the nonlocal theta0 = pi/2 walk reaches |x| = 2 at odd steps
        (CoinPair(math.pi / 2, 1.0), initial_nonlocal(+1), 2),
    ],
)
def test_bounded_walks_up_to_1000_steps(coins, init, bound):
    worst = max(max(-support(s)[0], support(s)[1]) for s in trajectory(init, coins, 1000))
    assert worst == bound


@settings(max_examples=20, deadline=None)
@given(angles, angles, st.integers(1, 40))
def test_pi_shift_is_a_global_phase(t0, t1, steps):
    base = evolve(initial_local(), CoinPair(t0, t1), steps)
    for shifted in (CoinPair(t0 + math.pi, t1), CoinPair(t0, t1 + math.pi)):
        other = evolve(initial_local(), shifted, steps)
        lo = min(base.offset, other.offset)
        hi = max(base.offset + len(base.a), other.offset + len(other.a))
        np.testing.assert_allclose(base.dense(lo, hi).__abs__() ** 2, other.dense(lo, hi).__abs__() ** 2, atol=1e-12)


# -- support --------------------------------------------------------------------


def test_support_examples():
    assert support(initial_local(Spinor(1, 0))) == (0, 0)
    with pytest.raises(ValueError):
        support(WalkState(0, np.zeros(1), np.zeros(1)))


def test_support_ignores_tiny_amplitudes():
    s = WalkState(-2, np.array([1e-15, 1, 0]), np.array([0, 0, 1e-15]))
    assert support(s) == (-1, -1)


# -- initial-state files --------------------------------------------------------


def test_file_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(3)
    z = rng.normal(size=(5, 4))
    z /= np.linalg.norm(z)
    state = WalkState.from_amplitudes(
        {x: Spinor(complex(r[0], r[1]), complex(r[2], r[3])) for x, r in zip(range(-4, 6, 2), z)}
    )
    path = tmp_path / "init.txt"
    dump_initial_state(state, path)
    loaded = load_initial_state(path)
    assert loaded.parity_label == "uniform"
    np.testing.assert_array_equal(loaded.state.a, state.a)
    np.testing.assert_array_equal(loaded.state.b, state.b)
    assert loaded.state.offset == state.offset


def test_loader_normalizes_and_reports_mixed(tmp_path):
    path = tmp_path / "mixed.txt"
    path.write_text("# two sites\n0 1 0 0 0\n\n1 0 0 1 0  # trailing comment\n")
    loaded = load_initial_state(path)
    assert loaded.parity_label == "mixed"
    assert loaded.parity is None
    assert loaded.state.norm() == pytest.approx(1.0, abs=1e-15)
    assert loaded.state[0].a == pytest.approx(1 / R2)


@pytest.mark.parametrize(
    "text",
    ["", "# only a comment\n", "0 1 0 0\n", "x 1 0 0 0\n", "0 nan 0 0 0\n", "0 0 0 0 0\n", "0 1 0 0 0\n0 1 0 0 0\n"],
)
def test_loader_rejects_bad_files(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ValueError):
        load_initial_state(path)
