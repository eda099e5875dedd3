import math

import numpy as np
import pytest

from cpewalk.quadrature import QuadratureError, QuadratureSpec, integrate_periodic, periodic_average, periodic_grid


def test_examples():
    assert integrate_periodic(lambda k: np.ones_like(k)) == pytest.approx(1.0, abs=1e-15)
    assert abs(integrate_periodic(lambda k: np.exp(2j * k))) < 1e-15
    assert integrate_periodic(lambda k: np.cos(k) ** 2) == pytest.approx(0.5, abs=1e-15)


def test_offset_grid_avoids_special_momenta():
    k = periodic_grid(4096)
    for special in (0.0, math.pi / 2, -math.pi / 2, math.pi, -math.pi):
        assert np.min(np.abs(k - special)) > 1e-4
    assert np.isclose(periodic_grid(64, offset=False)[0], -math.pi)


def test_flagged_nodes_are_interpolated():
    def f(k):
        out = np.cos(k) ** 2 + 0j
        out[np.argmin(np.abs(k - 0.1))] = np.nan
        return out

    res = periodic_average(f)
    assert res.skipped == 1
    assert res.value == pytest.approx(0.5, abs=1e-6)


def test_vector_valued_integrands():
    res = periodic_average(lambda k: np.stack([np.ones_like(k), np.sin(k) ** 2]))
    np.testing.assert_allclose(res.value, [1.0, 0.5], atol=1e-15)
    with pytest.raises(ValueError):
        integrate_periodic(lambda k: np.stack([k, k]))


def test_non_convergence_is_reported():
    # modes 64 and 128 alias to different constants on the 64-, 128- and 256-node grids
    spec = QuadratureSpec(nodes=64)
    with pytest.raises(QuadratureError, match="no convergence"):
        integrate_periodic(lambda k: np.exp(64j * k) + np.exp(128j * k), spec)


def test_all_flagged_is_an_error():
    with pytest.raises(QuadratureError, match="every"):
        integrate_periodic(lambda k: np.full_like(k, np.nan))


@pytest.mark.parametrize("nodes", [0, 32, 63, 101])
def test_spec_validation(nodes):
    with pytest.raises(ValueError):
        QuadratureSpec(nodes=nodes)
