import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpolar.channel import block_diagonalize, photon_distribution, rescale_unbounded
from qpolar.states import make_pure, random_block_density


def test_coherences_are_removed():
    st_ = make_pure({(0, 0): 1.0, (1, 1): 1.0})
    bd = block_diagonalize(st_)
    assert bd.manifolds == (0, 1)
    assert np.allclose(bd.dense(), np.diag([0.5, 0.0, 0.5]))


def test_idempotent(rng):
    bd = random_block_density(rng, [1, 2])
    assert block_diagonalize(bd) is bd


def test_photon_distribution():
    st_ = make_pure({(0, 0): 1.0, (2, 0): 1.0, (2, 1): 1.0})
    assert photon_distribution(st_) == [(0, pytest.approx(1 / 3)), (2, pytest.approx(2 / 3))]
    assert photon_distribution(block_diagonalize(st_)) == photon_distribution(st_)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_rescale_is_order_preserving(x, y):
    rx, ry = rescale_unbounded(x), rescale_unbounded(y)
    assert 0 <= rx < 1
    if x < y:
        assert rx <= ry


def test_rescale_rejects_negative():
    with pytest.raises(ValueError):
        rescale_unbounded(-0.1)
