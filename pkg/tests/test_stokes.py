import numpy as np
import pytest

from qpolar.states import make_pure, pure_to_block, random_pure_state
from qpolar.stokes import (
    casimir_check, commutator_check, degree_stokes, moments, stokes_matrices,
    uncertainty_check,
)


@pytest.mark.parametrize("n", range(13))
def test_su2_algebra(n):
    assert commutator_check(n) <= 1e-10
    assert casimir_check(n) <= 1e-10


def test_matrix_elements_two_photons():
    m = stokes_matrices(2)
    r2 = np.sqrt(2)
    assert np.allclose(m.sx, [[0, r2, 0], [r2, 0, r2], [0, r2, 0]])
    assert np.allclose(m.sz, np.diag([-2, 0, 2]))
    assert np.allclose(m.s0, 2 * np.eye(3))
    assert not m.sx.flags.writeable


def test_fixed_fock_states():
    # |1,1>: zero mean, variances (4, 4, 0)
    mom = moments(make_pure({(2, 1): 1.0}))
    assert np.allclose(mom.vec, 0, atol=1e-14)
    assert np.allclose(mom.var, [4, 4, 0], atol=1e-12)
    assert degree_stokes(make_pure({(2, 1): 1.0})) == 0.0
    # |N,0> is fully polarized along +z
    mom = moments(make_pure({(3, 3): 1.0}))
    assert np.allclose(mom.vec, [0, 0, 3])
    assert degree_stokes(make_pure({(3, 3): 1.0})) == pytest.approx(1.0)


def test_vacuum_degree_is_zero():
    assert degree_stokes(make_pure({(0, 0): 1.0})) == 0.0


def test_diagonal_polarization():
    st = make_pure({(1, 0): 1.0, (1, 1): 1.0})
    assert np.allclose(moments(st).vec, [1, 0, 0])


def test_block_and_pure_moments_agree(rng):
    for _ in range(20):
        st = random_pure_state(rng, [0, 2, 5])
        a, b = moments(st), moments(pure_to_block(st))
        assert np.allclose(a.vec, b.vec, atol=1e-12)
        assert np.allclose(a.var, b.var, atol=1e-12)
        assert a.s0 == pytest.approx(b.s0)


def test_uncertainty_relation(rng):
    for _ in range(50):
        st = random_pure_state(rng, list(rng.choice(7, size=2, replace=False)))
        total, bound = uncertainty_check(st)
        assert total >= bound - 1e-10
