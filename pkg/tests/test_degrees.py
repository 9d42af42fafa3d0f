import numpy as np
import pytest

from qpolar.degrees import (
    MEASURES, chernoff_infimum, chernoff_overlap, curve_to_csv, degree_bures,
    degree_chernoff, degree_hs, fidelity, hs_distance, max_curve, max_curve_verify,
    max_value, nbar_grid, spectral_summary, sup_over_unpolarized,
)
from qpolar.states import (
    UnpolarizedSpec, make_block, make_pure, random_block_density, unpolarized_state,
)
from qpolar.su2 import transform

# 40-digit evaluations of 1 - inf_s [sum_N p_N (N+1)^{1-1/s}]^s (mpmath, frozen)
CHERNOFF_MAX = {0.2: 0.053877128155926518, 0.5: 0.14564485829742932,
                4.9: 0.80466316855669586}


def _pure(n):
    return make_pure({(n, 0): 1.0})


def _sigma(weights):
    return unpolarized_state(UnpolarizedSpec.from_weights(weights))


@pytest.mark.parametrize("n", range(11))
def test_pure_n_photon_values(n):
    assert degree_hs(_pure(n)) == pytest.approx(n / (n + 1), abs=1e-12)
    assert degree_chernoff(_pure(n)) == pytest.approx(n / (n + 1), abs=1e-9)
    assert degree_bures(_pure(n)) == pytest.approx(1 - (n + 1) ** -0.5, abs=1e-12)


def test_one_one_state_is_polarized():
    s11 = make_pure({(2, 1): 1.0})
    assert degree_hs(s11) == pytest.approx(2 / 3)


@pytest.mark.parametrize("weights", [{0: 1.0}, {2: 1.0}, {1: 0.3, 4: 0.7}, {0: 0.2, 3: 0.5, 6: 0.3}])
def test_unpolarized_states_give_zero(weights):
    st = _sigma(weights)
    for f in (degree_hs, degree_bures, degree_chernoff):
        assert abs(f(st)) <= 1e-9


def test_nonzero_off_unpolarized(rng):
    # mixed blocks that are not maximally mixed are detected
    st = make_block([(2, 1.0, np.diag([0.5, 0.3, 0.2]))])
    for f in (degree_hs, degree_bures, degree_chernoff):
        assert f(st) > 1e-3


def test_spectral_summary_clips_negative_dust():
    rho = np.diag([1.0, 0.0, 0.0]) + 1e-15 * np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    sp = spectral_summary(make_block([(2, 1.0, rho)]))
    assert np.all(sp.eigenvalues[0] >= 0)
    assert sp.ranks().tolist() == [1]


def test_bures_never_exceeds_chernoff(rng):
    for _ in range(200):
        ns = sorted(rng.choice(7, size=int(rng.integers(1, 4)), replace=False).tolist())
        st = random_block_density(rng, ns, rank=int(rng.integers(1, 4)))
        assert degree_bures(st) <= degree_chernoff(st) + 1e-12


def test_su2_invariance(rng):
    for _ in range(30):
        st = random_block_density(rng, [0, 2, 3])
        img = transform(st, rng.uniform(0, 2 * np.pi, 3))
        for f in (degree_hs, degree_bures, degree_chernoff):
            assert f(img) == pytest.approx(f(st), abs=1e-9)


def test_chernoff_limit_at_zero():
    # rank-one blocks on manifolds 1 and 2 with large weight on 1: s -> 0 wins
    st = make_block([(1, 0.5, np.diag([1.0, 0])), (2, 0.5, np.diag([1.0, 0, 0]))])
    inf, s = chernoff_infimum(st)
    assert inf == pytest.approx(0.5)
    assert s == 0.0


def test_chernoff_interior_minimum():
    st = make_block([(0, 0.5, np.ones((1, 1))), (1, 0.5, np.diag([1.0, 0]))])
    inf, s = chernoff_infimum(st)
    assert 0 < s < 1
    assert 1 - inf == pytest.approx(CHERNOFF_MAX[0.5], abs=1e-12)


def test_distance_helpers():
    a, b = _pure(1), _sigma({1: 1.0})
    assert fidelity(a, a) == pytest.approx(1.0)
    assert fidelity(a, b) == pytest.approx(0.5)
    assert hs_distance(a, b) == pytest.approx(0.5)
    assert chernoff_overlap(a, b) == pytest.approx(0.5, abs=1e-9)
    assert fidelity(_pure(1), _pure(2)) == 0.0


@pytest.mark.parametrize("measure, closed", [("hsb", degree_hs), ("bb", degree_bures),
                                             ("cb", degree_chernoff)])
def test_closed_forms_match_numeric_optimum(rng, measure, closed):
    for _ in range(3):
        st = random_block_density(rng, [0, 1, 3], rank=2)
        _, value = sup_over_unpolarized(st, measure)
        assert closed(st) == pytest.approx(value, abs=1e-6)


def test_hs_staircase_values():
    assert max_value("hsb", 1.0) == pytest.approx(0.5)
    assert max_value("hsb", 1.5) == pytest.approx(0.5)       # below sqrt(3)
    assert max_value("hsb", 1.8) == pytest.approx(1.8**2 / 6)  # above sqrt(3)
    assert max_value("hsb", 0.9) == pytest.approx(0.81 / 2)   # f = 0: parabola
    mix = make_block([(0, 0.25, np.ones((1, 1))), (2, 0.75, np.diag([1.0, 0, 0]))])
    assert degree_hs(mix) == pytest.approx(0.375)


def test_bures_and_chernoff_curves():
    assert max_value("bb", 3.0) == pytest.approx(0.5)
    assert max_value("cb", 2.0) == pytest.approx(2 / 3)
    for x, v in CHERNOFF_MAX.items():
        assert max_value("cb", x) == pytest.approx(v, abs=1e-9)
    for x in (1.2, 1.5, 2.3, 4.2):
        c = int(np.ceil(x))
        assert max_value("cb", x) == pytest.approx((c - 1) / c, abs=1e-12)


def test_curves_non_decreasing():
    grid = nbar_grid(0, 5, 0.01)
    for m in MEASURES:
        vals = np.array([p.value for p in max_curve(m, grid)])
        assert np.all(np.diff(vals) >= -1e-12)
    bb = np.array([p.value for p in max_curve("bb", grid)])
    assert np.all(np.diff(bb) > 0)


def test_grid_and_csv():
    grid = nbar_grid(0, 5, 0.01)
    assert len(grid) == 501 and grid[100] == 1.0
    text = curve_to_csv(max_curve("hsb", [0.0, 1.0]))
    assert text == "nbar,measure,value\n0,hsb,0\n1,hsb,0.5\n"


@pytest.mark.parametrize("measure", MEASURES)
@pytest.mark.parametrize("nbar", [0.3, 1.0, 1.7, 2.5, 3.9])
def test_brute_force_never_beats_curve(measure, nbar):
    assert max_curve_verify(measure, nbar) <= max_value(measure, nbar) + 1e-6


@pytest.mark.parametrize("measure", ["bb", "cb"])
def test_brute_force_reaches_curve(measure):
    for nbar in (0.5, 2.5):
        assert max_curve_verify(measure, nbar) == pytest.approx(max_value(measure, nbar), abs=1e-6)


def test_hs_limit_gap_shrinks_with_cap():
    # the staircase plateau is only approached as weight escapes to large N
    gaps = [max_value("hsb", 1.5) - max_curve_verify("hsb", 1.5, max_heavy=m) for m in (10, 40, 160)]
    assert all(g > 0 for g in gaps)
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.01


def test_invalid_inputs():
    with pytest.raises(ValueError):
        max_value("hsb", -1.0)
    with pytest.raises(ValueError):
        max_value("nope", 1.0)
    with pytest.raises(ValueError):
        sup_over_unpolarized(_pure(1), "nope")
