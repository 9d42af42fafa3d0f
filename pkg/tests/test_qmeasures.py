from math import factorial

import numpy as np
import pytest

from qpolar.channel import block_diagonalize
from qpolar.qmeasures import (
    CoherentParams, bloch_angles, coherent_amplitudes, degree_d, degree_p, degree_q,
    dispersion_q, max_curve_q, q_function, q_integral, sphere_grid, su2_coherent,
)
from qpolar.states import (
    UnpolarizedSpec, make_block, make_pure, pure_to_block, random_block_density,
    random_pure_state, unpolarized_state,
)
from qpolar.su2 import min_overlap_search, transform


def _sigma(weights):
    return unpolarized_state(UnpolarizedSpec.from_weights(weights))


def test_sphere_grid_weights():
    for c in range(7):
        g = sphere_grid(c)
        assert g.weights.sum() == pytest.approx(4 * np.pi, abs=1e-10)
        assert np.sum(g.weights / (4 * np.pi)) == pytest.approx(1.0, abs=1e-12)


def test_coherent_amplitudes():
    assert np.allclose(su2_coherent(CoherentParams(1, 0.0, 0.0)).vector(1), [0, 1])
    assert np.allclose(su2_coherent(CoherentParams(2, np.pi, 0.0)).vector(2), [1, 0, 0], atol=1e-15)
    amps = su2_coherent(CoherentParams(3, np.pi / 2, 0.0)).vector(3)
    assert np.allclose(amps, np.sqrt([1, 3, 3, 1]) / np.sqrt(8))


def test_q_function_examples():
    th, ph = np.linspace(0.1, 3.0, 7), np.linspace(0, 6, 7)
    assert np.allclose(q_function(_sigma({0: 0.3, 2: 0.7}), th, ph), 1 / (4 * np.pi))
    n = 3
    expected = (n + 1) / (4 * np.pi) * np.cos(th / 2) ** (2 * n)
    assert np.allclose(q_function(make_pure({(n, n): 1.0}), th, ph), expected)
    assert q_function(make_pure({(0, 0): 1.0}), 0.4, 1.0) == pytest.approx(1 / (4 * np.pi))


def test_q_blind_to_coherences():
    st = make_pure({(1, 0): 1.0, (2, 2): 1.0})
    th, ph = np.linspace(0, 3, 9), np.linspace(0, 6, 9)
    assert np.array_equal(q_function(st, th, ph), q_function(block_diagonalize(st), th, ph))
    assert degree_q(st) == degree_q(block_diagonalize(st))


def test_q_normalization_and_marginals(rng):
    for _ in range(50):
        st = random_block_density(rng, sorted(rng.choice(7, size=3, replace=False).tolist()))
        assert q_integral(st) == pytest.approx(1.0, abs=1e-10)
        for b in st.blocks:
            single = make_block([(b.n, 1.0, b.rho)], cutoff=st.cutoff)
            assert b.p * q_integral(single, sphere_grid(st.cutoff)) == pytest.approx(b.p, abs=1e-10)


def test_quadrature_matches_brute_force_integral():
    st = make_pure({(2, 0): 1.0, (3, 1): 0.5j, (3, 3): 0.3})
    th = np.linspace(0, np.pi, 801)
    ph = np.linspace(0, 2 * np.pi, 801)
    T, P = np.meshgrid(th, ph, indexing="ij")
    q2 = q_function(st, T, P) ** 2 * np.sin(T)
    brute = np.trapezoid(np.trapezoid(q2, ph, axis=1), th)
    assert 4 * np.pi * brute - 1 == pytest.approx(dispersion_q(st), abs=1e-5)


@pytest.mark.parametrize("n", range(9))
def test_coherent_state_degree(rng, n):
    for _ in range(20):
        st = su2_coherent(CoherentParams(n, rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)))
        assert degree_q(st) == pytest.approx((n / (n + 1)) ** 2, abs=1e-8)


def _d_psi1(n, m):
    return 0.25 * ((n + 1) ** 2 / (2 * n + 1) + (m + 1) ** 2 / (2 * m + 1)
                   + 2 * (n + 1) * (m + 1) / (n + m + 1)) - 1


def _d_psi2(n, m):
    return 0.25 * ((n + 1) ** 2 / (2 * n + 1) + (m + 1) ** 2 / (2 * m + 1)
                   + 2 * factorial(n + 1) * factorial(m + 1) / factorial(n + m + 1)) - 1


@pytest.mark.parametrize("n, m", [(1, 2), (2, 3), (3, 5)])
def test_two_component_dispersions(n, m):
    psi1 = make_pure({(n, n): 1.0, (m, m): 1.0})
    psi2 = make_pure({(n, n): 1.0, (m, 0): 1.0})
    assert dispersion_q(psi1) == pytest.approx(_d_psi1(n, m), abs=1e-8)
    assert dispersion_q(psi2) == pytest.approx(_d_psi2(n, m), abs=1e-8)


def test_north_pole_concentration_is_more_polarized():
    psi1 = make_pure({(4, 4): 1.0, (5, 5): 1.0})
    psi2 = make_pure({(4, 4): 1.0, (5, 0): 1.0})
    assert degree_q(psi1) > degree_q(psi2)


def test_q_covariance_under_rotation(rng):
    # the rotation on the sphere is read off from single-photon coherent states
    st = random_pure_state(rng, [1, 2, 3])
    for _ in range(5):
        ang = rng.uniform(0, 2 * np.pi, 3)
        img = transform(st, ang)
        th, ph = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        moved = transform(su2_coherent(CoherentParams(1, th, ph)), ang)
        th2, ph2 = bloch_angles(moved.vector(1))
        assert q_function(img, th2, ph2) == pytest.approx(q_function(st, th, ph), abs=1e-9)
        assert degree_q(img) == pytest.approx(degree_q(st), abs=1e-8)


def test_unpolarized_q_degrees_vanish():
    st = _sigma({1: 0.5, 4: 0.5})
    assert dispersion_q(st) == pytest.approx(0.0, abs=1e-12)
    assert degree_q(st) == pytest.approx(0.0, abs=1e-12)
    assert degree_p(st) == pytest.approx(0.0, abs=1e-12)


def test_degree_d_examples():
    s11 = make_pure({(2, 1): 1.0})
    assert degree_d(s11) == pytest.approx(1.0, abs=1e-9)
    assert degree_d(s11, "purity") == pytest.approx(1.0, abs=1e-9)
    for n in (1, 2, 3, 5):
        assert degree_d(_sigma({n: 1.0})) == pytest.approx(np.sqrt(n / (n + 1)), abs=1e-8)
        assert degree_d(_sigma({n: 1.0}), "purity") == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        degree_d(s11, "bogus")


def test_degree_d_matches_pure_state_formula(rng):
    st = random_pure_state(rng, [1, 2])
    res = min_overlap_search(pure_to_block(st))
    assert degree_d(st) == pytest.approx(np.sqrt(1 - res.overlap), abs=1e-8)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_odd_photon_states_fully_distinguishable(rng, n):
    for _ in range(10):
        assert degree_d(random_pure_state(rng, [n])) == pytest.approx(1.0, abs=1e-6)


def test_degree_p_examples():
    for n in range(1, 6):
        assert degree_p(make_pure({(n, 1): 1.0})) == pytest.approx(1.0)
    assert degree_p(make_pure({(0, 0): 1.0})) == 0.0
    mix = make_block([(2, 0.5, np.eye(3) / 3), (3, 0.5, np.diag([1.0, 0, 0, 0]))])
    assert degree_p(mix) == pytest.approx(0.5)


def test_max_curve_q():
    pts = {(p.measure, p.nbar): p.value for p in max_curve_q([0.0, 1.0, 1.5, 2.0, 3.0])}
    assert pts[("pq", 0.0)] == 0.0
    for n in (1, 2, 3):
        assert pts[("pq", float(n))] == pytest.approx((n / (n + 1)) ** 2, abs=1e-12)
    # 0.5|1;0> + 0.5|2;0>: 4pi int Q^2 = 1/3 + 3/4 + 9/20, so D = 8/15 and P = 8/23
    assert pts[("pq", 1.5)] == pytest.approx(8 / 23, abs=1e-12)
    assert pts[("pd", 1.5)] == 1.0 and pts[("pp", 1.5)] == 1.0


def test_max_pq_beats_random_states(rng):
    best = max_curve_q([1.5])[0].value
    for _ in range(200):
        p2 = rng.uniform(0, 0.75)
        p1 = 1.5 - 2 * p2
        p0 = 1 - p1 - p2
        if p1 < 0 or p0 < 0:
            continue
        w = {0: p0, 1: p1, 2: p2}
        st = random_block_density(rng, [0, 1, 2], rank=1)
        blocks = [(b.n, w[b.n], b.rho) for b in st.blocks if w[b.n] > 0]
        assert degree_q(make_block(blocks, renormalize=True)) <= best + 1e-12


def test_even_photon_probe(rng):
    # no theorem covers even N; only report what the optimizer finds
    worst = 0.0
    for n in (2, 4):
        for _ in range(10):
            overlap = min_overlap_search(pure_to_block(random_pure_state(rng, [n]))).overlap
            assert 0.0 <= overlap <= 1.0
            worst = max(worst, overlap)
    print(f"largest even-N minimal overlap found: {worst:.3e}")
