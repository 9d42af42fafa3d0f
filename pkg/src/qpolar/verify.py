"""Seeded self-checks grouped into suites.

Every check compares an implementation path against an independent one
(closed form vs. numeric definition, algebra vs. matrix products) and
reports the worst deviation seen.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable

import numpy as np

from . import degrees, qmeasures, stokes, su2, unpolarized
from .channel import block_diagonalize
from .states import (
    make_block, make_pure, pure_to_block, random_block_density, random_pure_state,
    unpolarized_state, UnpolarizedSpec,
)

__all__ = ["CheckResult", "SUITES", "run_suite", "format_results"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    error: float
    tolerance: float


def _check(suite, name, error, tol) -> CheckResult:
    error = float(error)
    return CheckResult(suite, name, bool(np.isfinite(error) and error <= tol), error, tol)


def _random_angles(rng) -> su2.EulerAngles:
    return su2.EulerAngles(*rng.uniform(0, 2 * np.pi, 3))


def _random_manifolds(rng, cutoff: int = 6) -> list[int]:
    k = int(rng.integers(1, 4))
    return sorted(rng.choice(cutoff + 1, size=k, replace=False).tolist())


def _random_unpolarized(rng, cutoff: int = 6):
    ns = _random_manifolds(rng, cutoff)
    w = rng.dirichlet(np.ones(len(ns)))
    return unpolarized_state(UnpolarizedSpec(cutoff, dict(zip(ns, w))))


def suite_stokes(rng, samples: int) -> list[CheckResult]:
    s = "stokes"
    out = [
        _check(s, "commutators n<=12", max(stokes.commutator_check(n) for n in range(13)), 1e-10),
        _check(s, "casimir n<=12", max(stokes.casimir_check(n) for n in range(13)), 1e-10),
    ]
    worst = 0.0
    for _ in range(samples):
        st = random_pure_state(rng, _random_manifolds(rng))
        lhs, rhs = stokes.uncertainty_check(st)
        worst = max(worst, rhs - lhs)
    out.append(_check(s, "uncertainty relations", max(worst, 0.0), 1e-10))
    return out


def suite_su2(rng, samples: int) -> list[CheckResult]:
    s = "su2"
    unit = 0.0
    for n in range(9):
        u = su2.rotation_matrix(n, _random_angles(rng))
        unit = max(unit, np.max(np.abs(u @ u.conj().T - np.eye(n + 1))))
    canon = 0.0
    for _ in range(samples):
        ang = rng.uniform(-7, 7, 3)
        n = int(rng.integers(1, 6))
        diff = su2.rotation_matrix(n, ang) - su2.rotation_matrix(n, su2.canonical_angles(ang))
        canon = max(canon, np.max(np.abs(diff)))
    inv = 0.0
    for _ in range(samples):
        st = random_pure_state(rng, _random_manifolds(rng))
        img = su2.transform(st, _random_angles(rng))
        inv = max(inv, abs(stokes.moments(st).length - stokes.moments(img).length),
                  abs(np.sum(stokes.moments(st).var) - np.sum(stokes.moments(img).var)))
    s11 = pure_to_block(make_pure({(2, 1): 1.0}))
    return [
        _check(s, "rotation unitarity", unit, 1e-12),
        _check(s, "canonical angles", canon, 1e-10),
        _check(s, "Stokes length and variance sum invariance", inv, 1e-9),
        _check(s, "|1,1> minimal overlap", su2.min_overlap_search(s11).overlap, 1e-9),
    ]


def suite_channel(rng, samples: int) -> list[CheckResult]:
    s = "channel"
    mom = deg = 0.0
    for _ in range(samples):
        st = random_pure_state(rng, _random_manifolds(rng))
        bd = block_diagonalize(st)
        a, b = stokes.moments(st), stokes.moments(bd)
        mom = max(mom, np.max(np.abs(a.vec - b.vec)), np.max(np.abs(a.var - b.var)))
        for f in (degrees.degree_hs, degrees.degree_bures, degrees.degree_chernoff,
                  qmeasures.degree_q, qmeasures.degree_p):
            deg = max(deg, abs(f(st) - f(bd)))
    return [
        _check(s, "Stokes moments preserved", mom, 1e-12),
        _check(s, "degrees of state and channel output agree", deg, 0.0),
    ]


def suite_unpolarized(rng, samples: int) -> list[CheckResult]:
    s = "unpolarized"
    worst_stokes = worst_sum = 0.0
    for _ in range(samples):
        n = int(rng.choice([2, 3, 5, 6]))
        half = rng.normal(size=n // 2 + 1) + 1j * rng.normal(size=n // 2 + 1)
        if n % 2:
            half[-1] = 0
        st = unpolarized.symmetric_family(n, half, sign=int(rng.choice([1, -1])),
                                          middle_branch=int(rng.integers(2)))
        cert = unpolarized.is_stokes_unpolarized(st)
        worst_stokes = max(worst_stokes, abs(cert.sx), abs(cert.sy), abs(cert.sz))
        worst_sum = max(worst_sum, abs(sum(cert.variances) - n * (n + 2)))
    worst3 = var3 = 0.0
    for _ in range(samples):
        a0, a2 = unpolarized.sample_sail_point(rng)
        for st in unpolarized.three_photon_solve(a0, a2, rng.uniform(0, 2 * np.pi)):
            cert = unpolarized.is_stokes_unpolarized(st)
            worst3 = max(worst3, abs(cert.sx), abs(cert.sy), abs(cert.sz))
            var3 = max(var3, np.max(np.abs(np.array(cert.variances)
                                           - unpolarized.three_photon_variances(st))))
    vert = all(unpolarized.sail_region(*v).status == "border" for v in unpolarized.SAIL_VERTICES)
    return [
        _check(s, "symmetric family certified", worst_stokes, 1e-10),
        _check(s, "variance sum N(N+2)", worst_sum, 1e-9),
        _check(s, "three-photon solver certified", worst3, 1e-10),
        _check(s, "three-photon variance closed form", var3, 1e-10),
        _check(s, "sail vertices on border", 0.0 if vert else 1.0, 0.0),
    ]


def suite_degrees(rng, samples: int) -> list[CheckResult]:
    s = "degrees"
    pure = 0.0
    for n in range(11):
        st = make_pure({(n, int(rng.integers(n + 1))): 1.0})
        pure = max(pure, abs(degrees.degree_hs(st) - n / (n + 1)),
                   abs(degrees.degree_chernoff(st) - n / (n + 1)),
                   abs(degrees.degree_bures(st) - (1 - (n + 1) ** -0.5)))
    order = zero = inv = 0.0
    for _ in range(samples):
        st = random_block_density(rng, _random_manifolds(rng))
        order = max(order, degrees.degree_bures(st) - degrees.degree_chernoff(st))
        img = su2.transform(st, _random_angles(rng))
        for f in (degrees.degree_hs, degrees.degree_bures, degrees.degree_chernoff):
            inv = max(inv, abs(f(st) - f(img)))
        un = _random_unpolarized(rng)
        zero = max(zero, degrees.degree_hs(un), degrees.degree_bures(un),
                   degrees.degree_chernoff(un))
    oracle = 0.0
    for _ in range(min(samples, 5)):
        st = random_block_density(rng, _random_manifolds(rng, 4), rank=2)
        for m, f in (("hsb", degrees.degree_hs), ("bb", degrees.degree_bures),
                     ("cb", degrees.degree_chernoff)):
            oracle = max(oracle, abs(f(st) - degrees.sup_over_unpolarized(st, m)[1]))
    curve = 0.0
    for x in (0.5, 1.5, 2.0, 3.3):
        for m in ("hsb", "bb"):
            curve = max(curve, degrees.max_curve_verify(m, x) - degrees.max_value(m, x))
    return [
        _check(s, "pure N-photon closed forms", pure, 1e-9),
        _check(s, "Bures below Chernoff", max(order, 0.0), 1e-12),
        _check(s, "SU(2) invariance", inv, 1e-8),
        _check(s, "zero on unpolarized states", zero, 1e-9),
        _check(s, "closed forms vs numeric optimum", oracle, 1e-6),
        _check(s, "no state beats the maximal curves", max(curve, 0.0), 1e-6),
    ]


def _dispersion_psi1(n, m):
    return 0.25 * ((n + 1) ** 2 / (2 * n + 1) + (m + 1) ** 2 / (2 * m + 1)
                   + 2 * (n + 1) * (m + 1) / (n + m + 1)) - 1


def _dispersion_psi2(n, m):
    return 0.25 * ((n + 1) ** 2 / (2 * n + 1) + (m + 1) ** 2 / (2 * m + 1)
                   + 2 * factorial(n + 1) * factorial(m + 1) / factorial(n + m + 1)) - 1


def suite_qmeasures(rng, samples: int) -> list[CheckResult]:
    s = "qmeasures"
    norm = 0.0
    for _ in range(samples):
        st = random_block_density(rng, _random_manifolds(rng))
        norm = max(norm, abs(qmeasures.q_integral(st) - 1))
    coh = 0.0
    for n in range(9):
        th, ph = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        st = qmeasures.su2_coherent(qmeasures.CoherentParams(n, th, ph))
        coh = max(coh, abs(qmeasures.degree_q(st) - (n / (n + 1)) ** 2))
    psi = 0.0
    for n, m in ((1, 2), (2, 3), (3, 5)):
        p1 = make_pure({(n, n): 1.0, (m, m): 1.0})
        p2 = make_pure({(n, n): 1.0, (m, 0): 1.0})
        psi = max(psi, abs(qmeasures.dispersion_q(p1) - _dispersion_psi1(n, m)),
                  abs(qmeasures.dispersion_q(p2) - _dispersion_psi2(n, m)))
    odd = 0.0
    for n in (1, 3, 5):
        for _ in range(max(samples // 10, 1)):
            odd = max(odd, 1 - qmeasures.degree_d(random_pure_state(rng, [n])))
    zero = 0.0
    for _ in range(max(samples // 10, 1)):
        un = _random_unpolarized(rng)
        zero = max(zero, qmeasures.degree_q(un), qmeasures.degree_p(un),
                   qmeasures.degree_d(un, "purity"))
    sigma = 0.0
    for n in range(1, 5):
        un = unpolarized_state(UnpolarizedSpec.from_weights({n: 1.0}))
        sigma = max(sigma, abs(qmeasures.degree_d(un) - np.sqrt(n / (n + 1))))
    mix = make_block([(2, 0.5, np.eye(3) / 3), (3, 0.5, np.diag([1.0, 0, 0, 0]))])
    return [
        _check(s, "Q normalization", norm, 1e-10),
        _check(s, "coherent-state P_Q", coh, 1e-8),
        _check(s, "two-component dispersion closed forms", psi, 1e-8),
        _check(s, "odd-photon P_d equals one", odd, 1e-6),
        _check(s, "zero on unpolarized states", zero, 1e-9),
        _check(s, "raw P_d of single-manifold unpolarized states", sigma, 1e-8),
        _check(s, "purity degree of a half mixture", abs(qmeasures.degree_p(mix) - 0.5), 1e-12),
    ]


SUITES: dict[str, Callable] = {
    "stokes": suite_stokes,
    "su2": suite_su2,
    "channel": suite_channel,
    "unpolarized": suite_unpolarized,
    "degrees": suite_degrees,
    "qmeasures": suite_qmeasures,
}


def run_suite(name: str, seed: int = 0, samples: int = 20) -> list[CheckResult]:
    """Run one suite (or ``"all"``) with a fresh generator seeded by ``seed``."""
    if name == "all":
        return [r for key in SUITES for r in run_suite(key, seed, samples)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](np.random.default_rng(seed), samples)


def format_results(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        lines.append(f"{tag} {r.suite}: {r.name} (error {r.error:.3e}, tol {r.tolerance:.0e})")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
