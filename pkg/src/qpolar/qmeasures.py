"""SU(2) Q function and the Q-, distinguishability- and purity-based degrees."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import gammaln

from .channel import block_diagonalize, rescale_unbounded
from .degrees import MaxCurvePoint, _ceil
from .states import BlockDensity, TwoModeState, make_block, make_pure
from .su2 import min_overlap_search

__all__ = [
    "SphereGrid", "sphere_grid", "CoherentParams", "su2_coherent",
    "coherent_amplitudes", "q_function", "q_integral", "dispersion_q",
    "degree_q", "degree_d", "degree_p", "max_curve_q", "bloch_angles",
    "Q_MEASURES", "overlap_to_degree",
]

Q_MEASURES = ("pq", "pd", "pp")
OVERLAP_FLOOR = 1e-12


@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature on the unit sphere (flattened nodes)."""

    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray


def sphere_grid(cutoff: int) -> SphereGrid:
    """Gauss-Legendre in ``cos(theta)`` times a uniform rule in ``phi``.

    With ``2*cutoff + 2`` polar and ``4*cutoff + 2`` azimuthal nodes the
    rule integrates ``Q^2`` exactly for any state up to ``cutoff`` photons.
    """
    n_theta, n_phi = 2 * cutoff + 2, 4 * cutoff + 2
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    th, ph = np.meshgrid(np.arccos(x), phi, indexing="ij")
    w = np.outer(wx, np.full(n_phi, 2 * np.pi / n_phi))
    return SphereGrid(th.ravel(), ph.ravel(), w.ravel())


@dataclass(frozen=True)
class CoherentParams:
    n: int
    theta: float
    phi: float


def coherent_amplitudes(n: int, theta, phi) -> np.ndarray:
    """Amplitudes of ``|n; theta, phi>`` in the basis ``|k, n-k>``, shape ``(..., n+1)``.

    ``binom(n,k)^{1/2} cos(theta/2)^k sin(theta/2)^{n-k} e^{i k phi}``.
    """
    theta = np.asarray(theta, dtype=float)[..., None]
    phi = np.asarray(phi, dtype=float)[..., None]
    k = np.arange(n + 1)
    log_binom = 0.5 * (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    # 0**0 = 1 is what numpy gives, which is the right convention here
    return np.exp(log_binom) * c**k * s ** (n - k) * np.exp(1j * k * phi)


def su2_coherent(params: CoherentParams) -> TwoModeState:
    amps = coherent_amplitudes(params.n, params.theta, params.phi)
    return make_pure(((params.n, k), a) for k, a in enumerate(amps))


def bloch_angles(vec: np.ndarray) -> tuple[float, float]:
    """Angles ``(theta, phi)`` of the single-photon coherent state proportional to ``vec``."""
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    # index k counts H photons: v[1] ~ cos(theta/2) e^{i phi}, v[0] ~ sin(theta/2)
    theta = 2 * np.arctan2(abs(v[0]), abs(v[1]))
    phi = float(np.angle(v[1]) - np.angle(v[0])) if abs(v[0]) > 1e-15 and abs(v[1]) > 1e-15 else 0.0
    return float(theta), phi % (2 * np.pi)


def q_function(state, theta, phi):
    """``Q(Omega) = sum_N p_N (N+1)/(4 pi) <N;Omega|rho_N|N;Omega>``.

    Accepts scalar or array angles; only the block-diagonal part of the
    state enters.
    """
    bd = block_diagonalize(state)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    out = np.zeros(np.broadcast(theta, phi).shape)
    for b in bd.blocks:
        amp = coherent_amplitudes(b.n, theta, phi)
        val = np.einsum("...i,ij,...j->...", amp.conj(), b.rho, amp).real
        out = out + b.p * (b.n + 1) / (4 * np.pi) * val
    return float(out) if out.ndim == 0 else out


def q_integral(state, grid: SphereGrid | None = None, power: int = 1) -> float:
    """Integral of ``Q^power`` over the sphere with the exact product rule."""
    bd = block_diagonalize(state)
    grid = grid or sphere_grid(bd.cutoff)
    q = q_function(bd, grid.theta, grid.phi)
    return float(np.sum(grid.weights * q**power))


def dispersion_q(state) -> float:
    """``D_Q = 4 pi int Q^2 dOmega - 1`` (floored at 0)."""
    return max(4 * np.pi * q_integral(state, power=2) - 1.0, 0.0)


def degree_q(state) -> float:
    """``D_Q / (D_Q + 1)``."""
    return rescale_unbounded(dispersion_q(state))


def degree_d(state, normalization: str = "raw") -> float:
    """Distinguishability degree ``[1 - inf_U sum_N p_N Tr(rho_N U rho_N U^dag)]^{1/2}``.

    ``normalization="purity"`` divides every trace by ``Tr(rho_N^2)``, which
    makes the degree vanish on unpolarized states.
    """
    if normalization not in ("raw", "purity"):
        raise ValueError("normalization must be 'raw' or 'purity'")
    res = min_overlap_search(block_diagonalize(state), normalize=normalization == "purity")
    return overlap_to_degree(res.overlap)


def overlap_to_degree(overlap: float) -> float:
    """``sqrt(1 - overlap)``, with defects below roundoff set to zero.

    The square root would otherwise turn ``1e-16`` noise into ``1e-8``.
    """
    defect = 1.0 - overlap
    if defect <= OVERLAP_FLOOR:
        return 0.0
    return float(np.sqrt(min(defect, 1.0)))


def degree_p(state) -> float:
    """Purity degree ``sum_{N>=1} p_N ((N+1) Tr(rho_N^2) - 1) / N``; zero for the vacuum."""
    total = 0.0
    for b in block_diagonalize(state).blocks:
        if b.n == 0:
            continue
        purity = float(np.real(np.vdot(b.rho, b.rho)))
        total += b.p * ((b.n + 1) * purity - 1) / b.n
    return float(min(max(total, 0.0), 1.0))


def _coherent_mixture(nbar: float) -> BlockDensity:
    """Mixture of ``|n-1; 0>`` and ``|n; 0>`` (``n = ceil(nbar)``) with mean ``nbar``."""
    if nbar <= 1e-15:
        return make_block([(0, 1.0, np.ones((1, 1)))])
    n = _ceil(nbar)
    triples = []
    for m, p in ((n - 1, n - nbar), (n, 1 + nbar - n)):
        if p > 1e-15:
            rho = np.zeros((m + 1, m + 1))
            rho[m, m] = 1.0
            triples.append((m, p, rho))
    return make_block(triples, renormalize=True)


def max_curve_q(nbar_values: Iterable[float]) -> list[MaxCurvePoint]:
    """Maximal ``pq``, ``pd`` and ``pp`` versus mean photon number.

    ``pq`` is evaluated by quadrature on the mixture of adjacent coherent
    states.  Any unit of weight in the vacuum costs ``pd`` and ``pp``
    polarization, and the mean forces ``p_0 >= 1 - nbar``; blockwise-pure
    states reach the resulting bounds ``sqrt(min(nbar, 1))`` and
    ``min(nbar, 1)``.
    """
    out = []
    for x in nbar_values:
        x = float(x)
        out.append(MaxCurvePoint(x, degree_q(_coherent_mixture(x)), "pq"))
        out.append(MaxCurvePoint(x, float(np.sqrt(min(x, 1.0))), "pd"))
        out.append(MaxCurvePoint(x, float(min(x, 1.0)), "pp"))
    return out
