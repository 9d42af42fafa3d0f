"""Stokes operators restricted to excitation manifolds."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .states import BlockDensity, TwoModeState

__all__ = [
    "StokesMatrices", "StokesMoments", "stokes_matrices", "moments",
    "degree_stokes", "casimir_check", "commutator_check", "uncertainty_check",
]


class StokesMatrices(NamedTuple):
    s0: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


@lru_cache(maxsize=None)
def stokes_matrices(n: int) -> StokesMatrices:
    """Matrices of S0, Sx, Sy, Sz on manifold ``n`` in the basis ``|k, n-k>``.

    Built from the raising operator ``a_H^dag a_V``, whose only nonzero
    entries are ``<k+1| . |k> = sqrt((k+1)(n-k))``.  The returned arrays
    are cached and read-only.
    """
    if n < 0:
        raise ValueError("manifold must be non-negative")
    k = np.arange(n)
    raise_ = np.zeros((n + 1, n + 1), dtype=complex)
    raise_[k + 1, k] = np.sqrt((k + 1) * (n - k))
    lower = raise_.T.copy()
    mats = StokesMatrices(
        s0=n * np.eye(n + 1, dtype=complex),
        sx=raise_ + lower,
        sy=1j * (lower - raise_),
        sz=np.diag(2.0 * np.arange(n + 1) - n).astype(complex),
    )
    for m in mats:
        m.setflags(write=False)
    return mats


@dataclass(frozen=True)
class StokesMoments:
    """First and second Stokes moments of a state, in photon-number units."""

    s0: float
    vec: np.ndarray
    var: np.ndarray

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.vec))


def _blocks(state):
    """Yield ``(n, p, rho)`` for either state kind, skipping cross-manifold terms."""
    if isinstance(state, TwoModeState):
        for n in state.manifolds:
            v = state.vector(n)
            yield n, 1.0, np.outer(v, v.conj())
    else:
        for b in state.blocks:
            yield b.n, b.p, b.rho


def moments(state: TwoModeState | BlockDensity) -> StokesMoments:
    """Mean Stokes vector and variances.

    Coherences between manifolds never enter, since every Stokes operator
    is block diagonal.  Variances use the full first and second moments of
    the whole state.
    """
    s0 = 0.0
    first = np.zeros(3)
    second = np.zeros(3)
    for n, p, rho in _blocks(state):
        m = stokes_matrices(n)
        s0 += p * n * np.trace(rho).real
        for i, op in enumerate((m.sx, m.sy, m.sz)):
            first[i] += p * np.trace(rho @ op).real
            second[i] += p * np.trace(rho @ op @ op).real
    return StokesMoments(s0=float(s0), vec=first, var=second - first**2)


def degree_stokes(state: TwoModeState | BlockDensity) -> float:
    """|<S>| / <S0>, taken as 0 for the two-mode vacuum."""
    m = moments(state)
    if m.s0 <= 0:
        return 0.0
    return min(m.length / m.s0, 1.0)


def casimir_check(n: int) -> float:
    """Max elementwise deviation of Sx^2 + Sy^2 + Sz^2 from n(n+2) I."""
    m = stokes_matrices(n)
    total = m.sx @ m.sx + m.sy @ m.sy + m.sz @ m.sz
    return float(np.max(np.abs(total - n * (n + 2) * np.eye(n + 1))))


def commutator_check(n: int) -> float:
    """Max deviation from [Sx,Sy] = 2iSz and its cyclic permutations, and [S0, S] = 0."""
    m = stokes_matrices(n)

    def comm(a, b):
        return a @ b - b @ a

    devs = [
        comm(m.sx, m.sy) - 2j * m.sz,
        comm(m.sy, m.sz) - 2j * m.sx,
        comm(m.sz, m.sx) - 2j * m.sy,
        comm(m.s0, m.sx), comm(m.s0, m.sy), comm(m.s0, m.sz),
    ]
    return float(max(np.max(np.abs(d)) for d in devs))


def uncertainty_check(state) -> tuple[float, float]:
    """Return ``(sum of variances, 2 <S0>)``; the first should not be below the second."""
    m = moments(state)
    return float(np.sum(m.var)), 2.0 * m.s0
