"""Linear polarization transformations ``exp(-ia Sz) exp(-ib Sy) exp(-ig Sz)``.

Angles are operator parameters.  Because Stokes operators carry a factor
of two relative to angular momentum, ``alpha`` and ``gamma`` have period
``2*pi`` and ``beta`` in ``[0, pi]`` covers every transformation once.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .states import Block, BlockDensity, TwoModeState
from .stokes import stokes_matrices

__all__ = [
    "EulerAngles", "rotation_matrix", "transform", "OverlapSearch",
    "min_overlap_search", "overlap_objective", "align", "canonical_angles",
]

TWO_PI = 2.0 * np.pi

# Multi-start settings: seed grid per axis, refined seeds, local-search limits.
GRID_POINTS = 8
REFINE_SEEDS = 12
FATOL = 1e-10
XATOL = 1e-9
MAXFEV = 2000
TIE_TOL = 1e-9


def grid_points(nmax: int) -> int:
    """Seed-grid points per axis for manifolds up to ``nmax``.

    The objective holds frequencies up to ``2 nmax`` in each angle and its
    minima can sit in narrow valleys, so every period gets about six
    samples; coarser grids were seen to miss the global basin.
    """
    return max(16, 12 * nmax)


class EulerAngles(NamedTuple):
    alpha: float
    beta: float
    gamma: float


def canonical_angles(angles) -> EulerAngles:
    """Map to ``[0, 2pi) x [0, pi] x [0, 2pi)`` without changing the operator.

    Uses ``U(a, -b, g) = U(a + pi/2, b, g - pi/2)`` together with the
    ``2pi`` periodicity of every factor.
    """
    a, b, g = (float(x) for x in angles)
    b = _wrap(b)
    if b > np.pi:
        b = TWO_PI - b
        a += np.pi / 2
        g -= np.pi / 2
    return EulerAngles(_wrap(a), b, _wrap(g))


def _wrap(x: float) -> float:
    # tiny negative inputs round up to exactly 2*pi under %
    y = x % TWO_PI
    return 0.0 if y >= TWO_PI else y


@lru_cache(maxsize=None)
def _sy_eigen(n: int):
    vals, vecs = np.linalg.eigh(stokes_matrices(n).sy)
    vecs.setflags(write=False)
    return np.round(vals).astype(float), vecs


def _sz_diag(n: int) -> np.ndarray:
    return 2.0 * np.arange(n + 1) - n


def _ry(n: int, beta: float) -> np.ndarray:
    vals, vecs = _sy_eigen(n)
    return (vecs * np.exp(-1j * beta * vals)) @ vecs.conj().T


def rotation_matrix(n: int, angles) -> np.ndarray:
    """Unitary of the transformation with Euler ``angles`` on manifold ``n``."""
    a, b, g = angles
    m = _sz_diag(n)
    return np.exp(-1j * a * m)[:, None] * _ry(n, b) * np.exp(-1j * g * m)[None, :]


def transform(state, angles):
    """Apply the transformation to each manifold; weights are untouched."""
    if isinstance(state, TwoModeState):
        amps = {}
        for n in state.manifolds:
            vec = rotation_matrix(n, angles) @ state.vector(n)
            for k, c in enumerate(vec):
                amps[(n, k)] = c
        return TwoModeState(state.cutoff, amps)
    blocks = []
    for blk in state.blocks:
        u = rotation_matrix(blk.n, angles)
        blocks.append(Block(blk.n, blk.p, u @ blk.rho @ u.conj().T))
    return BlockDensity(state.cutoff, tuple(blocks))


def overlap_objective(state: BlockDensity, normalize: bool = False):
    """Return ``f(angles) = sum_N p_N Tr(rho_N U rho_N U^dag)``.

    With ``normalize`` each trace is divided by the block purity.  Blocks
    in manifold 0 contribute a constant.
    """
    const = 0.0
    terms = []
    for blk in state.blocks:
        purity = float(np.real(np.vdot(blk.rho, blk.rho)))
        weight = blk.p / purity if normalize else blk.p
        if blk.n == 0:
            const += weight * purity
            continue
        m = _sz_diag(blk.n)
        diff = m[:, None] - m[None, :]
        terms.append((blk.n, weight, np.asarray(blk.rho), diff))

    def f(angles) -> float:
        a, b, g = angles
        total = const
        for n, w, rho, diff in terms:
            r = _ry(n, b)
            left = rho * np.exp(1j * a * diff)     # D_a^dag rho D_a
            right = rho * np.exp(-1j * g * diff)   # D_g rho D_g^dag
            total += w * np.real(np.sum(left.T * (r @ right @ r.conj().T)))
        return float(total)

    def on_grid(alphas, betas, gammas) -> np.ndarray:
        """Objective on the product grid, shape ``(len(alphas), len(betas), len(gammas))``."""
        total = np.full((len(alphas), len(betas), len(gammas)), const)
        for n, w, rho, diff in terms:
            r = np.stack([_ry(n, b) for b in betas])
            left = rho[None] * np.exp(1j * np.asarray(alphas)[:, None, None] * diff)
            right = rho[None] * np.exp(-1j * np.asarray(gammas)[:, None, None] * diff)
            mid = np.einsum("bij,gjk,blk->bgil", r, right, r.conj())
            total += w * np.real(np.einsum("aji,bgij->abg", left, mid))
        return total

    f.on_grid = on_grid
    # Sz differences are even, so shifting alpha or gamma by pi is a symmetry
    f.period = np.pi
    return f


@dataclass(frozen=True)
class OverlapSearch:
    """Result of a multi-start minimization over Euler angles."""

    angles: EulerAngles
    overlap: float
    evaluations: int


def _axes(points: int, period: float = TWO_PI):
    alphas = np.arange(points) * period / points
    return alphas, np.linspace(0.0, np.pi, points), alphas


def _local_minima(vals: np.ndarray) -> np.ndarray:
    """Flat indices of discrete local minima, best first (alpha and gamma periodic)."""
    mask = np.ones(vals.shape, dtype=bool)
    for axis in (0, 2):
        for shift in (1, -1):
            mask &= vals <= np.roll(vals, shift, axis=axis)
    padded = np.pad(vals, ((0, 0), (1, 1), (0, 0)), mode="edge")
    mask &= vals <= padded[:, :-2, :]
    mask &= vals <= padded[:, 2:, :]
    idx = np.flatnonzero(mask)
    return idx[np.argsort(vals.ravel()[idx], kind="stable")]


def _distinct(vals: np.ndarray, order: np.ndarray, count: int) -> list[int]:
    """First ``count`` entries of ``order`` with pairwise distinct values.

    Symmetry copies of one basin (and the whole alpha + gamma line at
    beta = 0 or pi) share a value; refining them more than once is wasted.
    """
    chosen: list[int] = []
    seen: list[float] = []
    flat = vals.ravel()
    for idx in order:
        v = flat[idx]
        if all(abs(v - w) > TIE_TOL for w in seen):
            chosen.append(int(idx))
            seen.append(v)
            if len(chosen) == count:
                break
    return chosen


def _multistart(f, points: int = GRID_POINTS) -> OverlapSearch:
    period = getattr(f, "period", TWO_PI)
    axes = _axes(points, period)
    if hasattr(f, "on_grid"):
        vals = f.on_grid(*axes)
    else:
        vals = np.array([f(p) for p in itertools.product(*axes)]).reshape((points,) * 3)
    evals = vals.size
    step = np.array([period / points, np.pi / (points - 1), period / points])
    found = []
    for flat in _distinct(vals, _local_minima(vals), REFINE_SEEDS):
        i, j, k = np.unravel_index(flat, vals.shape)
        seed = np.array([axes[0][i], axes[1][j], axes[2][k]])
        # the default simplex is tiny for zero coordinates; span one grid cell
        simplex = np.vstack([seed, seed + np.diag(step)])
        res = minimize(f, seed, method="Nelder-Mead",
                       options=dict(xatol=XATOL, fatol=FATOL, maxfev=MAXFEV,
                                    initial_simplex=simplex))
        evals += res.nfev
        found.append((float(res.fun), canonical_angles(res.x)))
        found.append((float(vals[i, j, k]), canonical_angles(seed)))
    best = min(v for v, _ in found)
    ties = sorted(a for v, a in found if v <= best + TIE_TOL)
    angles = ties[0]
    return OverlapSearch(angles, f(angles), evals)


def min_overlap_search(state: BlockDensity, normalize: bool = False) -> OverlapSearch:
    """Minimize the probability-averaged self-overlap over all transformations.

    Deterministic: the objective is tabulated on a product grid fine
    enough to resolve its highest angular frequency, the best discrete
    local minima are refined with Nelder-Mead, and among minima within
    ``1e-9`` of the best the lexicographically smallest canonical angles
    win.
    """
    f = overlap_objective(state, normalize)
    result = _multistart(f, grid_points(max(state.manifolds)))
    upper = sum(b.p * (1.0 if normalize else float(np.real(np.vdot(b.rho, b.rho))))
                for b in state.blocks)
    overlap = min(max(result.overlap, 0.0), upper)
    return OverlapSearch(result.angles, overlap, result.evaluations)


def align(source: TwoModeState, target: TwoModeState) -> OverlapSearch:
    """Find angles maximizing ``sum_N |<target_N| U |source_N>|^2``.

    The returned ``overlap`` field holds the infidelity ``1 - sum_N |.|^2``
    (zero when ``U source`` equals ``target`` up to per-manifold phases).
    Both states must populate the same manifolds with the same weights.
    """
    pairs = [(n, source.vector(n), target.vector(n)) for n in source.manifolds]

    def f(angles) -> float:
        fid = sum(abs(np.vdot(t, rotation_matrix(n, angles) @ s)) ** 2 for n, s, t in pairs)
        return float(1.0 - fid)

    return _multistart(f)
