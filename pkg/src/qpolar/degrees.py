"""Distance-based degrees of polarization of block-diagonalized states.

For a block-diagonal state the nearest unpolarized state commutes with
it, so each degree reduces to a function of the manifold weights ``p_N``
and the block spectra ``lambda_{N,n}`` through the power sums
``xi_N(s) = sum_n lambda_{N,n}^s``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .channel import block_diagonalize
from .states import BlockDensity, UnpolarizedSpec, unpolarized_state

__all__ = [
    "SpectralSummary", "spectral_summary", "degree_hs", "degree_bures",
    "degree_chernoff", "chernoff_infimum", "fidelity", "hs_distance",
    "chernoff_overlap", "sup_over_unpolarized", "MaxCurvePoint",
    "max_value", "max_curve", "max_curve_verify", "nbar_grid", "curve_to_csv",
    "MEASURES",
]

EIG_ZERO = 1e-12
S_MIN = 1e-4
S_STEP = 1e-3
GOLDEN_TOL = 1e-10
MEASURES = ("hsb", "bb", "cb")


@dataclass(frozen=True)
class SpectralSummary:
    """Per-manifold weights and block eigenvalues (descending, clipped to [0, 1])."""

    manifolds: tuple[int, ...]
    weights: np.ndarray
    eigenvalues: tuple[np.ndarray, ...]

    def xi(self, s: float) -> np.ndarray:
        """``sum_n lambda^s`` per manifold, with ``0^s = 0`` for ``s > 0``."""
        out = []
        for lam in self.eigenvalues:
            pos = lam[lam > 0]
            out.append(float(np.exp(np.logaddexp.reduce(s * np.log(pos)))) if pos.size else 0.0)
        return np.array(out)

    def ranks(self) -> np.ndarray:
        return np.array([np.count_nonzero(lam) for lam in self.eigenvalues])


def spectral_summary(state) -> SpectralSummary:
    bd = block_diagonalize(state)
    eigs = []
    for b in bd.blocks:
        lam = np.clip(np.linalg.eigvalsh(b.rho)[::-1], 0.0, 1.0)
        lam[lam < EIG_ZERO] = 0.0
        eigs.append(lam)
    return SpectralSummary(
        manifolds=bd.manifolds,
        weights=np.array([b.p for b in bd.blocks]),
        eigenvalues=tuple(eigs),
    )


def degree_hs(state) -> float:
    """Hilbert-Schmidt degree ``sum_N p_N^2 (xi_N(2) - 1/(N+1))``."""
    return _hs_from(spectral_summary(state))


def _hs_from(sp: SpectralSummary) -> float:
    dims = np.array(sp.manifolds) + 1.0
    return float(max(np.sum(sp.weights**2 * (sp.xi(2.0) - 1.0 / dims)), 0.0))


def degree_bures(state) -> float:
    """Bures degree ``1 - [sum_N p_N xi_N(1/2)^2 / (N+1)]^{1/2}``."""
    return _bures_from(spectral_summary(state))


def _bures_from(sp: SpectralSummary) -> float:
    dims = np.array(sp.manifolds) + 1.0
    inner = np.sum(sp.weights * sp.xi(0.5) ** 2 / dims)
    return float(max(1.0 - np.sqrt(min(inner, 1.0)), 0.0))


def _chernoff_log_bracket(s: np.ndarray, sp: SpectralSummary) -> np.ndarray:
    """``log [sum_N p_N (N+1)^{1-1/s} xi_N(s)^{1/s}]^s`` on an array of ``s``."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    terms = []
    for n, p, lam in zip(sp.manifolds, sp.weights, sp.eigenvalues):
        pos = lam[lam > 0]
        log_xi = np.logaddexp.reduce(s[:, None] * np.log(pos)[None, :], axis=1)
        log_dim = np.log(n + 1.0)
        terms.append(np.log(p) + log_dim + (log_xi - log_dim) / s)
    return s * np.logaddexp.reduce(np.stack(terms), axis=0)


def chernoff_infimum(state) -> tuple[float, float]:
    """Infimum over ``s in [0, 1]`` of the Chernoff bracket, and its location.

    A grid on ``[1e-4, 1]`` with step ``1e-3`` is refined by golden-section
    search.  The ``s -> 0`` limit is ``max_N rank(rho_N)/(N+1)`` and is
    compared separately; when it wins the reported location is ``0``.
    """
    sp = spectral_summary(state)
    return _chernoff_inf(sp)


def _chernoff_inf(sp: SpectralSummary) -> tuple[float, float]:
    grid = np.append(np.arange(S_MIN, 1.0, S_STEP), 1.0)
    vals = np.exp(_chernoff_log_bracket(grid, sp))
    i = int(np.argmin(vals))
    best_s, best = float(grid[i]), float(vals[i])
    if 0 < i < len(grid) - 1:
        def f(s):
            return float(np.exp(_chernoff_log_bracket(s, sp))[0])
        try:
            res = minimize_scalar(f, bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                  method="golden", options={"xtol": GOLDEN_TOL})
            if res.fun < best and grid[i - 1] <= res.x <= grid[i + 1]:
                best_s, best = float(res.x), float(res.fun)
        except ValueError:
            pass
    dims = np.array(sp.manifolds) + 1.0
    limit0 = float(np.max(sp.ranks() / dims))
    if limit0 <= best:
        return limit0, 0.0
    return best, best_s


def degree_chernoff(state) -> float:
    """Chernoff degree ``1 - inf_s [sum_N p_N (N+1)^{1-1/s} xi_N(s)^{1/s}]^s``."""
    return _chernoff_from(spectral_summary(state))


def _chernoff_from(sp: SpectralSummary) -> float:
    inf, _ = _chernoff_inf(sp)
    return float(min(max(1.0 - inf, 0.0), 1.0))


# -- definition-level distances (oracle path) --------------------------------

def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def _weighted_blocks(state: BlockDensity) -> dict[int, np.ndarray]:
    return {b.n: b.p * np.asarray(b.rho) for b in state.blocks}


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2``, computed blockwise."""
    a, b = _weighted_blocks(block_diagonalize(rho)), _weighted_blocks(block_diagonalize(sigma))
    total = 0.0
    for n in set(a) & set(b):
        total += np.sum(np.linalg.svd(_psd_sqrt(a[n]) @ _psd_sqrt(b[n]), compute_uv=False))
    return float(min(total**2, 1.0))


def hs_distance(rho, sigma) -> float:
    """Squared Hilbert-Schmidt distance ``Tr (rho - sigma)^2``."""
    a, b = _weighted_blocks(block_diagonalize(rho)), _weighted_blocks(block_diagonalize(sigma))
    total = 0.0
    for n in set(a) | set(b):
        d = a.get(n, 0) - b.get(n, 0)
        total += np.real(np.sum(np.abs(d) ** 2))
    return float(total)


def chernoff_overlap(rho, sigma) -> float:
    """``inf_{s in [0,1]} Tr(rho^s sigma^{1-s})`` for block-diagonal states.

    Uses ``Tr(A^s B^{1-s}) = sum_ij a_i^s b_j^{1-s} |<u_i|v_j>|^2`` per
    block, so the two states need not commute.
    """
    a, b = _weighted_blocks(block_diagonalize(rho)), _weighted_blocks(block_diagonalize(sigma))
    parts = []
    for n in set(a) & set(b):
        wa, va = np.linalg.eigh(a[n])
        wb, vb = np.linalg.eigh(b[n])
        overlap = np.abs(va.conj().T @ vb) ** 2
        parts.append((np.clip(wa, 0, None), np.clip(wb, 0, None), overlap))

    def trace(s):
        s = np.atleast_1d(s)
        out = np.zeros_like(s)
        for wa, wb, ov in parts:
            pa = np.where(wa[None, :] > EIG_ZERO, np.abs(wa[None, :]) ** s[:, None], 0.0)
            pb = np.where(wb[None, :] > EIG_ZERO, np.abs(wb[None, :]) ** (1 - s[:, None]), 0.0)
            out += np.einsum("si,ij,sj->s", pa, ov, pb)
        return out

    if not parts:
        return 0.0
    grid = np.linspace(1e-9, 1.0, 2001)
    vals = trace(grid)
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda s: float(trace(s)[0]), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(min(vals[i], res.fun))


def _simplex_points(k: int, resolution: int) -> list[np.ndarray]:
    pts = []
    for c in itertools.product(range(resolution + 1), repeat=k - 1):
        if sum(c) <= resolution:
            pts.append(np.array(list(c) + [resolution - sum(c)]) / resolution)
    return pts


def _softmax(x):
    z = np.exp(np.append(x, 0.0) - np.max(np.append(x, 0.0)))
    return z / z.sum()


def sup_over_unpolarized(state, measure: str) -> tuple[UnpolarizedSpec, float]:
    """Optimize the unpolarized reference state numerically.

    Returns the best weights found and the degree evaluated from the
    defining distance (not from the closed forms).  Weights are restricted
    to the manifolds populated by the state; a simplex grid is followed by
    Nelder-Mead refinement.
    """
    bd = block_diagonalize(state)
    ns = bd.manifolds
    k = len(ns)

    def sigma(pi):
        return unpolarized_state(UnpolarizedSpec(bd.cutoff, dict(zip(ns, pi / pi.sum()))))

    if measure == "hsb":
        def cost(pi):
            return hs_distance(bd, sigma(pi))
    elif measure == "bb":
        def cost(pi):
            return -np.sqrt(fidelity(bd, sigma(pi)))
    elif measure == "cb":
        def cost(pi):
            return -chernoff_overlap(bd, sigma(pi))
    else:
        raise ValueError(f"unknown measure {measure!r}")

    if k == 1:
        best_pi = np.ones(1)
    else:
        resolution = 40 if k <= 3 else 8
        cands = _simplex_points(k, resolution)
        costs = [cost(np.clip(c, 1e-12, None)) for c in cands]
        start = np.clip(cands[int(np.argmin(costs))], 1e-6, None)
        x0 = np.log(start[:-1] / start[-1])
        res = minimize(lambda x: cost(_softmax(x)), x0, method="Nelder-Mead",
                       options=dict(xatol=1e-10, fatol=1e-13, maxfev=4000))
        best_pi = _softmax(res.x)
    c = cost(best_pi)
    value = c if measure == "hsb" else 1.0 + c
    spec = UnpolarizedSpec(bd.cutoff, dict(zip(ns, best_pi / best_pi.sum())))
    return spec, float(value)


# -- maximal polarization versus mean photon number ---------------------------

@dataclass(frozen=True)
class MaxCurvePoint:
    nbar: float
    value: float
    measure: str


def _ceil(x: float) -> int:
    return int(np.ceil(x - 1e-12))


def _floor(x: float) -> int:
    return int(np.floor(x + 1e-12))


def _pure_mixture_summary(weights: dict[int, float]) -> SpectralSummary:
    ns = tuple(n for n in sorted(weights) if weights[n] > 0)
    eigs = tuple(np.array([1.0] + [0.0] * n) for n in ns)
    return SpectralSummary(ns, np.array([weights[n] for n in ns]), eigs)


def max_value(measure: str, nbar: float) -> float:
    """Largest degree attainable at mean photon number ``nbar``.

    ``hsb``: rounded staircase with regime boundary
    ``nbar = sqrt(floor(nbar)(floor(nbar)+2))``.  ``bb`` and ``cb``: the
    mixture of pure states in manifolds ``ceil(nbar)-1`` and ``ceil(nbar)``.
    """
    if nbar < 0:
        raise ValueError("mean photon number must be non-negative")
    if nbar <= 1e-15:
        return 0.0
    f, c = _floor(nbar), _ceil(nbar)
    if measure == "hsb":
        if nbar <= np.sqrt(f * (f + 2)):
            return f / (f + 1)
        return nbar**2 / (c * (c + 1))
    if measure == "bb":
        return float(1.0 - np.sqrt((2 * c - nbar) / (c * (c + 1))))
    if measure == "cb":
        sp = _pure_mixture_summary({c - 1: c - nbar, c: 1 + nbar - c})
        inf, _ = _chernoff_inf(sp)
        return 1.0 - inf
    raise ValueError(f"unknown measure {measure!r}")


def nbar_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid with values rounded to 12 decimals (stable ceil/floor)."""
    count = int(round((stop - start) / step)) + 1
    return np.round(start + step * np.arange(count), 12)


def max_curve(measure: str, nbar_values: Iterable[float]) -> list[MaxCurvePoint]:
    return [MaxCurvePoint(float(x), float(max_value(measure, float(x))), measure)
            for x in nbar_values]


def curve_to_csv(points: Iterable[MaxCurvePoint]) -> str:
    lines = ["nbar,measure,value"]
    for pt in points:
        lines.append(f"{pt.nbar:.12g},{pt.measure},{pt.value:.12g}")
    return "\n".join(lines) + "\n"


_FROM_SUMMARY = {"hsb": _hs_from, "bb": _bures_from, "cb": _chernoff_from}


def max_curve_verify(measure: str, nbar: float, max_heavy: int | None = None,
                     grid: int = 20) -> float:
    """Brute-force the largest degree over few-manifold states at fixed ``nbar``.

    Candidates are block-diagonal states with rank-one blocks on two
    manifolds (weights fixed by the mean) and on three manifolds (a grid
    along the constraint segment refined by bounded scalar search).  The
    light manifolds span ``{0} U [floor-1, ceil+3]``; the heaviest manifold
    of a pair may reach ``max_heavy`` (default ``ceil(nbar) + 20``).
    """
    from_summary = _FROM_SUMMARY[measure]

    def degree(weights: dict[int, float]) -> float:
        w = {n: p for n, p in weights.items() if p > 0}
        total = sum(w.values())
        return from_summary(_pure_mixture_summary({n: p / total for n, p in w.items()}))

    if nbar <= 1e-15:
        return degree({0: 1.0})
    f, c = _floor(nbar), _ceil(nbar)
    max_heavy = c + 20 if max_heavy is None else max_heavy
    light = sorted({0} | set(range(max(f - 1, 0), c + 4)))
    heavy = sorted(set(light) | set(range(c, max_heavy + 1)))
    best = -np.inf
    if abs(nbar - round(nbar)) <= 1e-12:
        best = degree({int(round(nbar)): 1.0})
    for lo in light:
        for hi in heavy:
            if lo < nbar < hi:
                p_hi = (nbar - lo) / (hi - lo)
                best = max(best, degree({lo: 1 - p_hi, hi: p_hi}))
    for a, b, d in itertools.combinations(light, 3):
        if not a < nbar < d:
            continue
        # weights (x, y, z) on (a, b, d) with mean nbar; parametrize by y
        y_max = min((nbar - a) / (b - a), (d - nbar) / (d - b))

        def weights(y):
            z = (nbar - a - y * (b - a)) / (d - a)
            return {a: 1 - y - z, b: y, d: z}

        def neg(y):
            return -degree({n: max(w, 0.0) for n, w in weights(y).items()})

        ys = np.linspace(0, y_max, grid + 1)
        vals = [neg(y) for y in ys]
        i = int(np.argmin(vals))
        best = max(best, -vals[i])
        res = minimize_scalar(neg, bounds=(ys[max(i - 1, 0)], ys[min(i + 1, grid)]),
                              method="bounded", options={"xatol": 1e-9})
        best = max(best, -res.fun)
    return float(best)
