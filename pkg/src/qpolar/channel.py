"""Non-selective total photon-number measurement."""
from __future__ import annotations

import numpy as np

from .states import BlockDensity, TwoModeState, pure_to_block

__all__ = ["block_diagonalize", "photon_distribution", "rescale_unbounded"]


def block_diagonalize(state: TwoModeState | BlockDensity) -> BlockDensity:
    """Discard coherences between manifolds.

    A :class:`BlockDensity` is already block diagonal and is returned as is.
    """
    if isinstance(state, BlockDensity):
        return state
    return pure_to_block(state)


def photon_distribution(state) -> list[tuple[int, float]]:
    """Pairs ``(N, p_N)`` for every populated manifold, ascending in ``N``."""
    if isinstance(state, TwoModeState):
        return [(n, float(np.sum(np.abs(state.vector(n)) ** 2))) for n in state.manifolds]
    return [(b.n, b.p) for b in state.blocks]


def rescale_unbounded(value):
    """Map a non-negative measure onto ``[0, 1)`` via ``x / (1 + x)``; order preserving."""
    value = np.asarray(value, dtype=float)
    if np.any(value < 0):
        raise ValueError("rescale_unbounded expects non-negative values")
    out = value / (1.0 + value)
    return float(out) if out.ndim == 0 else out
