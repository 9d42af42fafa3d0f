"""Two-mode Fock-space states.

Basis kets are labelled ``|k, n-k>`` with ``k`` photons in the horizontal
mode and ``n`` photons in total.  Within an excitation manifold the dense
vector index is ``k`` (ascending), so index 0 is ``|0, n>``.

Two state kinds are supported:

* :class:`TwoModeState` -- a pure state with sparse amplitudes, possibly
  spread over several manifolds.
* :class:`BlockDensity` -- a block-diagonal density operator
  ``sum_N p_N rho_N``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Union

import numpy as np

from .errors import InvalidState, ParseError

__all__ = [
    "FockIndex", "TwoModeState", "Block", "BlockDensity", "UnpolarizedSpec",
    "make_pure", "make_block", "pure_to_block", "unpolarized_state",
    "phase_distance", "load_state", "save_state", "state_to_dict",
    "state_from_dict", "random_pure_state", "random_block_density",
]

NORM_TOL = 1e-9
HERM_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10


class FockIndex(NamedTuple):
    """Index of the basis ket ``|k, n-k>``."""

    n: int
    k: int


def _check_index(n, k) -> FockIndex:
    n, k = int(n), int(k)
    if n < 0 or k < 0 or k > n:
        raise IndexError(f"invalid Fock index (n={n}, k={k}); need 0 <= k <= n")
    return FockIndex(n, k)


@dataclass(frozen=True)
class TwoModeState:
    """Normalized pure two-mode state with sparse amplitudes.

    Use :func:`make_pure` to build one from unnormalized amplitudes; the
    constructor itself only validates.
    """

    cutoff: int
    amplitudes: Mapping[FockIndex, complex]
    norm_factor: float = 1.0

    def __post_init__(self):
        amps = {}
        for idx, value in dict(self.amplitudes).items():
            idx = _check_index(*idx)
            if idx.n > self.cutoff:
                raise InvalidState(f"index {idx} exceeds cutoff {self.cutoff}")
            value = complex(value)
            if value != 0:
                amps[idx] = value
        norm2 = sum(abs(v) ** 2 for v in amps.values())
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm^2 = {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", MappingProxyType(dict(sorted(amps.items()))))

    @property
    def manifolds(self) -> tuple[int, ...]:
        """Manifolds carrying nonzero amplitude, ascending."""
        return tuple(sorted({idx.n for idx in self.amplitudes}))

    def vector(self, n: int) -> np.ndarray:
        """Dense (unnormalized) amplitude vector of manifold ``n``."""
        vec = np.zeros(n + 1, dtype=complex)
        for idx, value in self.amplitudes.items():
            if idx.n == n:
                vec[idx.k] = value
        return vec

    def __repr__(self):
        terms = " + ".join(f"({v:.4g})|{i.k},{i.n - i.k}>" for i, v in self.amplitudes.items())
        return f"TwoModeState({terms})"


@dataclass(frozen=True)
class Block:
    """One manifold of a block-diagonal state: weight ``p`` and unit-trace ``rho``."""

    n: int
    p: float
    rho: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class BlockDensity:
    """Block-diagonal density operator ``sum_N p_N rho_N``.

    Blocks are sorted by manifold; zero-weight manifolds are dropped.
    """

    cutoff: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        checked = []
        seen = set()
        for b in self.blocks:
            n = int(b.n)
            if n < 0 or n > self.cutoff:
                raise InvalidState(f"manifold {n} outside [0, {self.cutoff}]")
            if n in seen:
                raise InvalidState(f"duplicate manifold {n}")
            seen.add(n)
            p = float(b.p)
            if p < 0:
                raise InvalidState(f"negative weight p_{n} = {p}")
            if p == 0:
                continue
            rho = np.array(b.rho, dtype=complex)
            if rho.shape != (n + 1, n + 1):
                raise InvalidState(f"block {n} has shape {rho.shape}, expected {(n + 1, n + 1)}")
            if np.max(np.abs(rho - rho.conj().T)) > HERM_TOL:
                raise InvalidState(f"block {n} is not Hermitian")
            rho = 0.5 * (rho + rho.conj().T)
            tr = np.trace(rho).real
            if abs(tr - 1.0) > TRACE_TOL:
                raise InvalidState(f"block {n} has trace {tr!r}")
            if np.linalg.eigvalsh(rho)[0] < -PSD_TOL:
                raise InvalidState(f"block {n} is not positive semidefinite")
            rho.setflags(write=False)
            checked.append(Block(n, p, rho))
        total = sum(b.p for b in checked)
        if abs(total - 1.0) > NORM_TOL:
            raise InvalidState(f"manifold weights sum to {total!r}, expected 1")
        object.__setattr__(self, "blocks", tuple(sorted(checked, key=lambda b: b.n)))

    @property
    def manifolds(self) -> tuple[int, ...]:
        return tuple(b.n for b in self.blocks)

    def block(self, n: int) -> Block | None:
        for b in self.blocks:
            if b.n == n:
                return b
        return None

    def dense(self) -> np.ndarray:
        """Full matrix on the truncated space, manifolds stacked in order 0..cutoff."""
        dim = (self.cutoff + 1) * (self.cutoff + 2) // 2
        out = np.zeros((dim, dim), dtype=complex)
        for b in self.blocks:
            off = b.n * (b.n + 1) // 2
            out[off:off + b.n + 1, off:off + b.n + 1] = b.p * b.rho
        return out


State = Union[TwoModeState, BlockDensity]


@dataclass(frozen=True)
class UnpolarizedSpec:
    """Manifold weights ``pi_N`` of an SU(2)-invariant state."""

    cutoff: int
    weights: Mapping[int, float]

    def __post_init__(self):
        w = {int(n): float(p) for n, p in dict(self.weights).items()}
        if any(p < 0 for p in w.values()):
            raise InvalidState("negative unpolarized weight")
        if any(n < 0 or n > self.cutoff for n in w):
            raise InvalidState("unpolarized weight outside [0, cutoff]")
        if abs(sum(w.values()) - 1.0) > NORM_TOL:
            raise InvalidState(f"unpolarized weights sum to {sum(w.values())!r}")
        object.__setattr__(self, "weights", MappingProxyType(dict(sorted(w.items()))))

    @classmethod
    def from_weights(cls, weights) -> "UnpolarizedSpec":
        """Build from a mapping ``{N: pi_N}`` or a sequence indexed by ``N``."""
        if not isinstance(weights, Mapping):
            weights = dict(enumerate(weights))
        return cls(max(weights), weights)


def make_pure(amplitudes) -> TwoModeState:
    """Build a normalized pure state from ``(FockIndex, amplitude)`` pairs.

    ``amplitudes`` may be a mapping or an iterable of pairs.  Repeated
    indices are summed.  The applied normalization factor is stored on the
    result as ``norm_factor``.

    Raises
    ------
    IndexError
        If some ``k > n`` or an index is negative.
    InvalidState
        If every amplitude is zero.
    """
    items = amplitudes.items() if isinstance(amplitudes, Mapping) else amplitudes
    amps: dict[FockIndex, complex] = {}
    for idx, value in items:
        idx = _check_index(*idx)
        amps[idx] = amps.get(idx, 0j) + complex(value)
    amps = {i: v for i, v in amps.items() if v != 0}
    if not amps:
        raise InvalidState("all amplitudes are zero")
    norm = np.sqrt(sum(abs(v) ** 2 for v in amps.values()))
    factor = 1.0 / norm
    return TwoModeState(
        cutoff=max(i.n for i in amps),
        amplitudes={i: v * factor for i, v in amps.items()},
        norm_factor=float(factor),
    )


def make_block(blocks, cutoff: int | None = None, renormalize: bool = False) -> BlockDensity:
    """Build a :class:`BlockDensity` from ``(n, p, rho)`` triples.

    With ``renormalize`` the weights are rescaled to sum to one and every
    block to unit trace; otherwise the invariants are checked as given.
    """
    triples = [(int(n), float(p), np.asarray(rho, dtype=complex)) for n, p, rho in blocks]
    if renormalize:
        triples = [(n, p, rho / np.trace(rho).real) for n, p, rho in triples if p > 0]
        total = sum(p for _, p, _ in triples)
        if total <= 0:
            raise InvalidState("all manifold weights are zero")
        triples = [(n, p / total, rho) for n, p, rho in triples]
    if cutoff is None:
        cutoff = max((n for n, _, _ in triples), default=0)
    return BlockDensity(cutoff, tuple(Block(n, p, rho) for n, p, rho in triples))


def pure_to_block(state: TwoModeState) -> BlockDensity:
    """Project a pure state onto its excitation manifolds.

    Each manifold keeps weight ``p_N = sum_k |c_{N,k}|^2`` and the
    renormalized projector onto its amplitude vector.
    """
    blocks = []
    for n in state.manifolds:
        vec = state.vector(n)
        p = float(np.vdot(vec, vec).real)
        u = vec / np.sqrt(p)
        blocks.append(Block(n, p, np.outer(u, u.conj())))
    return BlockDensity(state.cutoff, tuple(blocks))


def unpolarized_state(spec: UnpolarizedSpec) -> BlockDensity:
    """The SU(2)-invariant state ``sum_N pi_N 1_N / (N + 1)``."""
    blocks = tuple(
        Block(n, p, np.eye(n + 1, dtype=complex) / (n + 1))
        for n, p in spec.weights.items() if p > 0
    )
    return BlockDensity(spec.cutoff, blocks)


def phase_distance(a: TwoModeState, b: TwoModeState) -> float:
    """Largest per-manifold infidelity ``1 - |<a_N|b_N>| / (|a_N| |b_N|)``.

    Zero when the states agree up to an independent phase in each
    manifold.  A manifold populated in only one state contributes 1.
    """
    worst = 0.0
    for n in sorted(set(a.manifolds) | set(b.manifolds)):
        va, vb = a.vector(n), b.vector(n)
        na, nb = np.linalg.norm(va), np.linalg.norm(vb)
        if na == 0 or nb == 0:
            return 1.0
        worst = max(worst, 1.0 - abs(np.vdot(va, vb)) / (na * nb))
    return float(worst)


# -- JSON ------------------------------------------------------------------

def state_to_dict(state: State) -> dict:
    if isinstance(state, TwoModeState):
        return {
            "kind": "pure",
            "amplitudes": [
                {"n": i.n, "k": i.k, "re": v.real, "im": v.imag}
                for i, v in state.amplitudes.items()
            ],
        }
    return {
        "kind": "block",
        "blocks": [
            {
                "n": b.n,
                "p": b.p,
                "rho": [[[z.real, z.imag] for z in row] for row in b.rho.tolist()],
            }
            for b in state.blocks
        ],
    }


def state_from_dict(doc) -> State:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError("state document must be an object with a 'kind' field")
    renorm = doc.get("renormalize", False)
    if not isinstance(renorm, bool):
        raise ParseError("'renormalize' must be a boolean")
    try:
        if doc["kind"] == "pure":
            pairs = [((e["n"], e["k"]), complex(float(e["re"]), float(e["im"])))
                     for e in doc["amplitudes"]]
            if renorm:
                return make_pure(pairs)
            amps: dict = {}
            for idx, v in pairs:
                idx = _check_index(*idx)
                amps[idx] = amps.get(idx, 0j) + v
            if not any(amps.values()):
                raise InvalidState("all amplitudes are zero")
            return TwoModeState(max(i.n for i in amps), amps)
        if doc["kind"] == "block":
            triples = []
            for e in doc["blocks"]:
                rho = np.array(e["rho"], dtype=float)
                n = int(e["n"])
                if rho.shape != (n + 1, n + 1, 2):
                    raise ParseError(f"rho for n={n} must be ({n + 1}, {n + 1}) of [re, im]")
                triples.append((n, float(e["p"]), rho[..., 0] + 1j * rho[..., 1]))
            return make_block(triples, renormalize=renorm)
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed state document: {exc}") from exc
    raise ParseError(f"unknown state kind {doc['kind']!r}")


def load_state(text: str) -> State:
    """Parse a state JSON document.

    Raises :class:`ParseError` for malformed input and
    :class:`InvalidState` when invariants fail.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    return state_from_dict(doc)


def save_state(state: State) -> str:
    return json.dumps(state_to_dict(state))


# -- random states (tests and verification suites) --------------------------

def _random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_pure_state(rng: np.random.Generator, manifolds: Iterable[int]) -> TwoModeState:
    """Haar-like random pure state spread over ``manifolds`` with random weights."""
    manifolds = list(manifolds)
    weights = rng.dirichlet(np.ones(len(manifolds)))
    amps = {}
    for n, w in zip(manifolds, weights):
        vec = _random_vector(rng, n + 1) * np.sqrt(w)
        for k, c in enumerate(vec):
            amps[(n, k)] = c
    return make_pure(amps.items())


def random_block_density(rng: np.random.Generator, manifolds: Iterable[int],
                         rank: int | None = None) -> BlockDensity:
    """Random block-diagonal state; ``rank`` caps each block's rank."""
    manifolds = list(manifolds)
    weights = rng.dirichlet(np.ones(len(manifolds)))
    triples = []
    for n, w in zip(manifolds, weights):
        r = n + 1 if rank is None else min(rank, n + 1)
        g = rng.normal(size=(n + 1, r)) + 1j * rng.normal(size=(n + 1, r))
        rho = g @ g.conj().T
        triples.append((n, w, rho / np.trace(rho).real))
    return make_block(triples, cutoff=max(manifolds))
