"""Pure N-photon states with vanishing mean Stokes vector.

Includes the symmetric family, the complete two-photon family, and the
three-photon construction: amplitudes ``(a0, a2)`` inside a sail-shaped
region, with the remaining phases fixed by closing a triangle of three
complex vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import OutsideRegion, Unsupported
from .states import TwoModeState, make_pure
from .stokes import moments

__all__ = [
    "UnpolCertificate", "is_stokes_unpolarized", "symmetric_family",
    "two_photon_family", "two_photon_variances", "SailClassification",
    "left_border", "right_border", "lower_border", "sail_region",
    "sail_polylines", "SAIL_VERTICES", "three_photon_amplitudes",
    "three_photon_solve", "three_photon_variances", "constant_sz_curve",
    "mirror_state", "sample_sail_point", "left_border_state",
]

CERT_TOL = 1e-10
REGION_TOL = 1e-12
SQ3 = np.sqrt(3.0)
SQ6 = np.sqrt(6.0)
SAIL_VERTICES = ((0.0, 0.0), (1 / np.sqrt(2.0), 0.0), (0.5, SQ3 / 2))


def _single_manifold(state: TwoModeState) -> tuple[int, np.ndarray]:
    if len(state.manifolds) != 1:
        raise ValueError(f"expected an N-photon state, got manifolds {state.manifolds}")
    n = state.manifolds[0]
    return n, state.vector(n)


@dataclass(frozen=True)
class UnpolCertificate:
    """Residual mean Stokes components of a pure N-photon state.

    ``sx, sy, sz`` come from the algebraic conditions; ``dual_path_gap``
    is their largest disagreement with the matrix expectation values.
    """

    sx: float
    sy: float
    sz: float
    variances: tuple[float, float, float]
    dual_path_gap: float

    @property
    def certified(self) -> bool:
        return max(abs(self.sx), abs(self.sy), abs(self.sz)) <= CERT_TOL


def is_stokes_unpolarized(state: TwoModeState) -> UnpolCertificate:
    """Evaluate both vanishing conditions for an N-photon pure state."""
    n, c = _single_manifold(state)
    k = np.arange(n)
    cross = np.sum(c[:-1] * np.conj(c[1:]) * np.sqrt((k + 1) * (n - k)))  # <a_H^dag a_V>
    sz = float(np.sum(np.abs(c) ** 2 * (2 * np.arange(n + 1) - n)))
    alg = np.array([2 * cross.real, 2 * cross.imag, sz])
    m = moments(state)
    return UnpolCertificate(
        sx=float(alg[0]), sy=float(alg[1]), sz=sz,
        variances=tuple(float(v) for v in m.var),
        dual_path_gap=float(np.max(np.abs(alg - m.vec))),
    )


def symmetric_family(n: int, half_amplitudes: Sequence[complex], sign: int = 1,
                     middle_branch: int = 0) -> TwoModeState:
    """State with ``c_{N-k} = sign * (-1)^k * i * conj(c_k)``.

    ``half_amplitudes`` gives ``c_0 .. c_{floor(n/2)}``.  For even ``n`` only
    the modulus of the middle entry is used; its phase is one of the two
    values allowed by ``sign`` (picked by ``middle_branch``).  For odd ``n``
    the last entry must vanish.

    Raises
    ------
    Unsupported
        For ``n = 1``, or when a forced-zero amplitude is requested nonzero.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if middle_branch not in (0, 1):
        raise ValueError("middle_branch must be 0 or 1")
    half = np.asarray(half_amplitudes, dtype=complex)
    if half.shape != (n // 2 + 1,):
        raise ValueError(f"expected {n // 2 + 1} half amplitudes for n={n}")
    if n == 1:
        raise Unsupported("no Stokes-unpolarized pure state exists with one photon")
    c = np.zeros(n + 1, dtype=complex)
    if n % 2:
        if half[-1] != 0:
            raise Unsupported(f"amplitude k={(n - 1) // 2} must vanish for odd n={n}")
        free = half[:-1]
    else:
        free = half[:-1]
        if sign == 1:
            phase = (n + 1) * np.pi / 4 if middle_branch == 0 else (n - 3) * np.pi / 4
        else:
            phase = (n + 3) * np.pi / 4 if middle_branch == 0 else (n - 1) * np.pi / 4
        c[n // 2] = abs(half[-1]) * np.exp(1j * phase)
    for k, ck in enumerate(free):
        c[k] = ck
        c[n - k] = sign * (-1) ** k * 1j * np.conj(ck)
    return make_pure(((n, k), v) for k, v in enumerate(c))


def two_photon_family(a: float, theta: float) -> TwoModeState:
    """``a e^{i theta}|0,2> + i sqrt(1-2a^2)|1,1> + a e^{-i theta}|2,0>``."""
    if not -1e-12 <= a <= 1 / np.sqrt(2) + 1e-12:
        raise ValueError("a must lie in [0, 1/sqrt(2)]")
    mid = np.sqrt(max(1 - 2 * a * a, 0.0))
    return make_pure([((2, 0), a * np.exp(1j * theta)), ((2, 1), 1j * mid),
                      ((2, 2), a * np.exp(-1j * theta))])


def two_photon_variances(a: float, theta: float) -> tuple[float, float, float]:
    """Closed-form Stokes variances of :func:`two_photon_family`."""
    return (float(4 - 4 * a * a * (1 - np.cos(2 * theta))),
            float(4 - 4 * a * a * (1 + np.cos(2 * theta))),
            float(8 * a * a))


# -- three photons -----------------------------------------------------------

def left_border(a0):
    return SQ3 * np.asarray(a0)


def right_border(a0):
    x = np.clip(np.sqrt(2.0) * np.asarray(a0), -1.0, 1.0)
    return -SQ3 * np.asarray(a0) - SQ6 * np.cos((2 * np.pi + np.arccos(x)) / 3)


def lower_border(a0):
    x = np.clip(np.sqrt(2.0) * np.asarray(a0), -1.0, 1.0)
    return SQ3 * np.asarray(a0) - SQ6 * np.cos((np.pi + np.arccos(x)) / 3)


@dataclass(frozen=True)
class SailClassification:
    status: str                 # "inside", "border" or "outside"
    borders: tuple[str, ...]    # curves the point lies on


def sail_region(a0: float, a2: float, tol: float = REGION_TOL) -> SailClassification:
    """Locate ``(a0, a2)`` relative to the admissible three-photon region.

    The region lies above the lower border and below both the left and
    right borders, for ``0 <= a0 <= 1/sqrt(2)``.  Non-finite input is a
    ``ValueError``.
    """
    if not (np.isfinite(a0) and np.isfinite(a2)):
        raise ValueError("sail coordinates must be finite")
    a0_max = 1 / np.sqrt(2.0)
    if a0 < -tol or a2 < -tol or a0 > a0_max + tol:
        return SailClassification("outside", ())
    left, right, lower = left_border(a0), right_border(a0), lower_border(a0)
    d_low = a2 - lower
    d_up = min(left, right) - a2
    if d_low < -tol or d_up < -tol:
        return SailClassification("outside", ())
    on = []
    if abs(a2 - left) <= tol and a0 <= 0.5 + tol:
        on.append("left")
    if abs(a2 - right) <= tol and a0 >= 0.5 - tol:
        on.append("right")
    if abs(d_low) <= tol:
        on.append("lower")
    return SailClassification("border" if on else "inside", tuple(on))


def sail_polylines(samples: int = 200) -> dict[str, np.ndarray]:
    """Sampled border curves, each as an ``(samples, 2)`` array of ``(a0, a2)``."""
    a_left = np.linspace(0.0, 0.5, samples)
    a_right = np.linspace(0.5, 1 / np.sqrt(2.0), samples)
    a_lower = np.linspace(0.0, 1 / np.sqrt(2.0), samples)
    return {
        "left": np.column_stack([a_left, left_border(a_left)]),
        "right": np.column_stack([a_right, right_border(a_right)]),
        "lower": np.column_stack([a_lower, lower_border(a_lower)]),
    }


def sample_sail_point(rng: np.random.Generator) -> tuple[float, float]:
    """Uniform sample from the interior of the sail (rejection sampling)."""
    while True:
        a0 = rng.uniform(0, 1 / np.sqrt(2.0))
        a2 = rng.uniform(0, SQ3 / 2)
        if sail_region(a0, a2).status == "inside":
            return float(a0), float(a2)


def three_photon_amplitudes(a0: float, a2: float) -> tuple[float, float]:
    """Moduli ``a1, a3`` fixed by normalization and a vanishing ``<Sz>``."""
    a1sq = (3 - 6 * a0 * a0 - 2 * a2 * a2) / 4
    a3sq = (1 + 2 * a0 * a0 - 2 * a2 * a2) / 4
    # roundoff at the vertices lands a hair either side of zero
    a1sq = 0.0 if abs(a1sq) < 1e-14 else a1sq
    a3sq = 0.0 if abs(a3sq) < 1e-14 else a3sq
    return float(np.sqrt(max(a1sq, 0.0))), float(np.sqrt(max(a3sq, 0.0)))


def _three_photon_state(amps, phases) -> TwoModeState:
    return make_pure(((3, k), a * np.exp(1j * t)) for k, (a, t) in enumerate(zip(amps, phases)))


def three_photon_solve(a0: float, a2: float, theta1: float = 0.0) -> list[TwoModeState]:
    """All distinct unpolarized three-photon states with the given ``a0, a2, theta1``.

    The vanishing of ``<a_H^dag a_V>`` requires the vectors
    ``sqrt3 a0 a1 e^{-i t1}``, ``2 a1 a2 e^{i(t1-t2)}`` and
    ``sqrt3 a2 a3 e^{i(t2-t3)}`` to sum to zero.  The angle of the second
    vector follows from the law of cosines; both orientations are returned
    (one on a border, where the triangle is degenerate).  Phases left
    unconstrained by vanishing sides are set to zero.

    Raises
    ------
    OutsideRegion
        If ``(a0, a2)`` lies outside the admissible region.
    """
    if sail_region(a0, a2).status == "outside":
        raise OutsideRegion(f"({a0}, {a2}) lies outside the admissible region")
    a1, a3 = three_photon_amplitudes(a0, a2)
    amps = (a0, a1, a2, a3)
    A, B, C = SQ3 * a0 * a1, 2 * a1 * a2, SQ3 * a2 * a3
    tiny = 1e-14
    v1 = A * np.exp(-1j * theta1)
    if max(A, B, C) <= tiny:
        return [_three_photon_state(amps, (0.0, theta1, 0.0, 0.0))]
    if B <= tiny:
        theta3 = -np.angle(-v1)  # v3 = -v1, theta2 free
        return [_three_photon_state(amps, (0.0, theta1, 0.0, theta3))]
    if C <= tiny:
        theta2 = theta1 - np.angle(-v1)  # v2 = -v1, theta3 free
        return [_three_photon_state(amps, (0.0, theta1, theta2, 0.0))]
    base = np.angle(-v1) if A > tiny else 0.0
    cos_d = np.clip((A * A + B * B - C * C) / (2 * A * B), -1.0, 1.0) if A > tiny else 1.0
    delta = float(np.arccos(cos_d))
    degenerate = min(B + C - A, A + C - B, A + B - C) <= REGION_TOL
    deltas = (delta,) if degenerate or delta <= REGION_TOL or np.pi - delta <= REGION_TOL \
        else (delta, -delta)
    out = []
    for d in deltas:
        v2 = B * np.exp(1j * (base + d))
        v3 = -v1 - v2
        theta2 = theta1 - np.angle(v2)
        theta3 = theta2 - np.angle(v3)
        out.append(_three_photon_state(amps, (0.0, theta1, theta2, theta3)))
    return out


def left_border_state(a0: float, theta1: float = 0.0) -> TwoModeState:
    """Closed-form unpolarized state on the left border ``a2 = sqrt3 a0``.

    Amplitudes ``(a0, sqrt(3 - 12 a0^2)/2, sqrt3 a0, sqrt(1 - 4 a0^2)/2)``
    with phases ``(0, theta1, 2 theta1 - pi, 3 theta1 - pi)``.
    """
    if not -REGION_TOL <= a0 <= 0.5 + REGION_TOL:
        raise OutsideRegion("the left border spans 0 <= a0 <= 1/2")
    a0 = min(max(a0, 0.0), 0.5)
    amps = (a0, np.sqrt(max(3 - 12 * a0 * a0, 0.0)) / 2, SQ3 * a0,
            np.sqrt(max(1 - 4 * a0 * a0, 0.0)) / 2)
    return _three_photon_state(amps, (0.0, theta1, 2 * theta1 - np.pi, 3 * theta1 - np.pi))


def three_photon_variances(state: TwoModeState) -> tuple[float, float, float]:
    """Closed-form Stokes variances of an unpolarized three-photon state."""
    n, c = _single_manifold(state)
    if n != 3:
        raise ValueError("three_photon_variances needs a three-photon state")
    a = np.abs(c)
    cross = np.real(np.conj(c[0]) * c[2]) + np.real(np.conj(c[1]) * c[3])
    common = 3 + 4 * (a[1] ** 2 + a[2] ** 2)
    return (float(common + 4 * SQ3 * cross), float(common - 4 * SQ3 * cross),
            float(9 - 8 * (a[1] ** 2 + a[2] ** 2)))


def constant_sz_curve(a0, var_z: float):
    """``a2(a0)`` along which the Sz variance of three-photon states equals ``var_z``.

    NaN where no real ``a2`` exists.
    """
    sq = 3 * np.asarray(a0, dtype=float) ** 2 - (var_z - 3) / 4
    return np.sqrt(np.where(sq >= 0, sq, np.nan))


def mirror_state(state: TwoModeState) -> TwoModeState:
    """``c_k -> conj(c_{N-k})``, which preserves Stokes unpolarization."""
    n, c = _single_manifold(state)
    return make_pure(((n, k), v) for k, v in enumerate(np.conj(c[::-1])))
