"""Mode-space unitaries, exact Fock-state evolution, and photon-number detection.

Transformation convention: a circuit unitary U maps creation operators as
a+_i -> sum_j U[j, i] a+_j (column i carries the image of input mode i).
Multi-photon amplitudes keep the standard sqrt(n!) normalization of Fock kets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .fock import OccupationVector, PhotonicState

_UNITARITY_TOL = 1e-12

#: Pattern of photon counts on the detected modes.
DetectionPattern = dict[int, int]


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    """A unitary acting on optical modes (U+U = I within 1e-12)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix of shape {m.shape} is not square")
        dev = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        if dev > _UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary (deviation {dev:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "ModeUnitary") -> "ModeUnitary":
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch in composition")
        return ModeUnitary(self.matrix @ other.matrix)


@dataclass(frozen=True)
class MeasurementOutcome:
    """One detection pattern with its probability and the surviving state."""

    pattern: DetectionPattern
    probability: float
    post_state: PhotonicState


def vbs(theta: float) -> ModeUnitary:
    """Variable beam splitter [[cos t, sin t], [sin t, -cos t]].

    theta in [0, pi/4] covers the gate parameter range; values up to pi/2 are
    accepted because vbs(0) and vbs(pi/2) double as the dual-rail Pauli Z and
    X mode operations.
    """
    if not -1e-12 <= theta <= math.pi / 2 + 1e-12:
        raise ValueError(f"VBS angle {theta} outside [0, pi/2]")
    c, s = math.cos(theta), math.sin(theta)
    return ModeUnitary(np.array([[c, s], [s, -c]]))


def identity(total: int) -> ModeUnitary:
    return ModeUnitary(np.eye(total, dtype=complex))


def embed(u: ModeUnitary, modes: Sequence[int], total: int) -> ModeUnitary:
    """Embed u on the given modes, identity elsewhere."""
    modes = [int(m) for m in modes]
    if len(set(modes)) != len(modes):
        raise ValueError(f"target modes {modes} collide")
    if len(modes) != u.dimension:
        raise ValueError(f"{u.dimension}-mode unitary cannot act on {len(modes)} modes")
    if any(m < 0 or m >= total for m in modes):
        raise ValueError(f"target modes {modes} overflow {total} modes")
    full = np.eye(total, dtype=complex)
    for r, mr in enumerate(modes):
        for c, mc in enumerate(modes):
            full[mr, mc] = u.matrix[r, c]
    return ModeUnitary(full)


def qubit_x(pair: tuple[int, int], total: int) -> ModeUnitary:
    """Logical X on a dual-rail qubit: swap its two rails."""
    return embed(vbs(math.pi / 2), pair, total)


def qubit_z(pair: tuple[int, int], total: int) -> ModeUnitary:
    """Logical Z on a dual-rail qubit: phase -1 on the |1> rail."""
    return embed(vbs(0.0), pair, total)


def apply(u: ModeUnitary, state: PhotonicState) -> PhotonicState:
    """Evolve the state through u, photon by photon.

    Each term amp * prod_i (a+_i)^{n_i} / sqrt(prod n_i!) |vac>> is expanded by
    substituting every creation operator with its image column, accumulating
    operator-monomial coefficients, then converting back to normalized-ket
    amplitudes. Photon number is conserved exactly; norm within 1e-12.
    """
    if u.dimension != state.mode_count:
        raise ValueError(
            f"{u.dimension}-mode unitary cannot act on a {state.mode_count}-mode state"
        )
    m = state.mode_count
    columns: list[list[tuple[int, complex]]] = [
        [(j, u.matrix[j, i]) for j in range(m) if abs(u.matrix[j, i]) > 1e-15]
        for i in range(m)
    ]
    out: dict[OccupationVector, complex] = {}
    vac = (0,) * m
    for occ, amp in state.terms.items():
        coeff = amp / math.sqrt(math.prod(math.factorial(n) for n in occ))
        partial: dict[OccupationVector, complex] = {vac: coeff}
        for mode, count in enumerate(occ):
            for _ in range(count):
                nxt: dict[OccupationVector, complex] = {}
                for pocc, pamp in partial.items():
                    for j, uji in columns[mode]:
                        nocc = pocc[:j] + (pocc[j] + 1,) + pocc[j + 1 :]
                        nxt[nocc] = nxt.get(nocc, 0j) + pamp * uji
                partial = nxt
        for pocc, pamp in partial.items():
            weight = pamp * math.sqrt(math.prod(math.factorial(n) for n in pocc))
            out[pocc] = out.get(pocc, 0j) + weight
    return PhotonicState(m, out)


def measure(state: PhotonicState, detected_modes: Iterable[int]) -> list[MeasurementOutcome]:
    """Enumerate photon-number detection outcomes on the given modes.

    Ideal photon-number-resolving detection: every pattern with nonzero
    probability is returned, the post state is renormalized and re-indexed
    over the surviving modes (ascending original order), and the probabilities
    sum to 1 within 1e-10.
    """
    detected = [int(m) for m in detected_modes]
    if not detected:
        raise ValueError("no modes to detect")
    if len(set(detected)) != len(detected):
        raise ValueError(f"detected modes {detected} collide")
    if any(m < 0 or m >= state.mode_count for m in detected):
        raise ValueError(f"detected modes {detected} out of range")
    detected_sorted = sorted(detected)
    detected_set = set(detected)
    surviving = [m for m in range(state.mode_count) if m not in detected_set]

    groups: dict[tuple[int, ...], dict[OccupationVector, complex]] = {}
    for occ, amp in state.terms.items():
        key = tuple(occ[m] for m in detected_sorted)
        rest = tuple(occ[m] for m in surviving)
        bucket = groups.setdefault(key, {})
        bucket[rest] = bucket.get(rest, 0j) + amp

    outcomes = []
    for key in sorted(groups):
        component = groups[key]
        prob = sum(abs(a) ** 2 for a in component.values())
        if prob < 1e-24:
            continue
        scale = 1.0 / math.sqrt(prob)
        post = PhotonicState(
            len(surviving), {occ: amp * scale for occ, amp in component.items()}
        )
        pattern = dict(zip(detected_sorted, key))
        outcomes.append(MeasurementOutcome(pattern, prob, post))
    return outcomes
