"""Dual-rail Fock states, GHZ-like state constructors, and canonical Schmidt form.

A logical qubit is one photon shared between two optical modes: |0> = |10>>
and |1> = |01>> (double brackets denote physical Fock kets). A GHZ-like state
is cos(angle)|0...0> + sign*sin(angle)|1...1> with Schmidt angle in [0, pi/4].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping

OccupationVector = tuple[int, ...]

#: Amplitudes below this magnitude are dropped after every state operation.
PRUNE_THRESHOLD = 1e-12

_NORM_SLACK = 1e-10


class NotGHZLikeError(ValueError):
    """A state's support falls outside the two GHZ-form basis kets."""

    def __init__(self, message: str, residual_weight: float = 0.0):
        super().__init__(f"{message} (residual weight {residual_weight:.3e})")
        self.residual_weight = residual_weight


@dataclass(frozen=True, eq=False)
class PhotonicState:
    """Superposition over Fock occupation vectors with complex amplitudes.

    Amplitudes are stored for *normalized* Fock kets, so the squared norm is
    the plain sum of |amplitude|^2 over terms. Terms with magnitude below
    PRUNE_THRESHOLD are removed at construction; the result must have squared
    norm in (0, 1 + 1e-10].
    """

    mode_count: int
    terms: Mapping[OccupationVector, complex]

    def __post_init__(self):
        pruned: dict[OccupationVector, complex] = {}
        for occ, amp in self.terms.items():
            occ = tuple(int(n) for n in occ)
            if len(occ) != self.mode_count:
                raise ValueError(
                    f"occupation vector {occ} does not match mode count {self.mode_count}"
                )
            if any(n < 0 for n in occ):
                raise ValueError(f"negative photon count in {occ}")
            amp = complex(amp)
            if abs(amp) >= PRUNE_THRESHOLD:
                pruned[occ] = amp
        if not pruned:
            raise ValueError("state has no support above the prune threshold")
        norm_sq = sum(abs(a) ** 2 for a in pruned.values())
        if norm_sq > 1.0 + _NORM_SLACK:
            raise ValueError(f"squared norm {norm_sq} exceeds 1")
        object.__setattr__(self, "terms", pruned)

    @property
    def norm_squared(self) -> float:
        return sum(abs(a) ** 2 for a in self.terms.values())

    def amplitude(self, occ: OccupationVector) -> complex:
        return self.terms.get(tuple(occ), 0j)

    def __repr__(self) -> str:  # keep test failures readable
        body = " + ".join(
            f"({amp:.6g})|{''.join(map(str, occ))}>>" for occ, amp in sorted(self.terms.items())
        )
        return f"PhotonicState({self.mode_count} modes: {body})"


@dataclass(frozen=True)
class QubitEncoding:
    """Ordered dual-rail mode pairs: pairs[i] = (|0> rail, |1> rail) of qubit i."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        flat = [m for pair in self.pairs for m in pair]
        if len(set(flat)) != len(flat):
            raise ValueError(f"encoding reuses a mode: {self.pairs}")
        if any(m < 0 for m in flat):
            raise ValueError(f"negative mode index in {self.pairs}")
        object.__setattr__(self, "pairs", tuple((int(z), int(o)) for z, o in self.pairs))

    @property
    def n_qubits(self) -> int:
        return len(self.pairs)

    def modes(self) -> set[int]:
        return {m for pair in self.pairs for m in pair}

    def shifted(self, offset: int) -> "QubitEncoding":
        return QubitEncoding(tuple((z + offset, o + offset) for z, o in self.pairs))

    def validate_for(self, mode_count: int) -> None:
        if self.pairs and max(self.modes()) >= mode_count:
            raise ValueError(f"encoding {self.pairs} exceeds mode count {mode_count}")


def standard_encoding(n: int, first_mode: int = 0) -> QubitEncoding:
    """Consecutive rail pairs: qubit i on modes (first+2i, first+2i+1)."""
    return QubitEncoding(tuple((first_mode + 2 * i, first_mode + 2 * i + 1) for i in range(n)))


@dataclass(frozen=True)
class PauliFrame:
    """Pending X/Z corrections per qubit, tracked classically (feed-forward)."""

    x: tuple[bool, ...]
    z: tuple[bool, ...]

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ValueError("x and z records must cover the same qubits")
        object.__setattr__(self, "x", tuple(bool(v) for v in self.x))
        object.__setattr__(self, "z", tuple(bool(v) for v in self.z))

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliFrame":
        return cls((False,) * n_qubits, (False,) * n_qubits)

    @classmethod
    def build(cls, n_qubits: int, *, x_all: bool = False, z_first: bool = False) -> "PauliFrame":
        x = (x_all,) * n_qubits
        z = tuple(z_first and i == 0 for i in range(n_qubits))
        return cls(x, z)

    @property
    def n_qubits(self) -> int:
        return len(self.x)

    @property
    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    @property
    def x_count(self) -> int:
        return sum(self.x)

    @property
    def z_count(self) -> int:
        return sum(self.z)

    def describe(self) -> str:
        if self.is_identity:
            return "none"
        ops = []
        if all(self.x):
            ops.append("X(all)")
        else:
            ops.extend(f"X(q{i})" for i, v in enumerate(self.x) if v)
        ops.extend(f"Z(q{i})" for i, v in enumerate(self.z) if v)
        return " ".join(ops)


@dataclass(frozen=True)
class SchmidtState:
    """Symbolic n-qubit GHZ-like state with a pending Pauli frame.

    The physical state is frame * (cos(angle)|0...0> + phase_sign*sin(angle)|1...1>),
    up to an unobservable global phase.
    """

    n_qubits: int
    angle: float
    phase_sign: int = 1
    pauli_frame: PauliFrame = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("a GHZ-like state needs at least one qubit")
        if not -1e-12 <= self.angle <= math.pi / 4 + 1e-12:
            raise ValueError(f"Schmidt angle {self.angle} outside [0, pi/4]")
        if self.phase_sign not in (1, -1):
            raise ValueError("phase_sign must be +1 or -1")
        if self.pauli_frame is None:
            object.__setattr__(self, "pauli_frame", PauliFrame.identity(self.n_qubits))
        if self.pauli_frame.n_qubits != self.n_qubits:
            raise ValueError("Pauli frame does not cover all qubits")

    def amplitude_pair(self) -> tuple[float, float]:
        """(all-zeros, all-ones) amplitudes with the pending frame folded in.

        Any single Z flips the relative sign; X on *all* qubits swaps the two
        components. A frame with X on a proper subset takes the state out of
        the GHZ family and is rejected.
        """
        xc = self.pauli_frame.x_count
        if xc not in (0, self.n_qubits):
            raise NotGHZLikeError(
                "pending X on a proper subset of qubits leaves the GHZ family"
            )
        c0 = math.cos(self.angle)
        c1 = self.phase_sign * math.sin(self.angle)
        if self.pauli_frame.z_count % 2:
            c1 = -c1
        if xc:
            c0, c1 = c1, c0
        return c0, c1

    def describe(self) -> str:
        return (
            f"|G_{self.n_qubits}({self.angle:.6g})>"
            f"{' sign=-1' if self.phase_sign < 0 else ''}"
            f"{'' if self.pauli_frame.is_identity else ' frame: ' + self.pauli_frame.describe()}"
        )


def make_ghz_like(n: int, angle: float, sign: int = 1) -> tuple[PhotonicState, QubitEncoding]:
    """Build the dual-rail Fock state cos(angle)|10>^n + sign*sin(angle)|01>^n.

    Args:
        n: qubit count (>= 1); the state spans 2n modes.
        angle: Schmidt angle in [0, pi/4].
        sign: relative phase of the all-ones component, +1 or -1.

    Returns:
        The normalized state and its qubit encoding (rails (2i, 2i+1)).
    """
    if n < 1:
        raise ValueError("qubit count must be at least 1")
    if not 0.0 <= angle <= math.pi / 4 + 1e-12:
        raise ValueError(f"Schmidt angle {angle} outside [0, pi/4]")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    occ_zero = (1, 0) * n
    occ_one = (0, 1) * n
    terms = {occ_zero: complex(math.cos(angle)), occ_one: complex(sign * math.sin(angle))}
    return PhotonicState(2 * n, terms), standard_encoding(n)


def tensor(a: PhotonicState, b: PhotonicState) -> PhotonicState:
    """Tensor product; b's modes are appended after a's."""
    terms: dict[OccupationVector, complex] = {}
    for occ_a, amp_a in a.terms.items():
        for occ_b, amp_b in b.terms.items():
            terms[occ_a + occ_b] = amp_a * amp_b
    return PhotonicState(a.mode_count + b.mode_count, terms)


def canonical_ghz_amplitudes(
    c0: complex, c1: complex, atol: float = 1e-10
) -> tuple[float, int, bool]:
    """Split an (all-zeros, all-ones) amplitude pair into canonical Schmidt data.

    Returns (angle, sign, x_all): angle in [0, pi/4]; if |c1| > |c0| the
    components are swapped and x_all is True (an X on every qubit undoes the
    relabeling); the global phase is fixed so the larger component is positive
    real, and sign is the leftover relative phase, which must be +-1.
    """
    a0, a1 = complex(c0), complex(c1)
    norm = math.hypot(abs(a0), abs(a1))
    if norm == 0.0:
        raise ValueError("zero amplitude pair")
    a0 /= norm
    a1 /= norm
    x_all = abs(a1) > abs(a0)
    if x_all:
        a0, a1 = a1, a0
    phase = cmath.exp(-1j * cmath.phase(a0))
    a0 *= phase
    a1 *= phase
    if abs(a1.imag) > atol:
        raise NotGHZLikeError(
            "relative phase is not +-1", residual_weight=abs(a1.imag) ** 2
        )
    sign = 1 if a1.real >= 0.0 else -1
    angle = math.atan2(abs(a1.real), a0.real)
    return angle, sign, x_all


def extract_ghz_form(
    state: PhotonicState, enc: QubitEncoding, atol: float = 1e-10
) -> SchmidtState:
    """Invert make_ghz_like: recover the canonical Schmidt form of a Fock state.

    The state must be supported on the two occupation vectors with every
    qubit's |0> rail occupied or every |1> rail occupied, up to `atol` in
    probability weight. A dominant all-ones component is recorded as an
    X-on-all-qubits relabeling in the Pauli frame; a relative phase of -1
    lands in phase_sign; the global phase is discarded.
    """
    enc.validate_for(state.mode_count)
    if 2 * enc.n_qubits != state.mode_count:
        raise ValueError("encoding must cover every mode of the state")
    occ = [0] * state.mode_count
    for z, _ in enc.pairs:
        occ[z] = 1
    occ_zero = tuple(occ)
    occ = [0] * state.mode_count
    for _, o in enc.pairs:
        occ[o] = 1
    occ_one = tuple(occ)

    c0 = state.amplitude(occ_zero)
    c1 = state.amplitude(occ_one)
    residual = state.norm_squared - abs(c0) ** 2 - abs(c1) ** 2
    if residual > atol:
        raise NotGHZLikeError("support outside the GHZ basis vectors", residual)

    angle, sign, x_all = canonical_ghz_amplitudes(c0, c1, atol=atol)
    frame = PauliFrame.build(enc.n_qubits, x_all=x_all)
    return SchmidtState(enc.n_qubits, angle, sign, frame)
