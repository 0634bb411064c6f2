"""Standard and modified type-I/type-II fusion gates.

Gate geometry. The two input qubits enter as four modes, numbered 1..4 in
gate-local order: (1, 2) are the |0> and |1> rails of qubit a, (3, 4) those
of qubit b. The type-I gate couples modes 1 and 4 on a variable beam splitter
VBS(theta) and detects both; the surviving rails form the fused qubit, with
mode 3 as its |0> rail and mode 2 as its |1> rail. The type-II gate adds a
balanced splitter on modes (2, 3) and detects all four modes. theta = pi/4
is the standard gate.

Success branches. Detecting one photon in mode 1 (type-I), or a coincidence
in {1,2} or {1,3} (type-II), heralds the branch with output amplitudes
(cos th * cos a * cos b, sin th * sin a * sin b), probability
P1 = cos^2 th cos^2 a cos^2 b + sin^2 th sin^2 a sin^2 b. The complementary
patterns (mode 4; {2,4} or {3,4}) herald (sin th cos a cos b,
-cos th sin a sin b) with P2 = sin^2 th cos^2 a cos^2 b +
cos^2 th sin^2 a sin^2 b. The total P1 + P2 = (1 + cos 2a cos 2b)/2 is
independent of theta. Failures leave one of the separable products A0*B1
or A1*B0 and force a protocol restart, so only the branch tag is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .fock import (
    PauliFrame,
    PhotonicState,
    QubitEncoding,
    SchmidtState,
    canonical_ghz_amplitudes,
    extract_ghz_form,
    tensor,
)
from .optics import ModeUnitary, apply, embed, measure, qubit_x, qubit_z, vbs

#: Outcomes below this probability are omitted from enumerations.
PROB_CUTOFF = 1e-24


class FusionKind(Enum):
    TYPE_I = "I"
    TYPE_II = "II"


class OutcomeLabel(Enum):
    SUCCESS_A = "success-A"  # P1 branch family (cos-theta weighted)
    SUCCESS_B = "success-B"  # P2 branch family (sin-theta weighted)
    FAILURE = "failure"


class SeparableBranch(Enum):
    A0B1 = "A0B1"
    A1B0 = "A1B0"


@dataclass(frozen=True)
class FusionSpec:
    """Gate kind plus the variable-beam-splitter angle (pi/4 = standard)."""

    kind: FusionKind
    theta: float = math.pi / 4

    def __post_init__(self):
        if not isinstance(self.kind, FusionKind):
            raise ValueError(f"unknown fusion kind {self.kind!r}")
        if not -1e-12 <= self.theta <= math.pi / 4 + 1e-12:
            raise ValueError(f"gate angle {self.theta} outside [0, pi/4]")

    @property
    def is_standard(self) -> bool:
        return abs(self.theta - math.pi / 4) <= 1e-12

    @property
    def qubits_consumed(self) -> int:
        return 1 if self.kind is FusionKind.TYPE_I else 2


@dataclass(frozen=True)
class FusionOutcome:
    """A classified detection outcome of a fusion gate.

    `pattern` maps gate-local modes to photon counts (modes 1 and 4 for
    type-I, 1..4 for type-II). On success, `output` is the fused state and
    `corrections` the Pauli frame relating it to the raw heralded state; on
    failure, `branch` names the surviving product state.
    """

    label: OutcomeLabel
    pattern: dict[int, int]
    probability: float
    output: SchmidtState | None = None
    branch: SeparableBranch | None = None
    corrections: PauliFrame | None = None


def standard_success_probability(alpha: float, beta: float) -> float:
    """Total fusion success probability (1 + cos 2a cos 2b)/2, any theta."""
    return 0.5 * (1.0 + math.cos(2 * alpha) * math.cos(2 * beta))


def similar_success_probability(alpha: float) -> float:
    """Success probability sin^2(2a)/2 of the similar-state procedure."""
    return math.sin(2 * alpha) ** 2 / 2.0


def total_success(outcomes: list[FusionOutcome]) -> float:
    return sum(o.probability for o in outcomes if o.label is not OutcomeLabel.FAILURE)


def _schmidt_from_pair(n_qubits: int, c0: float, c1: float) -> SchmidtState:
    """State with the given (all-zeros, all-ones) amplitudes, up to global phase."""
    angle, sign, x_all = canonical_ghz_amplitudes(c0, c1)
    return SchmidtState(n_qubits, angle, sign, PauliFrame.build(n_qubits, x_all=x_all))


def _outcome_state(n_qubits: int, c0: float, c1: float) -> tuple[SchmidtState, PauliFrame]:
    """Canonicalize raw branch amplitudes into a clean state plus its frame.

    The relabeling and the sign are pushed into the frame (X on every qubit
    and/or a pending Z on qubit 0), so the output always reads
    cos(angle)|0..0> + sin(angle)|1..1> with angle in [0, pi/4].
    """
    angle, sign, x_all = canonical_ghz_amplitudes(c0, c1)
    frame = PauliFrame.build(n_qubits, x_all=x_all, z_first=sign < 0)
    return SchmidtState(n_qubits, angle, 1, frame), frame


def _success(label: OutcomeLabel, pattern: dict[int, int], c0: float, c1: float,
             n_out: int) -> FusionOutcome | None:
    prob = c0 * c0 + c1 * c1
    if prob < PROB_CUTOFF:
        return None
    state, frame = _outcome_state(n_out, c0, c1)
    return FusionOutcome(label, pattern, prob, output=state, corrections=frame)


def _failure(pattern: dict[int, int], prob: float,
             branch: SeparableBranch) -> FusionOutcome | None:
    if prob < PROB_CUTOFF:
        return None
    return FusionOutcome(OutcomeLabel.FAILURE, pattern, prob, branch=branch)


def fuse_symbolic(a: SchmidtState, b: SchmidtState,
                  spec: FusionSpec) -> list[FusionOutcome]:
    """Enumerate all detection outcomes of fusing a and b, analytically.

    Inputs may carry pending frames (they are folded into effective rail
    amplitudes first). The output has n + m - 1 qubits for type-I and
    n + m - 2 for type-II.
    """
    ca, sa = a.amplitude_pair()
    cb, sb = b.amplitude_pair()
    n_out = a.n_qubits + b.n_qubits - spec.qubits_consumed
    if n_out < 1:
        raise ValueError("fusing these states would leave no qubits")
    ct, st = math.cos(spec.theta), math.sin(spec.theta)
    cc = ca * cb  # feeds the all-zeros component
    ss = sa * sb  # feeds the all-ones component
    a1b0 = (sa * cb) ** 2  # weight of the A1*B0 failure product
    a0b1 = (ca * sb) ** 2
    hom = 2.0 * (st * ct) ** 2 * a0b1  # bunched pair after the VBS
    cross = math.cos(2 * spec.theta) ** 2 * a0b1  # {1,4} coincidence, 0 at pi/4
    outcomes: list[FusionOutcome | None]

    if spec.kind is FusionKind.TYPE_I:
        outcomes = [
            _success(OutcomeLabel.SUCCESS_A, {1: 1, 4: 0}, ct * cc, st * ss, n_out),
            _success(OutcomeLabel.SUCCESS_B, {1: 0, 4: 1}, st * cc, -ct * ss, n_out),
            _failure({1: 0, 4: 0}, a1b0, SeparableBranch.A1B0),
            _failure({1: 2, 4: 0}, hom, SeparableBranch.A0B1),
            _failure({1: 0, 4: 2}, hom, SeparableBranch.A0B1),
            _failure({1: 1, 4: 1}, cross, SeparableBranch.A0B1),
        ]
    else:
        r = 1.0 / math.sqrt(2.0)
        outcomes = [
            _success(OutcomeLabel.SUCCESS_A, {1: 1, 2: 1, 3: 0, 4: 0},
                     r * ct * cc, r * st * ss, n_out),
            _success(OutcomeLabel.SUCCESS_A, {1: 1, 2: 0, 3: 1, 4: 0},
                     -r * ct * cc, r * st * ss, n_out),
            _success(OutcomeLabel.SUCCESS_B, {1: 0, 2: 1, 3: 0, 4: 1},
                     r * st * cc, -r * ct * ss, n_out),
            _success(OutcomeLabel.SUCCESS_B, {1: 0, 2: 0, 3: 1, 4: 1},
                     -r * st * cc, -r * ct * ss, n_out),
            _failure({1: 2, 2: 0, 3: 0, 4: 0}, hom, SeparableBranch.A0B1),
            _failure({1: 0, 2: 0, 3: 0, 4: 2}, hom, SeparableBranch.A0B1),
            _failure({1: 1, 2: 0, 3: 0, 4: 1}, cross, SeparableBranch.A0B1),
            _failure({1: 0, 2: 2, 3: 0, 4: 0}, a1b0 / 2, SeparableBranch.A1B0),
            _failure({1: 0, 2: 0, 3: 2, 4: 0}, a1b0 / 2, SeparableBranch.A1B0),
        ]
    return [o for o in outcomes if o is not None]


def fusion_circuit(spec: FusionSpec, total: int = 4,
                   gate_modes: tuple[int, int, int, int] = (0, 1, 2, 3)) -> ModeUnitary:
    """Mode unitary of the gate, with gate-local modes 1..4 placed at the
    given global positions."""
    m1, m2, m3, m4 = gate_modes
    u = embed(vbs(spec.theta), [m1, m4], total)
    if spec.kind is FusionKind.TYPE_II:
        u = embed(vbs(math.pi / 4), [m2, m3], total) @ u
    return u


def detected_positions(spec: FusionSpec) -> tuple[int, ...]:
    """Indices into gate_modes that carry detectors."""
    return (0, 3) if spec.kind is FusionKind.TYPE_I else (0, 1, 2, 3)


_TYPE_II_SUCCESS_PAIRS = {(1, 2), (1, 3), (2, 4), (3, 4)}


def classify_pattern(spec: FusionSpec, counts: dict[int, int]
                     ) -> tuple[OutcomeLabel, SeparableBranch | None]:
    """Classify a gate-local detection pattern (modes 1..4 -> counts)."""
    if spec.kind is FusionKind.TYPE_I:
        n1, n4 = counts.get(1, 0), counts.get(4, 0)
        total = n1 + n4
        if total == 1:
            return (OutcomeLabel.SUCCESS_A if n1 else OutcomeLabel.SUCCESS_B), None
        if total == 0:
            return OutcomeLabel.FAILURE, SeparableBranch.A1B0
        return OutcomeLabel.FAILURE, SeparableBranch.A0B1
    hit = tuple(sorted(m for m in (1, 2, 3, 4) if counts.get(m, 0) > 0))
    singles = all(counts.get(m, 0) <= 1 for m in (1, 2, 3, 4))
    if singles and hit in _TYPE_II_SUCCESS_PAIRS:
        label = OutcomeLabel.SUCCESS_A if 1 in hit else OutcomeLabel.SUCCESS_B
        return label, None
    if counts.get(2, 0) == 2 or counts.get(3, 0) == 2:
        return OutcomeLabel.FAILURE, SeparableBranch.A1B0
    return OutcomeLabel.FAILURE, SeparableBranch.A0B1


def _instantiate_pair(c0: float, c1: float) -> PhotonicState:
    """Two-qubit dual-rail state c0|00> + c1|11> over four modes."""
    return PhotonicState(4, {(1, 0, 1, 0): complex(c0), (0, 1, 0, 1): complex(c1)})


# Oracle layout: two 2-qubit stand-ins over modes 0..7; the fused qubits are
# a's second (modes 2, 3) and b's first (modes 4, 5), so gate modes 1..4 sit
# at global (2, 3, 4, 5). The other two qubits act as the A-hat/B-hat
# spectators, which is all the gate algebra can distinguish.
_ORACLE_GATE_MODES = (2, 3, 4, 5)
_ORACLE_LOCAL = {g: i + 1 for i, g in enumerate(_ORACLE_GATE_MODES)}
_ORACLE_OUT_ENC = {
    FusionKind.TYPE_I: QubitEncoding(((0, 1), (3, 2), (4, 5))),
    FusionKind.TYPE_II: QubitEncoding(((0, 1), (2, 3))),
}


def _run_gate_circuit(pair_a: tuple[float, float], pair_b: tuple[float, float],
                      spec: FusionSpec):
    state = tensor(_instantiate_pair(*pair_a), _instantiate_pair(*pair_b))
    evolved = apply(fusion_circuit(spec, total=8, gate_modes=_ORACLE_GATE_MODES), state)
    detected = [_ORACLE_GATE_MODES[i] for i in detected_positions(spec)]
    return measure(evolved, detected)


def _local_counts(spec: FusionSpec, pattern: dict[int, int]) -> dict[int, int]:
    counts = {_ORACLE_LOCAL[g]: k for g, k in pattern.items()}
    if spec.kind is FusionKind.TYPE_I:
        counts = {1: counts.get(1, 0), 4: counts.get(4, 0)}
    return counts


def fuse_oracle(a: SchmidtState, b: SchmidtState,
                spec: FusionSpec) -> list[FusionOutcome]:
    """Run the fusion gate as an exact Fock-space circuit and classify outcomes.

    Builds dual-rail stand-ins, evolves them through the reconstructed
    circuit, enumerates detection patterns, and extracts each success state
    back to canonical Schmidt form. Must agree with fuse_symbolic within
    1e-10 on probabilities and output angles.
    """
    n_out = a.n_qubits + b.n_qubits - spec.qubits_consumed
    if n_out < 1:
        raise ValueError("fusing these states would leave no qubits")
    out_enc = _ORACLE_OUT_ENC[spec.kind]
    outcomes = []
    for mo in _run_gate_circuit(a.amplitude_pair(), b.amplitude_pair(), spec):
        counts = _local_counts(spec, mo.pattern)
        label, branch = classify_pattern(spec, counts)
        if label is OutcomeLabel.FAILURE:
            outcomes.append(FusionOutcome(label, counts, mo.probability, branch=branch))
            continue
        ext = extract_ghz_form(mo.post_state, out_enc)
        state, frame = _outcome_state(n_out, *ext.amplitude_pair())
        outcomes.append(FusionOutcome(label, counts, mo.probability,
                                      output=state, corrections=frame))
    return outcomes


def fuse_similar(a: SchmidtState, b: SchmidtState, theta_target: float,
                 kind: FusionKind = FusionKind.TYPE_I) -> list[FusionOutcome]:
    """Fuse two equal-angle states into a state of angle exactly theta_target.

    Procedure: apply Pauli X to every qubit of the first state (a rail swap
    per qubit in dual rail), fuse with a modified gate at theta_target, then
    apply the heralded corrections (on the sin-theta branch of the type-I
    gate: Z on one qubit, then X on every qubit). Every success branch then
    reads cos(theta)|0..0> + sin(theta)|1..1>, and the total success
    probability is sin^2(2 alpha)/2.

    Success outcomes carry the post-feed-forward state (angle exactly
    theta_target, empty frame); `corrections` records the output-side Paulis
    that were applied.
    """
    ca, sa = a.amplitude_pair()
    cb, sb = b.amplitude_pair()
    if abs(sa * cb - ca * sb) > 1e-12:
        raise ValueError(
            f"similar-state fusion needs equal Schmidt angles, got {a.angle} and {b.angle}"
        )
    spec = FusionSpec(kind, theta_target)
    flipped = _schmidt_from_pair(a.n_qubits, sa, ca)
    raw = fuse_symbolic(flipped, b, spec)
    n_out = a.n_qubits + b.n_qubits - spec.qubits_consumed
    outcomes = []
    for o in raw:
        if o.label is OutcomeLabel.FAILURE:
            outcomes.append(o)
            continue
        if abs(o.output.angle - theta_target) > 1e-9:
            raise AssertionError("similar-state branch missed the target angle")
        outcomes.append(FusionOutcome(o.label, o.pattern, o.probability,
                                      output=SchmidtState(n_out, theta_target),
                                      corrections=o.corrections))
    return outcomes


def fuse_similar_oracle(a: SchmidtState, b: SchmidtState, theta_target: float,
                        kind: FusionKind = FusionKind.TYPE_I) -> list[FusionOutcome]:
    """Fock-space execution of the similar-state procedure, corrections applied."""
    spec = FusionSpec(kind, theta_target)
    n_out = a.n_qubits + b.n_qubits - spec.qubits_consumed
    ca, sa = a.amplitude_pair()
    out_enc = _ORACLE_OUT_ENC[spec.kind]
    outcomes = []
    for mo in _run_gate_circuit((sa, ca), b.amplitude_pair(), spec):
        counts = _local_counts(spec, mo.pattern)
        label, branch = classify_pattern(spec, counts)
        if label is OutcomeLabel.FAILURE:
            outcomes.append(FusionOutcome(label, counts, mo.probability, branch=branch))
            continue
        post, applied = apply_pending_corrections(mo.post_state, out_enc)
        ext = extract_ghz_form(post, out_enc)
        if not ext.pauli_frame.is_identity or ext.phase_sign != 1:
            raise AssertionError("feed-forward left residual corrections")
        outcomes.append(FusionOutcome(
            label, counts, mo.probability,
            output=SchmidtState(n_out, ext.angle),
            corrections=PauliFrame.build(n_out, x_all=applied.x_count > 0,
                                         z_first=applied.z_count > 0),
        ))
    return outcomes


def apply_pending_corrections(state: PhotonicState, enc: QubitEncoding
                              ) -> tuple[PhotonicState, PauliFrame]:
    """Bring a heralded GHZ-like Fock state to canonical form.

    Applies X to every qubit when the all-ones component dominates, then Z to
    qubit 0 when the relative phase is -1 (the feed-forward a classical
    controller would perform). Returns the corrected state and the frame that
    was applied.
    """
    found = extract_ghz_form(state, enc)
    total = state.mode_count
    x_all = found.pauli_frame.x_count == enc.n_qubits
    if x_all:
        for pair in enc.pairs:
            state = apply(qubit_x(pair, total), state)
    z_first = found.phase_sign < 0
    if z_first:
        state = apply(qubit_z(enc.pairs[0], total), state)
    return state, PauliFrame.build(enc.n_qubits, x_all=x_all, z_first=z_first)
