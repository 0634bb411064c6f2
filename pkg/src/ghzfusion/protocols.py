"""Planners and evaluators for fusion-based GHZ-like state generation.

Two built-in schemes. The general scheme turns N-1 (N odd; N when even)
two-qubit resources of arbitrary angle alpha into the N-qubit target in two
stages: pairwise similar-state fusions at theta = beta1, then standard
type-I fusions. The efficient scheme chains N-1 tailored two-qubit resources
|G_2(beta1)> through standard type-I gates, with
beta1 = arctan(tan^(1/(N-1)) gamma), so every fusion succeeds with
probability at least 1/2.

A plan is a binary fusion tree. Internal nodes are either standard gates
("I"/"II", theta fixed at pi/4) or similar-state procedures
("similar-I"/"similar-II", theta free); a plain modified gate would give its
two success branches different output angles, which would make a plan's
angle bookkeeping ambiguous, so it is not allowed as a node.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

from .fock import (
    PhotonicState,
    QubitEncoding,
    SchmidtState,
    extract_ghz_form,
    make_ghz_like,
    tensor,
)
from .fusion import (
    FusionKind,
    FusionSpec,
    OutcomeLabel,
    apply_pending_corrections,
    classify_pattern,
    detected_positions,
    fuse_similar,
    fuse_symbolic,
    fusion_circuit,
    similar_success_probability,
    standard_success_probability,
    total_success,
)
from .optics import apply, measure, qubit_x

_QUARTER_PI = math.pi / 4

#: gate name -> (fusion kind, uses the similar-state procedure)
_GATES = {
    "I": (FusionKind.TYPE_I, False),
    "II": (FusionKind.TYPE_II, False),
    "similar-I": (FusionKind.TYPE_I, True),
    "similar-II": (FusionKind.TYPE_II, True),
}


@dataclass(frozen=True)
class ResourceLeaf:
    """A pre-generated GHZ-like resource state."""

    n_qubits: int
    angle: float

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("resource needs at least one qubit")
        if not 0.0 <= self.angle <= _QUARTER_PI + 1e-12:
            raise ValueError(f"resource angle {self.angle} outside [0, pi/4]")


@dataclass(frozen=True)
class FusionNode:
    """An internal plan node: fuse the two child states."""

    gate: str
    theta: float
    left: "PlanNode"
    right: "PlanNode"

    def __post_init__(self):
        if self.gate not in _GATES:
            raise ValueError(f"unknown gate {self.gate!r} (use {sorted(_GATES)})")
        if not -1e-12 <= self.theta <= _QUARTER_PI + 1e-12:
            raise ValueError(f"gate angle {self.theta} outside [0, pi/4]")
        _, similar = _GATES[self.gate]
        if not similar and abs(self.theta - _QUARTER_PI) > 1e-12:
            raise ValueError(
                "plain fusion nodes must be standard (theta = pi/4); "
                "use a similar-state node for tunable angles"
            )


PlanNode = Union[ResourceLeaf, FusionNode]


@dataclass(frozen=True)
class NodeEval:
    """One fusion node resolved: input angles, output, success probability."""

    index: int
    gate: str
    theta: float
    left_angle: float
    right_angle: float
    out_angle: float
    out_qubits: int
    probability: float


@dataclass(frozen=True)
class PlanMetrics:
    p_gen: float
    fusion_count: int
    resource_count: int
    nodes: tuple[NodeEval, ...]


@dataclass(frozen=True)
class TrialStats:
    trials: int
    successes: int
    p_hat: float
    std_err: float
    seed: int


def node_probability_and_angle(gate: str, theta: float,
                               left: tuple[int, float], right: tuple[int, float]
                               ) -> tuple[float, int, float]:
    """Resolve one fusion node: (success probability, output qubits, output angle).

    The probability comes from the closed-form law (exact at the pi/4
    endpoints where the branch enumeration would lose an ulp); the
    enumeration supplies the output angle and must agree within 1e-12.
    """
    kind, similar = _GATES[gate]
    nl, al = left
    nr, ar = right
    sa, sb = SchmidtState(nl, al), SchmidtState(nr, ar)
    if similar:
        outs = fuse_similar(sa, sb, theta, kind)
        prob = similar_success_probability(al)
    else:
        outs = fuse_symbolic(sa, sb, FusionSpec(kind, theta))
        prob = standard_success_probability(al, ar)
    successes = [o for o in outs if o.label is not OutcomeLabel.FAILURE]
    if not successes:
        raise ValueError("fusion node has no successful branch (zero-angle inputs?)")
    angles = {round(o.output.angle, 12) for o in successes}
    if len(angles) > 1:
        raise ValueError(f"node success branches disagree on the output angle: {angles}")
    if abs(total_success(outs) - prob) > 1e-12:
        raise AssertionError("outcome enumeration disagrees with the probability law")
    n_out = nl + nr - (1 if kind is FusionKind.TYPE_I else 2)
    return prob, n_out, successes[0].output.angle


def _resolve(node: PlanNode, evals: list[NodeEval]) -> tuple[int, float]:
    if isinstance(node, ResourceLeaf):
        return node.n_qubits, node.angle
    left = _resolve(node.left, evals)
    right = _resolve(node.right, evals)
    prob, n_out, out_angle = node_probability_and_angle(node.gate, node.theta, left, right)
    evals.append(NodeEval(len(evals), node.gate, node.theta,
                          left[1], right[1], out_angle, n_out, prob))
    return n_out, out_angle


def _leaves(node: PlanNode) -> Iterator[ResourceLeaf]:
    if isinstance(node, ResourceLeaf):
        yield node
    else:
        yield from _leaves(node.left)
        yield from _leaves(node.right)


@dataclass(frozen=True)
class ProtocolPlan:
    """A binary fusion tree producing |G_N(gamma)> from resource states."""

    target_n: int
    target_angle: float
    scheme: str
    tree: PlanNode
    beta1: float | None = None
    resources: tuple[ResourceLeaf, ...] = field(init=False)

    def __post_init__(self):
        evals: list[NodeEval] = []
        n, angle = _resolve(self.tree, evals)
        if n != self.target_n:
            raise ValueError(f"tree yields {n} qubits, target is {self.target_n}")
        if abs(math.tan(angle) - math.tan(self.target_angle)) > 1e-12:
            raise ValueError(
                f"tree yields angle {angle}, target is {self.target_angle}"
            )
        object.__setattr__(self, "resources", tuple(_leaves(self.tree)))


def plan_efficient(n_qubits: int, gamma: float) -> ProtocolPlan:
    """Chain of standard type-I fusions over N-1 resources |G_2(beta1)>.

    beta1 = arctan(tan^(1/(N-1)) gamma). At gamma = pi/4 the chain uses Bell
    pairs and p_gen = 2^(2-N).
    """
    _check_target(n_qubits, gamma, minimum=2)
    beta1 = math.atan(math.tan(gamma) ** (1.0 / (n_qubits - 1)))
    leaf = ResourceLeaf(2, beta1)
    tree: PlanNode = leaf
    for _ in range(n_qubits - 2):
        tree = FusionNode("I", _QUARTER_PI, tree, leaf)
    return ProtocolPlan(n_qubits, gamma, "efficient", tree, beta1)


def plan_general(n_qubits: int, gamma: float, alpha: float) -> ProtocolPlan:
    """Two-stage scheme over two-qubit resources |G_2(alpha)> of arbitrary angle.

    Stage 1 fuses the resources pairwise with the similar-state procedure at
    theta = beta1; stage 2 merges the intermediates with standard type-I
    gates. Odd N: N-1 resources, beta1 = arctan(tan^(2/(N-1)) gamma). Even N:
    N resources, the last pair fused with the type-II variant (its two-qubit
    output restores the count), beta1 = arctan(tan^(2/N) gamma).
    """
    _check_target(n_qubits, gamma, minimum=3)
    if not 0.0 < alpha <= _QUARTER_PI + 1e-12:
        raise ValueError(f"resource angle {alpha} outside (0, pi/4]")
    leaf = ResourceLeaf(2, alpha)
    if n_qubits % 2:
        pairs = (n_qubits - 1) // 2
        beta1 = math.atan(math.tan(gamma) ** (2.0 / (n_qubits - 1)))
        stage1 = [FusionNode("similar-I", beta1, leaf, leaf) for _ in range(pairs)]
    else:
        pairs = n_qubits // 2
        beta1 = math.atan(math.tan(gamma) ** (2.0 / n_qubits))
        stage1 = [FusionNode("similar-I", beta1, leaf, leaf) for _ in range(pairs - 1)]
        stage1.append(FusionNode("similar-II", beta1, leaf, leaf))
    tree = stage1[0]
    for nxt in stage1[1:]:
        tree = FusionNode("I", _QUARTER_PI, tree, nxt)
    return ProtocolPlan(n_qubits, gamma, "general", tree, beta1)


def custom_plan(tree: PlanNode, scheme: str = "custom") -> ProtocolPlan:
    """Wrap an arbitrary fusion tree; target qubits and angle are derived."""
    evals: list[NodeEval] = []
    n, angle = _resolve(tree, evals)
    return ProtocolPlan(n, angle, scheme, tree)


def _check_target(n_qubits: int, gamma: float, minimum: int) -> None:
    if n_qubits < minimum:
        raise ValueError(f"target needs at least {minimum} qubits, got {n_qubits}")
    if not 0.0 < gamma <= _QUARTER_PI + 1e-12:
        raise ValueError(
            f"target angle {gamma} outside (0, pi/4] (a zero-angle target is a "
            "product state; no fusion plan is needed)"
        )


def evaluate_plan(plan: ProtocolPlan) -> PlanMetrics:
    """Walk the tree and multiply per-node fusion success probabilities."""
    evals: list[NodeEval] = []
    _resolve(plan.tree, evals)
    p_gen = 1.0
    for ev in evals:
        p_gen *= ev.probability
    return PlanMetrics(p_gen, len(evals), len(plan.resources), tuple(evals))


def simulate_plan(plan: ProtocolPlan, trials: int, seed: int) -> TrialStats:
    """Monte Carlo with restart-on-failure semantics.

    One uniform per (trial, node) selects the node's outcome from a
    success-first partition of [0, 1); any draw in the failure region aborts
    the trial. Successful trials end in the plan's output state, whose
    canonical angle must match the target within 1e-9 (all success branches
    agree on it after feed-forward, which plan validation guarantees).
    Counter-based RNG keyed by the seed makes runs reproducible.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    metrics = evaluate_plan(plan)
    final_angle = metrics.nodes[-1].out_angle if metrics.nodes else plan.resources[0].angle
    if abs(final_angle - plan.target_angle) > 1e-9:
        raise AssertionError(
            f"plan output angle {final_angle} misses target {plan.target_angle}"
        )
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    if metrics.nodes:
        probs = np.array([ev.probability for ev in metrics.nodes])
        draws = rng.random((trials, len(probs)))
        successes = int(np.all(draws < probs, axis=1).sum())
    else:
        successes = trials
    p_hat = successes / trials
    std_err = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return TrialStats(trials, successes, p_hat, std_err, int(seed))


# ---------------------------------------------------------------------------
# Full Fock-space execution (the end-to-end oracle for small plans)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FockExecution:
    """Result of running a whole plan in the Fock space."""

    probability: float
    output: SchmidtState
    paths: int


def run_plan_fock(plan: ProtocolPlan, atol: float = 1e-9) -> FockExecution:
    """Execute every fusion of the plan exactly, conditioning on success.

    Every leaf is instantiated as a dual-rail Fock state, every gate as a
    mode circuit; detection outcomes are enumerated and only success patterns
    kept, with feed-forward corrections applied in the mode picture. The
    summed path probability must match evaluate_plan and every path must end
    in the same canonical state. Intended for small plans (<= 12 modes).
    """
    branches = _execute_fock(plan.tree)
    probability = sum(p for p, _, _ in branches)
    angles = []
    for _, state, enc in branches:
        ext = extract_ghz_form(state, enc)
        if not ext.pauli_frame.is_identity or ext.phase_sign != 1:
            raise AssertionError("a path ended with unapplied corrections")
        angles.append(ext.angle)
    spread = max(angles) - min(angles)
    if spread > atol:
        raise AssertionError(f"paths disagree on the output angle by {spread:.3e}")
    if abs(angles[0] - plan.target_angle) > atol:
        raise AssertionError(
            f"output angle {angles[0]} misses target {plan.target_angle}"
        )
    output = SchmidtState(plan.target_n, angles[0])
    return FockExecution(probability, output, len(branches))


def _execute_fock(node: PlanNode) -> list[tuple[float, PhotonicState, QubitEncoding]]:
    if isinstance(node, ResourceLeaf):
        state, enc = make_ghz_like(node.n_qubits, node.angle)
        return [(1.0, state, enc)]
    kind, similar = _GATES[node.gate]
    spec = FusionSpec(kind, node.theta)
    results = []
    for p_left, s_left, e_left in _execute_fock(node.left):
        for p_right, s_right, e_right in _execute_fock(node.right):
            combined = tensor(s_left, s_right)
            enc = QubitEncoding(e_left.pairs + e_right.shifted(s_left.mode_count).pairs)
            total = combined.mode_count
            if similar:
                # The procedure starts by applying X to every qubit of the
                # first state, a rail swap per qubit.
                for pair in enc.pairs[: e_left.n_qubits]:
                    combined = apply(qubit_x(pair, total), combined)
            qa, qb = e_left.n_qubits - 1, e_left.n_qubits
            results.extend(
                (p_left * p_right * p, state, out_enc)
                for p, state, out_enc in _fuse_in_fock(combined, enc, qa, qb, spec)
            )
    return results


def _fuse_in_fock(state: PhotonicState, enc: QubitEncoding, qa: int, qb: int,
                  spec: FusionSpec) -> list[tuple[float, PhotonicState, QubitEncoding]]:
    """Apply one fusion gate to qubits qa, qb of a Fock state; keep success
    branches with corrections applied; re-index modes after detection."""
    za, oa = enc.pairs[qa]
    zb, ob = enc.pairs[qb]
    gate_modes = (za, oa, zb, ob)
    evolved = apply(fusion_circuit(spec, total=state.mode_count, gate_modes=gate_modes), state)
    detected = sorted(gate_modes[i] for i in detected_positions(spec))
    local = {g: i + 1 for i, g in enumerate(gate_modes)}

    def new_index(mode: int) -> int:
        return mode - bisect.bisect_left(detected, mode)

    out_pairs = []
    for q, pair in enumerate(enc.pairs):
        if q == qa:
            if spec.kind is FusionKind.TYPE_I:
                out_pairs.append((new_index(zb), new_index(oa)))  # fused qubit c
        elif q != qb:
            out_pairs.append((new_index(pair[0]), new_index(pair[1])))
    out_enc = QubitEncoding(tuple(out_pairs))

    results = []
    for mo in measure(evolved, detected):
        counts = {local[g]: k for g, k in mo.pattern.items()}
        label, _ = classify_pattern(spec, counts)
        if label is OutcomeLabel.FAILURE:
            continue
        post, _ = apply_pending_corrections(mo.post_state, out_enc)
        results.append((mo.probability, post, out_enc))
    return results


# ---------------------------------------------------------------------------
# Plan serialization and topology enumeration
# ---------------------------------------------------------------------------

def _node_to_obj(node: PlanNode):
    if isinstance(node, ResourceLeaf):
        return {"n": node.n_qubits, "angle": node.angle}
    return {
        "gate": node.gate,
        "theta": node.theta,
        "children": [_node_to_obj(node.left), _node_to_obj(node.right)],
    }


def _node_from_obj(obj) -> PlanNode:
    if "children" in obj:
        children = obj["children"]
        if len(children) != 2:
            raise ValueError("fusion nodes take exactly two children")
        return FusionNode(obj["gate"], float(obj["theta"]),
                          _node_from_obj(children[0]), _node_from_obj(children[1]))
    return ResourceLeaf(int(obj["n"]), float(obj["angle"]))


def plan_to_json(plan: ProtocolPlan, indent: int | None = None) -> str:
    obj = {
        "target_n": plan.target_n,
        "target_angle": plan.target_angle,
        "scheme": plan.scheme,
        "beta1": plan.beta1,
        "tree": _node_to_obj(plan.tree),
    }
    return json.dumps(obj, indent=indent)


def plan_from_json(text: str) -> ProtocolPlan:
    obj = json.loads(text)
    return ProtocolPlan(
        int(obj["target_n"]),
        float(obj["target_angle"]),
        str(obj.get("scheme", "custom")),
        _node_from_obj(obj["tree"]),
        obj.get("beta1"),
    )


def enumerate_fusion_trees(leaves: Sequence[ResourceLeaf],
                           gate: str = "I") -> list[ProtocolPlan]:
    """All distinct binary fusion trees over the given leaves (at most 6),
    using one standard gate kind throughout. The output angle is
    topology-independent for standard gates; the success probability is not,
    which is what this utility lets callers measure."""
    if not 1 <= len(leaves) <= 6:
        raise ValueError("exhaustive enumeration is limited to 1..6 leaves")

    def trees(indices: tuple[int, ...]) -> list[PlanNode]:
        if len(indices) == 1:
            return [leaves[indices[0]]]
        first, rest = indices[0], indices[1:]
        out: list[PlanNode] = []
        for mask in range(1 << len(rest)):
            left = (first,) + tuple(r for i, r in enumerate(rest) if mask >> i & 1)
            right = tuple(r for i, r in enumerate(rest) if not mask >> i & 1)
            if not right:
                continue
            for tl in trees(left):
                for tr in trees(right):
                    out.append(FusionNode(gate, _QUARTER_PI, tl, tr))
        return out

    return [custom_plan(t) for t in trees(tuple(range(len(leaves))))]
