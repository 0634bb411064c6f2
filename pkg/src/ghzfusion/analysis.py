"""Entanglement and resource analytics.

Von Neumann entropy of GHZ-like states, probability-weighted fusion entropy
and the standard-vs-modified entropy gap, resource-rate requirements, and
average photon budgets under perfectly resource-efficient multiplexing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .fock import SchmidtState
from .fusion import FusionKind, FusionSpec, OutcomeLabel, fuse_symbolic
from .protocols import (
    FusionNode,
    PlanNode,
    ProtocolPlan,
    ResourceLeaf,
    custom_plan,
    evaluate_plan,
    node_probability_and_angle,
    plan_efficient,
    plan_general,
)

_QUARTER_PI = math.pi / 4


def _xlog2x(p: float) -> float:
    return 0.0 if p <= 0.0 else p * math.log2(p)


def entropy(state: SchmidtState | float) -> float:
    """Entanglement entropy of a GHZ-like state, in bits.

    -(cos^2 g log2 cos^2 g + sin^2 g log2 sin^2 g) with 0 log 0 := 0.
    Accepts a SchmidtState or a bare Schmidt angle.
    """
    angle = state.angle if isinstance(state, SchmidtState) else float(state)
    if not -1e-12 <= angle <= _QUARTER_PI + 1e-12:
        raise ValueError(f"Schmidt angle {angle} outside [0, pi/4]")
    c2 = math.cos(angle) ** 2
    s2 = math.sin(angle) ** 2
    return -(_xlog2x(c2) + _xlog2x(s2))


def fusion_entropy(alpha: float, beta: float, spec: FusionSpec) -> float:
    """Average output entropy over the gate's successful outcomes,
    weighted by outcome probability (not renormalized by the success total)."""
    outs = fuse_symbolic(SchmidtState(2, alpha), SchmidtState(2, beta), spec)
    return sum(
        o.probability * entropy(o.output)
        for o in outs
        if o.label is not OutcomeLabel.FAILURE
    )


def entropy_gap(alpha: float, beta: float, theta: float) -> float:
    """Entropy cost of tunability: fusion entropy of the standard gate minus
    that of the modified gate at the given theta. Non-negative up to
    floating-point slack; zero at theta = pi/4."""
    std = fusion_entropy(alpha, beta, FusionSpec(FusionKind.TYPE_I))
    mod = fusion_entropy(alpha, beta, FusionSpec(FusionKind.TYPE_I, theta))
    return std - mod


@dataclass(frozen=True)
class RateQuery:
    """Resource-rate bookkeeping: f_t = f_r * p_gen / (N - 1)."""

    f_t: float
    f_r: float
    n_qubits: int
    p_gen: float

    def __post_init__(self):
        lhs = self.f_r * self.p_gen / (self.n_qubits - 1) if self.n_qubits > 1 else self.f_r
        if abs(lhs - self.f_t) > 1e-12 * max(1.0, abs(self.f_t)):
            raise ValueError("inconsistent rate query")


def _build_scheme_plan(n_qubits: int, gamma: float, scheme: str,
                       alpha: float | None = None) -> ProtocolPlan:
    if scheme == "efficient":
        return plan_efficient(n_qubits, gamma)
    if scheme == "general":
        if alpha is None:
            raise ValueError("the general scheme needs a resource angle alpha")
        return plan_general(n_qubits, gamma, alpha)
    raise ValueError(f"unknown scheme {scheme!r} (use 'efficient' or 'general')")


def resource_rate_query(n_qubits: int, gamma: float, scheme: str, f_t: float,
                        alpha: float | None = None) -> RateQuery:
    """Resource-state rate f_r needed to hit a target rate f_t of N-qubit outputs."""
    if f_t <= 0.0:
        raise ValueError("target rate must be positive")
    plan = _build_scheme_plan(n_qubits, gamma, scheme, alpha)
    p_gen = evaluate_plan(plan).p_gen
    denominator = max(n_qubits - 1, 1)
    f_r = f_t * denominator / p_gen
    return RateQuery(f_t, f_r, n_qubits, p_gen)


def required_resource_rate(n_qubits: int, gamma: float, scheme: str, f_t: float,
                           alpha: float | None = None) -> float:
    return resource_rate_query(n_qubits, gamma, scheme, f_t, alpha).f_r


@dataclass(frozen=True)
class SourceModel:
    """A probabilistic resource-state source: n0 photons per attempt,
    success probability p0."""

    n0: int
    p0: float
    label: str = ""

    def __post_init__(self):
        if self.n0 < 1:
            raise ValueError("a source consumes at least one photon")
        if not 0.0 < self.p0 <= 1.0:
            raise ValueError(f"source probability {self.p0} outside (0, 1]")


#: Default source costs by resource qubit count. Non-maximally entangled
#: resources are billed like their maximally entangled counterparts (a lower
#: bound; they are typically easier to make). Override per call as needed.
DEFAULT_SOURCES: Mapping[int, SourceModel] = {
    2: SourceModel(4, 1.0 / 8.0, "two-qubit resource source"),
    3: SourceModel(6, 1.0 / 32.0, "three-qubit resource source"),
}


@dataclass(frozen=True)
class PhotonBudget:
    """Average photons for one delivered output under ideal multiplexing.

    Leaf cost is n0/p0; every fusion divides the summed child budgets by its
    success probability. `per_node` records the running composition.
    """

    total: float
    per_node: tuple[tuple[str, float], ...]


def multiplex_budget(plan: ProtocolPlan,
                     sources: Mapping[int, SourceModel] | None = None) -> PhotonBudget:
    """Average photon count to deliver the plan's output once, assuming
    perfectly resource-efficient multiplexing at every stage."""
    table = DEFAULT_SOURCES if sources is None else sources
    records: list[tuple[str, float]] = []

    def walk(node: PlanNode) -> tuple[float, int, float]:
        if isinstance(node, ResourceLeaf):
            model = table.get(node.n_qubits)
            if model is None:
                raise ValueError(f"no source model for {node.n_qubits}-qubit resources")
            value = model.n0 / model.p0
            records.append((f"G{node.n_qubits}({node.angle:.6g}) leaf", value))
            return value, node.n_qubits, node.angle
        b_left, nl, al = walk(node.left)
        b_right, nr, ar = walk(node.right)
        prob, n_out, out_angle = node_probability_and_angle(
            node.gate, node.theta, (nl, al), (nr, ar))
        value = (b_left + b_right) / prob
        records.append((f"{node.gate} fusion -> G{n_out}({out_angle:.6g})", value))
        return value, n_out, out_angle

    total, _, _ = walk(plan.tree)
    return PhotonBudget(total, tuple(records))


@dataclass(frozen=True)
class MultiplexPreset:
    """A named resource-state configuration for the photon-budget estimates."""

    name: str
    target_n: int
    ideal_photons: int
    description: str
    build: Callable[[float], ProtocolPlan]


def _two_leaf_plan(gamma: float, n_left: int, n_right: int) -> ProtocolPlan:
    beta1 = math.atan(math.sqrt(math.tan(gamma)))
    tree = FusionNode("I", _QUARTER_PI,
                      ResourceLeaf(n_left, beta1), ResourceLeaf(n_right, beta1))
    return custom_plan(tree, scheme="preset")


MULTIPLEX_PRESETS: Mapping[str, MultiplexPreset] = {
    "g5-two-3q": MultiplexPreset(
        "g5-two-3q", 5, 12,
        "5-qubit target from two resource states, 12 photons total. Listed as "
        "two 2-qubit resources, but two 2-qubit states cannot fuse into five "
        "qubits; two 3-qubit resources (6 photons each) close both the qubit "
        "count and the 12-photon total.",
        lambda gamma: _two_leaf_plan(gamma, 3, 3),
    ),
    "g5-four-2q": MultiplexPreset(
        "g5-four-2q", 5, 16,
        "5-qubit target from four 2-qubit resources (16 photons), fused in a "
        "chain of standard gates.",
        lambda gamma: plan_efficient(5, gamma),
    ),
    "g4-2q-3q": MultiplexPreset(
        "g4-2q-3q", 4, 10,
        "4-qubit target from one 2-qubit and one 3-qubit resource (10 "
        "photons); both resources carry the same tailored angle so the "
        "single fusion lands on the target.",
        lambda gamma: _two_leaf_plan(gamma, 2, 3),
    ),
    "g4-three-2q": MultiplexPreset(
        "g4-three-2q", 4, 12,
        "4-qubit target from three 2-qubit resources (12 photons), chained.",
        lambda gamma: plan_efficient(4, gamma),
    ),
    "g3-two-2q": MultiplexPreset(
        "g3-two-2q", 3, 8,
        "3-qubit target from two 2-qubit resources (8 photons), one standard "
        "fusion.",
        lambda gamma: plan_efficient(3, gamma),
    ),
}
