import math

import numpy as np
import pytest

from ghzfusion.fock import PauliFrame, SchmidtState
from ghzfusion.fusion import (
    FusionKind,
    FusionOutcome,
    FusionSpec,
    OutcomeLabel,
    SeparableBranch,
    fuse_oracle,
    fuse_similar,
    fuse_similar_oracle,
    fuse_symbolic,
    fusion_circuit,
    similar_success_probability,
    standard_success_probability,
    total_success,
)

QUARTER = math.pi / 4
STD_I = FusionSpec(FusionKind.TYPE_I)
STD_II = FusionSpec(FusionKind.TYPE_II)


def outcome_map(outcomes):
    """Key outcomes by (label, pattern, failure branch) for comparisons."""
    table = {}
    for o in outcomes:
        key = (o.label, tuple(sorted(o.pattern.items())),
               o.branch.value if o.branch else None)
        assert key not in table
        table[key] = o
    return table


def assert_equivalent(sym, orc, tol=1e-10):
    s, o = outcome_map(sym), outcome_map(orc)
    for key in set(s) | set(o):
        ps = s[key].probability if key in s else 0.0
        po = o[key].probability if key in o else 0.0
        assert abs(ps - po) < tol, (key, ps, po)
        if key in s and key in o and s[key].output is not None:
            angle = s[key].output.angle
            assert abs(angle - o[key].output.angle) < tol, key
            # frames compare modulo stabilizers of the output: X-on-all at
            # angle pi/4 (cos = sin) and Z at angle 0 (no all-ones weight)
            if abs(angle - QUARTER) > 1e-9:
                assert s[key].corrections.x == o[key].corrections.x, key
            if angle > 1e-9:
                assert s[key].corrections.z == o[key].corrections.z, key


def test_bell_bell_standard_half():
    a, b = SchmidtState(2, QUARTER), SchmidtState(2, QUARTER)
    assert abs(total_success(fuse_symbolic(a, b, STD_I)) - 0.5) < 1e-12
    assert abs(total_success(fuse_oracle(a, b, STD_I)) - 0.5) < 1e-12
    for o in fuse_symbolic(a, b, STD_I):
        if o.label is not OutcomeLabel.FAILURE:
            assert abs(o.output.angle - QUARTER) < 1e-12


def test_separable_inputs_always_succeed():
    a, b = SchmidtState(2, 0.0), SchmidtState(2, 0.0)
    outs = fuse_symbolic(a, b, STD_I)
    assert abs(total_success(outs) - 1.0) < 1e-12
    for o in outs:
        assert o.label is not OutcomeLabel.FAILURE
        assert o.output.angle == 0.0


def test_pi_over_8_success_and_angle():
    a, b = SchmidtState(2, math.pi / 8), SchmidtState(2, math.pi / 8)
    outs = fuse_symbolic(a, b, STD_I)
    assert abs(total_success(outs) - 0.75) < 1e-12
    delta = math.atan(math.tan(math.pi / 8) ** 2)
    assert abs(delta - 0.16991845472706096) < 1e-12
    for o in outs:
        if o.label is not OutcomeLabel.FAILURE:
            assert abs(o.output.angle - delta) < 1e-12
    assert_equivalent(outs, fuse_oracle(a, b, STD_I))


def test_modified_gate_branches():
    # equal Bell inputs through a theta = pi/6 gate
    a, b = SchmidtState(2, QUARTER), SchmidtState(2, QUARTER)
    spec = FusionSpec(FusionKind.TYPE_I, math.pi / 6)
    outs = {o.label: o for o in fuse_symbolic(a, b, spec)
            if o.label is not OutcomeLabel.FAILURE}
    branch_a = outs[OutcomeLabel.SUCCESS_A]
    branch_b = outs[OutcomeLabel.SUCCESS_B]
    assert abs(branch_a.probability - 0.25) < 1e-12
    assert abs(branch_b.probability - 0.25) < 1e-12
    assert abs(branch_a.output.angle - math.pi / 6) < 1e-12
    # the 1/tan branch folds back to pi/6 under the X relabeling
    assert abs(branch_b.output.angle - math.pi / 6) < 1e-12
    assert all(branch_b.corrections.x)


def test_output_qubit_counts():
    a, b = SchmidtState(3, 0.3), SchmidtState(4, 0.2)
    out_i = fuse_symbolic(a, b, STD_I)[0].output
    out_ii = fuse_symbolic(a, b, STD_II)[0].output
    assert out_i.n_qubits == 6
    assert out_ii.n_qubits == 5


def test_type_ii_success_patterns():
    a, b = SchmidtState(2, QUARTER), SchmidtState(2, QUARTER)
    outs = fuse_oracle(a, b, STD_II)
    assert abs(total_success(outs) - 0.5) < 1e-12
    success_hits = {
        tuple(m for m, k in sorted(o.pattern.items()) if k > 0)
        for o in outs if o.label is not OutcomeLabel.FAILURE
    }
    assert success_hits == {(1, 2), (1, 3), (2, 4), (3, 4)}
    # failures are bunched pairs; the {2,3} coincidence never fires (HOM)
    for o in outs:
        if o.label is OutcomeLabel.FAILURE:
            hits = tuple(m for m, k in sorted(o.pattern.items()) if k > 0)
            assert hits != (2, 3)


def test_failure_branches_match_products():
    a, b = SchmidtState(2, 0.3), SchmidtState(2, 0.5)
    outs = fuse_symbolic(a, b, STD_I)
    a1b0 = sum(o.probability for o in outs if o.branch is SeparableBranch.A1B0)
    a0b1 = sum(o.probability for o in outs if o.branch is SeparableBranch.A0B1)
    assert abs(a1b0 - (math.sin(0.3) * math.cos(0.5)) ** 2) < 1e-12
    assert abs(a0b1 - (math.cos(0.3) * math.sin(0.5)) ** 2) < 1e-12


def test_probability_law_on_grid():
    angles = np.linspace(0, QUARTER, 12)
    for kind in FusionKind:
        for alpha in angles:
            for beta in angles:
                outs = fuse_symbolic(SchmidtState(2, alpha), SchmidtState(2, beta),
                                     FusionSpec(kind))
                assert abs(sum(o.probability for o in outs) - 1.0) < 1e-10
                expected = standard_success_probability(alpha, beta)
                assert abs(total_success(outs) - expected) < 1e-12


def test_modified_total_matches_standard_on_grid():
    angles = np.linspace(0, QUARTER, 20)
    thetas = np.linspace(0, QUARTER, 20)
    for alpha in angles:
        for beta in angles:
            expected = standard_success_probability(alpha, beta)
            for theta in thetas:
                outs = fuse_symbolic(SchmidtState(2, alpha), SchmidtState(2, beta),
                                     FusionSpec(FusionKind.TYPE_I, theta))
                assert abs(total_success(outs) - expected) < 1e-12


def test_angle_relation_at_standard_theta():
    angles = np.linspace(0, QUARTER, 10)
    for alpha in angles:
        for beta in angles:
            outs = fuse_oracle(SchmidtState(2, alpha), SchmidtState(2, beta), STD_I)
            expected = math.atan(math.tan(alpha) * math.tan(beta))
            for o in outs:
                if o.label is OutcomeLabel.FAILURE:
                    continue
                assert abs(math.tan(o.output.angle) - math.tan(expected)) < 1e-10
                if o.label is OutcomeLabel.SUCCESS_B and expected > 1e-9:
                    # the minus-sign branch: exactly one pending Z
                    assert o.corrections.z_count == 1
                    assert o.corrections.x_count == 0


def test_oracle_equivalence_grid():
    angles = np.linspace(0, QUARTER, 10)
    thetas = np.linspace(0, QUARTER, 5)
    for kind in FusionKind:
        for alpha in angles:
            for beta in angles:
                a, b = SchmidtState(2, alpha), SchmidtState(2, beta)
                for theta in thetas:
                    spec = FusionSpec(kind, theta)
                    assert_equivalent(fuse_symbolic(a, b, spec), fuse_oracle(a, b, spec))


def test_oracle_equivalence_off_grid_point():
    a, b = SchmidtState(2, math.pi / 8), SchmidtState(2, math.pi / 6)
    spec = FusionSpec(FusionKind.TYPE_II, math.pi / 5)
    assert_equivalent(fuse_symbolic(a, b, spec), fuse_oracle(a, b, spec))


def test_framed_inputs_are_resolved():
    # a pending Z on either input flips the effective sign, which only
    # reshuffles the branch corrections; probabilities are unchanged
    plain = SchmidtState(2, 0.4)
    framed = SchmidtState(2, 0.4, pauli_frame=PauliFrame.build(2, z_first=True))
    sym = fuse_symbolic(framed, plain, STD_I)
    orc = fuse_oracle(framed, plain, STD_I)
    assert_equivalent(sym, orc)
    assert abs(total_success(sym) - standard_success_probability(0.4, 0.4)) < 1e-12


def test_fusion_circuit_unitary():
    for kind in FusionKind:
        for theta in (0.0, 0.3, QUARTER):
            u = fusion_circuit(FusionSpec(kind, theta)).matrix
            assert np.abs(u.conj().T @ u - np.eye(4)).max() < 1e-12


def test_spec_validation():
    with pytest.raises(ValueError):
        FusionSpec(FusionKind.TYPE_I, QUARTER + 0.1)
    with pytest.raises(ValueError):
        FusionSpec("I", QUARTER)


# -- similar-state procedure -------------------------------------------------

def test_similar_distillation_case():
    a, b = SchmidtState(2, QUARTER), SchmidtState(2, QUARTER)
    outs = fuse_similar(a, b, QUARTER)
    assert abs(total_success(outs) - 0.5) < 1e-12
    for o in outs:
        if o.label is not OutcomeLabel.FAILURE:
            assert o.output.angle == QUARTER
            assert o.output.pauli_frame.is_identity


def test_similar_sets_requested_angle_exactly():
    outs = fuse_similar(SchmidtState(2, math.pi / 8), SchmidtState(2, math.pi / 8),
                        math.pi / 6)
    assert abs(total_success(outs) - 0.25) < 1e-12
    successes = [o for o in outs if o.label is not OutcomeLabel.FAILURE]
    assert len(successes) == 2
    for o in successes:
        assert o.output.angle == math.pi / 6  # exact, set by feed-forward
    assert_equivalent(outs, fuse_similar_oracle(
        SchmidtState(2, math.pi / 8), SchmidtState(2, math.pi / 8), math.pi / 6))


def test_similar_zero_angle_never_succeeds():
    outs = fuse_similar(SchmidtState(2, 0.0), SchmidtState(2, 0.0), math.pi / 6)
    assert total_success(outs) == 0.0


def test_similar_probability_grid():
    for alpha in np.linspace(0, QUARTER, 50):
        a, b = SchmidtState(2, alpha), SchmidtState(3, alpha)
        for theta in (0.1, QUARTER):
            outs = fuse_similar(a, b, theta)
            expected = similar_success_probability(alpha)
            assert abs(total_success(outs) - expected) < 1e-12
            for o in outs:
                if o.label is not OutcomeLabel.FAILURE:
                    assert o.output.angle == theta
                    assert o.output.n_qubits == 4


def test_similar_rejects_unequal_angles():
    with pytest.raises(ValueError):
        fuse_similar(SchmidtState(2, 0.2), SchmidtState(2, 0.3), QUARTER)


def test_similar_type_ii_variant():
    a, b = SchmidtState(2, 0.3), SchmidtState(2, 0.3)
    outs = fuse_similar(a, b, 0.2, FusionKind.TYPE_II)
    assert abs(total_success(outs) - similar_success_probability(0.3)) < 1e-12
    successes = [o for o in outs if o.label is not OutcomeLabel.FAILURE]
    assert len(successes) == 4
    for o in successes:
        assert o.output.angle == 0.2
        assert o.output.n_qubits == 2
    assert_equivalent(outs, fuse_similar_oracle(a, b, 0.2, FusionKind.TYPE_II))


def test_similar_oracle_grid():
    for alpha in np.linspace(0.05, QUARTER, 6):
        for theta in np.linspace(0, QUARTER, 4):
            for kind in FusionKind:
                a, b = SchmidtState(2, alpha), SchmidtState(2, alpha)
                assert_equivalent(fuse_similar(a, b, theta, kind),
                                  fuse_similar_oracle(a, b, theta, kind))


def test_type_i_and_ii_totals_agree():
    angles = np.linspace(0, QUARTER, 15)
    for alpha in angles:
        for beta in angles:
            a, b = SchmidtState(2, alpha), SchmidtState(2, beta)
            ti = total_success(fuse_symbolic(a, b, STD_I))
            tii = total_success(fuse_symbolic(a, b, STD_II))
            assert abs(ti - tii) < 1e-12
