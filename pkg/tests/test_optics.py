import math

import numpy as np
import pytest

from ghzfusion.fock import PhotonicState, make_ghz_like
from ghzfusion.optics import (
    ModeUnitary,
    apply,
    embed,
    identity,
    measure,
    qubit_x,
    qubit_z,
    vbs,
)

QUARTER = math.pi / 4


def random_unitary(m, rng):
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    # fix the QR phase ambiguity so q is exactly unitary
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return ModeUnitary(q)


def random_state(m, photons, terms, rng):
    occs = set()
    while len(occs) < terms:
        occ = [0] * m
        for mode in rng.integers(0, m, size=photons):
            occ[mode] += 1
        occs.add(tuple(occ))
    amps = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
    amps /= np.linalg.norm(amps)
    return PhotonicState(m, dict(zip(occs, amps)))


def test_vbs_balanced():
    u = vbs(QUARTER).matrix
    expected = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert np.abs(u - expected).max() < 1e-12


def test_vbs_zero_is_z_like():
    assert np.abs(vbs(0.0).matrix - np.diag([1.0, -1.0])).max() < 1e-12


def test_vbs_hermitian_involution():
    for theta in np.linspace(0, math.pi / 2, 7):
        u = vbs(theta).matrix
        assert np.abs(u - u.conj().T).max() < 1e-12
        assert np.abs(u @ u - np.eye(2)).max() < 1e-12


def test_vbs_domain():
    with pytest.raises(ValueError):
        vbs(-0.2)
    with pytest.raises(ValueError):
        vbs(math.pi / 2 + 0.2)


def test_embed_places_entries():
    u = embed(vbs(QUARTER), [0, 3], 4)
    m = u.matrix
    assert m[1, 1] == 1 and m[2, 2] == 1
    assert abs(m[0, 0] - 1 / math.sqrt(2)) < 1e-12
    assert abs(m[3, 3] + 1 / math.sqrt(2)) < 1e-12
    assert abs(m[0, 3] - 1 / math.sqrt(2)) < 1e-12


def test_embed_identity():
    assert np.abs(embed(identity(2), [1, 3], 4).matrix - np.eye(4)).max() == 0


def test_embed_disjoint_commutes():
    a = embed(vbs(0.3), [0, 1], 4)
    b = embed(vbs(1.1), [2, 3], 4)
    assert np.abs((a @ b).matrix - (b @ a).matrix).max() < 1e-12


def test_embed_errors():
    with pytest.raises(ValueError):
        embed(vbs(0.3), [0, 0], 4)
    with pytest.raises(ValueError):
        embed(vbs(0.3), [0, 4], 4)
    with pytest.raises(ValueError):
        embed(vbs(0.3), [0], 4)


def test_mode_unitary_rejects_nonunitary():
    with pytest.raises(ValueError):
        ModeUnitary(np.array([[1.0, 0.0], [0.0, 2.0]]))


def test_apply_hong_ou_mandel():
    out = apply(vbs(QUARTER), PhotonicState(2, {(1, 1): 1.0}))
    r = 1 / math.sqrt(2)
    assert abs(out.amplitude((2, 0)) - r) < 1e-12
    assert abs(out.amplitude((0, 2)) + r) < 1e-12
    assert abs(out.amplitude((1, 1))) < 1e-12


def test_apply_single_photon_splitter():
    for theta in (0.0, 0.3, QUARTER):
        out = apply(vbs(theta), PhotonicState(2, {(1, 0): 1.0}))
        assert abs(out.amplitude((1, 0)) - math.cos(theta)) < 1e-12
        assert abs(out.amplitude((0, 1)) - math.sin(theta)) < 1e-12


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(vbs(0.3), PhotonicState(3, {(1, 0, 0): 1.0}))


def test_apply_conserves_photons_and_norm():
    rng = np.random.default_rng(7)
    for m, photons in ((4, 2), (6, 3), (8, 4)):
        u = random_unitary(m, rng)
        s = random_state(m, photons, 4, rng)
        out = apply(u, s)
        assert abs(out.norm_squared - 1.0) < 1e-12
        for occ in out.terms:
            assert sum(occ) == photons


def test_apply_composes():
    rng = np.random.default_rng(11)
    u1 = random_unitary(5, rng)
    u2 = random_unitary(5, rng)
    s = random_state(5, 3, 5, rng)
    seq = apply(u2, apply(u1, s))
    once = apply(u2 @ u1, s)
    keys = set(seq.terms) | set(once.terms)
    dev = max(abs(seq.amplitude(k) - once.amplitude(k)) for k in keys)
    assert dev < 1e-10


def test_qubit_paulis():
    state, enc = make_ghz_like(1, 0.3)
    flipped = apply(qubit_x(enc.pairs[0], 2), state)
    assert abs(flipped.amplitude((1, 0)) - math.sin(0.3)) < 1e-12
    assert abs(flipped.amplitude((0, 1)) - math.cos(0.3)) < 1e-12
    phased = apply(qubit_z(enc.pairs[0], 2), state)
    assert abs(phased.amplitude((0, 1)) + math.sin(0.3)) < 1e-12


def test_measure_hom_statistics():
    out = apply(vbs(QUARTER), PhotonicState(2, {(1, 1): 1.0}))
    outcomes = {tuple(sorted(o.pattern.items())): o.probability for o in measure(out, [0, 1])}
    assert abs(outcomes[((0, 2), (1, 0))] - 0.5) < 1e-12
    assert abs(outcomes[((0, 0), (1, 2))] - 0.5) < 1e-12
    assert ((0, 1), (1, 1)) not in outcomes


def test_measure_single_rail():
    state, _ = make_ghz_like(1, QUARTER)  # (|10>> + |01>>)/sqrt(2)
    outcomes = measure(state, [0])
    assert len(outcomes) == 2
    by_count = {o.pattern[0]: o for o in outcomes}
    assert abs(by_count[1].probability - 0.5) < 1e-12
    assert by_count[1].post_state.terms == {(0,): 1.0 + 0j}
    assert by_count[0].post_state.terms == {(1,): 1.0 + 0j}


def test_measure_probabilities_sum_to_one():
    rng = np.random.default_rng(23)
    for _ in range(5):
        s = random_state(6, 3, 6, rng)
        u = random_unitary(6, rng)
        outcomes = measure(apply(u, s), [0, 2, 5])
        assert abs(sum(o.probability for o in outcomes) - 1.0) < 1e-10


def test_measure_errors():
    state, _ = make_ghz_like(1, QUARTER)
    with pytest.raises(ValueError):
        measure(state, [])
    with pytest.raises(ValueError):
        measure(state, [0, 0])
    with pytest.raises(ValueError):
        measure(state, [5])
