"""Pauli algebra, Jordan-Wigner mapping, and sector scatter/gather."""

import numpy as np
import pytest
import scipy.linalg

from lasuscc.fcidump import FragmentLayout
from lasuscc.fock import CIVector, Sector, build_sector_hamiltonian, casci_ground_state
from lasuscc.integrals import IntegralSet
from lasuscc.qubit import (
    HermiticityError,
    MappedHamiltonian,
    PauliString,
    PauliSum,
    QubitSpace,
    Statevector,
    apply_excitation_operator,
    apply_pauli_exp,
    compile_excitation,
    excitation_pauli_sum,
    excitation_rotation_terms,
    expectation,
    jw_annihilation,
    jw_creation,
    jw_hamiltonian,
)

from test_fock import random_integrals


# ---------------------------------------------------------------------------
# Pauli algebra


def test_pauli_label_round_trip():
    for label in ("IIII", "XIZI", "YYXZ", "ZIIX"):
        p = PauliString.from_label(label)
        assert p.label(4) == label


def test_pauli_product_matches_dense(rng):
    n = 3
    for _ in range(20):
        a = PauliString(int(rng.integers(8)), int(rng.integers(8)))
        b = PauliString(int(rng.integers(8)), int(rng.integers(8)))
        product = a.mul(b)
        dense = a.to_dense(n) @ b.to_dense(n)
        assert np.max(np.abs(product.to_dense(n) - dense)) <= 1e-14


def test_pauli_dagger_and_self_adjoint():
    y = PauliString.from_label("IY")
    assert y.is_self_adjoint
    assert np.max(np.abs(y.dagger().to_dense(2) - y.to_dense(2).conj().T)) <= 1e-15
    xz = PauliString.from_label("XZ")
    assert xz.is_self_adjoint


def test_pauli_sum_arithmetic_matches_dense(rng):
    n = 2
    a = PauliSum.identity(0.5) + 0.25 * PauliSum([(1.0, PauliString.from_label("XI"))])
    b = PauliSum([(0.5j, PauliString.from_label("ZY"))])
    total = a * b + b
    dense = a.to_dense(n) @ b.to_dense(n) + b.to_dense(n)
    assert np.max(np.abs(total.to_dense(n) - dense)) <= 1e-14


def test_pauli_sum_merges_duplicate_terms():
    p = PauliString.from_label("XZ")
    s = PauliSum([(1.0, p), (2.0, p)])
    assert len(s.terms) == 1


def test_hermitian_detection():
    h = PauliSum([(1.5, PauliString.from_label("XX"))])
    assert h.is_hermitian()
    anti = PauliSum([(1.5j, PauliString.from_label("XX"))])
    assert not anti.is_hermitian()


# ---------------------------------------------------------------------------
# Jordan-Wigner operators


def test_jw_annihilation_matches_dense_fermion_action():
    """a_1 on 3 modes: check matrix elements against the occupation rule."""
    n_modes = 3
    op = jw_annihilation(1)
    dense = sum(c * p.to_dense(n_modes) for c, p in op)
    for b in range(8):
        for b2 in range(8):
            amplitude = dense[b2, b]
            if b & 0b010 and b2 == b ^ 0b010:
                expected = -1.0 if b & 0b001 else 1.0
            else:
                expected = 0.0
            assert amplitude == pytest.approx(expected, abs=1e-14)


def test_jw_creation_is_dagger_of_annihilation():
    n_modes = 4
    for mode in range(n_modes):
        ann = sum(c * p.to_dense(n_modes) for c, p in jw_annihilation(mode))
        cre = sum(c * p.to_dense(n_modes) for c, p in jw_creation(mode))
        assert np.max(np.abs(cre - ann.conj().T)) <= 1e-14


def test_jw_anticommutation():
    n_modes = 3
    ops = [sum(c * p.to_dense(n_modes) for c, p in jw_annihilation(m)) for m in range(n_modes)]
    eye = np.eye(1 << n_modes)
    for p in range(n_modes):
        for q in range(n_modes):
            anti = ops[p] @ ops[q].conj().T + ops[q].conj().T @ ops[p]
            expected = eye if p == q else 0 * eye
            assert np.max(np.abs(anti - expected)) <= 1e-13


def identity_layout(n_orb, n_alpha, n_beta):
    return FragmentLayout.from_counts([n_orb], [(n_alpha, n_beta)])


def test_jw_hamiltonian_matches_oracle_elementwise(rng):
    from oracles import dense_hamiltonian

    ints = random_integrals(3, rng)
    space = QubitSpace(identity_layout(3, 2, 1))
    ours = jw_hamiltonian(ints, space).to_dense(6)
    theirs = dense_hamiltonian(ints)
    assert np.max(np.abs(ours - theirs)) <= 1e-12


def test_excitation_pauli_sum_is_anti_hermitian(rng):
    gen = excitation_pauli_sum((5, 2), (1, 0), 6)
    dense = gen.to_dense(6)
    assert np.max(np.abs(dense + dense.conj().T)) <= 1e-14


# ---------------------------------------------------------------------------
# Statevector and exponentials


def test_statevector_basics():
    sv = Statevector.basis(3, 5)
    assert sv.norm == pytest.approx(1.0)
    with pytest.raises(ValueError):
        Statevector.basis(2, 4)
    with pytest.raises(ValueError):
        Statevector.basis(30, 0)  # beyond the qubit cap


def test_apply_pauli_exp_matches_expm(rng):
    n = 4
    psi = Statevector(n, (rng.standard_normal(16) + 1j * rng.standard_normal(16)))
    pauli = PauliString.from_label("XYIZ")
    theta = 0.321
    out = apply_pauli_exp(psi, pauli, theta)
    dense = scipy.linalg.expm(1j * theta * pauli.to_dense(n))
    assert np.max(np.abs(out.data - dense @ psi.data)) <= 1e-13


def test_compiled_excitation_equals_pauli_route(rng):
    n = 6
    psi = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    cre, ann = (5, 2), (1, 0)
    theta = 0.456

    ce = compile_excitation(cre, ann)
    fused = psi.copy()
    ce.rotate(fused, theta)

    via_pauli = psi.copy()
    from lasuscc import kernels

    backend = kernels.get_backend()
    for x, z, g in excitation_rotation_terms(cre, ann, n):
        backend.pauli_rotation(via_pauli, x, z, theta * g)
    assert np.max(np.abs(fused - via_pauli)) <= 1e-13

    dense_gen = excitation_pauli_sum(cre, ann, n).to_dense(n)
    expected = scipy.linalg.expm(theta * dense_gen) @ psi
    assert np.max(np.abs(fused - expected)) <= 1e-12


def test_compile_excitation_rejects_diagonal_and_duplicates():
    with pytest.raises(ValueError):
        compile_excitation((1, 0), (1, 0))  # tau is diagonal
    with pytest.raises(ValueError):
        compile_excitation((1, 1), (2, 0))


def test_apply_excitation_operator_matches_dense(rng):
    n = 6
    psi = Statevector(n, rng.standard_normal(64) + 1j * rng.standard_normal(64))

    class Gen:
        create_modes = (4, 3)
        annihilate_modes = (1, 0)

    out = apply_excitation_operator(psi, Gen())
    dense = excitation_pauli_sum((4, 3), (1, 0), n).to_dense(n)
    assert np.max(np.abs(out.data - dense @ psi.data)) <= 1e-12


# ---------------------------------------------------------------------------
# Sector maps


def interleaved_layout():
    """Two fragments whose spatial orbitals interleave: (0, 2) and (1, 3)."""
    return FragmentLayout.from_json(
        [
            {"orbitals": [0, 2], "n_alpha": 1, "n_beta": 1},
            {"orbitals": [1, 3], "n_alpha": 1, "n_beta": 1},
        ]
    )


def test_gather_scatter_round_trip(rng):
    space = QubitSpace(interleaved_layout())
    sector = Sector(4, 2, 2)
    coeffs = rng.standard_normal((6, 6))  # (alpha strings, beta strings)
    data = space.scatter(coeffs, sector)
    back = space.gather(data, sector)
    assert back.shape == coeffs.shape
    assert np.max(np.abs(back - coeffs)) <= 1e-15
    # A scatter of an orthonormal coefficient matrix keeps its norm.
    assert np.linalg.norm(data) == pytest.approx(np.linalg.norm(coeffs), abs=1e-12)


def test_interleaved_layout_energy_agreement(rng):
    """CASCI vector scattered through a scrambled layout keeps its energy."""
    ints = random_integrals(4, rng)
    sector = Sector(4, 2, 2)
    result = casci_ground_state(ints, sector)
    space = QubitSpace(interleaved_layout())

    data = space.scatter_civector(result.ci)
    mh = MappedHamiltonian(ints, space)
    assert mh.expectation(data) == pytest.approx(result.energy, abs=1e-11)

    via_pauli = expectation(Statevector(space.n_qubits, data), jw_hamiltonian(ints, space))
    assert via_pauli == pytest.approx(result.energy, abs=1e-11)


def test_mapped_hamiltonian_apply_equals_pauli_apply(rng):
    ints = random_integrals(3, rng)
    layout = FragmentLayout.from_json(
        [
            {"orbitals": [0, 2], "n_alpha": 1, "n_beta": 0},
            {"orbitals": [1], "n_alpha": 0, "n_beta": 1},
        ]
    )
    space = QubitSpace(layout)
    psi = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    mh = MappedHamiltonian(ints, space)
    ours = mh.apply(psi)
    theirs = jw_hamiltonian(ints, space).apply(psi)
    assert np.max(np.abs(ours - theirs)) <= 1e-12


def test_sector_weights_sum_to_norm(rng):
    space = QubitSpace(interleaved_layout())
    psi = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    weights = space.sector_weights(psi)
    assert sum(weights.values()) == pytest.approx(float(np.vdot(psi, psi).real), abs=1e-10)


def test_expectation_rejects_non_hermitian():
    plus = Statevector(1, np.array([1.0, 1.0]) / np.sqrt(2))
    bad = PauliSum([(1.0j, PauliString.from_label("X"))])
    with pytest.raises(HermiticityError):
        expectation(plus, bad)
