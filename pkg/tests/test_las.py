"""Fragment-product reference state: cluster mean field and assembly."""

import numpy as np
import pytest

from lasuscc.fcidump import FragmentLayout
from lasuscc.fock import Sector, casci_ground_state
from lasuscc.las import assemble_statevector, las_qubit_space, lasci
from lasuscc.qubit import MappedHamiltonian, expectation
from lasuscc.workflow import casci_reference, prepare_h2_cluster_system

from conftest import H2_ISOLATED_FCI, H4_CASCI_ENERGY, H4_LAS_ENERGY


def test_h4_las_energy_frozen(h4_las):
    assert h4_las.converged
    assert h4_las.energy == pytest.approx(H4_LAS_ENERGY, abs=1e-9)


def test_macro_iteration_trace_monotone(h4_las, h8_las):
    for state in (h4_las, h8_las):
        trace = state.trace
        assert all(b <= a + 1e-10 for a, b in zip(trace, trace[1:]))


def test_las_energy_above_casci(h4_las, h4_casci):
    assert h4_las.energy >= h4_casci.energy - 1e-12


def test_assembled_statevector_reproduces_las_energy(h4_system, h4_las):
    psi = assemble_statevector(h4_las)
    space = las_qubit_space(h4_las)
    energy = expectation(psi, h4_system.ints, space=space)
    assert energy == pytest.approx(h4_las.energy, abs=1e-9)
    assert psi.norm == pytest.approx(1.0, abs=1e-12)


def test_assembled_statevector_in_total_sector(h4_las):
    psi = assemble_statevector(h4_las)
    space = las_qubit_space(h4_las)
    weights = space.sector_weights(psi.data)
    assert weights[(2, 2)] == pytest.approx(1.0, abs=1e-12)


def test_single_fragment_las_equals_casci():
    system = prepare_h2_cluster_system(1, 1.0)
    las = lasci(system.ints, system.layout)
    exact = casci_ground_state(system.ints, Sector(2, 1, 1)).energy
    assert las.energy == pytest.approx(exact, abs=1e-10)
    assert las.energy == pytest.approx(H2_ISOLATED_FCI, abs=1e-9)


def test_las_invariant_under_fragment_order(h4_system, h4_las):
    """Listing the fragments in the other order cannot change the energy."""
    swapped = FragmentLayout.from_json(
        [
            {"orbitals": [2, 3], "n_alpha": 1, "n_beta": 1},
            {"orbitals": [0, 1], "n_alpha": 1, "n_beta": 1},
        ]
    )
    other = lasci(h4_system.ints, swapped)
    assert other.energy == pytest.approx(h4_las.energy, abs=1e-10)


def test_separated_fragments_reach_exact_limit(separated_system):
    """At 100 A the product state is exact: LAS = CASCI and both equal
    twice the isolated-molecule energy."""
    las = lasci(separated_system.ints, separated_system.layout)
    casci = casci_reference(separated_system)
    assert las.energy == pytest.approx(casci.energy, abs=1e-8)
    assert las.energy == pytest.approx(2 * H2_ISOLATED_FCI, abs=1e-9)


def test_fragment_energies_sum_plus_coupling(h4_las):
    """Total energy is not just the sum of embedded fragment energies; the
    report carries both so the coupling is visible."""
    assert len(h4_las.fragment_energies) == 2
    assert h4_las.fragment_energies[0] == pytest.approx(
        h4_las.fragment_energies[1], abs=1e-9
    )  # symmetric dimer


def test_h4_las_within_chemical_scale_of_casci(h4_las):
    gap_kcal = (h4_las.energy - H4_CASCI_ENERGY) * 627.509
    assert 0.0 < gap_kcal < 10.0
