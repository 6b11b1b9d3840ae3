"""Shared fixtures: each expensive pipeline object is built once per session."""

from __future__ import annotations

import numpy as np
import pytest

from lasuscc.ansatz import enumerate_pool, screen_gradients
from lasuscc.las import assemble_statevector, lasci
from lasuscc.workflow import casci_reference, prepare_h2_cluster_system

# Frozen reference values, computed once with the brute-force Fock-space
# oracle in tests/oracles.py and pinned here.
H2_RHF_ENERGY = -1.1166843870840562          # H2 at 0.7414 A, minimal basis
H2_FCI_ENERGY = -1.1372701746606646
H2_ISOLATED_FCI = -1.1011503302258605        # H2 at 1.0 A bond length
H4_CASCI_ENERGY = -2.115009053682355         # (H2)2, intra 1.0 A, separation 1.46 A
H4_LAS_ENERGY = -2.109664978031493


@pytest.fixture(scope="session")
def h4_system():
    return prepare_h2_cluster_system(2, 1.46)


@pytest.fixture(scope="session")
def h4_casci(h4_system):
    return casci_reference(h4_system)


@pytest.fixture(scope="session")
def h4_las(h4_system):
    return lasci(h4_system.ints, h4_system.layout)


@pytest.fixture(scope="session")
def h4_reference_state(h4_las):
    return assemble_statevector(h4_las)


@pytest.fixture(scope="session")
def h4_screened(h4_system, h4_las, h4_reference_state):
    pool = enumerate_pool(h4_system.layout)
    screen_gradients(pool, h4_reference_state, h4_system.ints)
    return pool


@pytest.fixture(scope="session")
def h8_system():
    return prepare_h2_cluster_system(4, 1.46)


@pytest.fixture(scope="session")
def h8_las(h8_system):
    return lasci(h8_system.ints, h8_system.layout)


@pytest.fixture(scope="session")
def h8_reference_state(h8_las):
    return assemble_statevector(h8_las)


@pytest.fixture(scope="session")
def h8_screened(h8_system, h8_las, h8_reference_state):
    pool = enumerate_pool(h8_system.layout)
    screen_gradients(pool, h8_reference_state, h8_system.ints)
    return pool


@pytest.fixture(scope="session")
def separated_system():
    """Two H2 units 100 A apart: the non-interacting limit."""
    return prepare_h2_cluster_system(2, 100.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260822)
