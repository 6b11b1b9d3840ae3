"""System preparation: from a job description to integrals plus layout.

Three input routes exist:

* an explicit hydrogen geometry (built-in minimal-basis integrals),
* the ``h2_clusters`` shortcut (a row of stretched H2 units),
* an FCIDUMP file (any molecule; integrals produced elsewhere).

For the geometry routes the orbital basis is produced by restricted
Hartree-Fock followed by fragment-blocked localization (symmetric
orthogonalization, then diagonalizing the Fock matrix inside each
fragment's block), so fragment K's orbitals live on fragment K's atoms and
the job's orbital lists address them directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fcidump import FragmentLayout, JobConfig, read_fcidump
from .fock import CasciResult, Sector, casci_ground_state
from .geometry import Geometry, h2_clusters
from .integrals import IntegralSet, ao_to_mo, build_sto3g_hydrogen, localize_per_fragment, rhf


@dataclass
class SystemData:
    """Everything downstream stages need about one molecular system."""

    ints: IntegralSet
    layout: FragmentLayout
    geometry: Geometry | None = None
    rhf_energy: float | None = None
    info: dict = field(default_factory=dict)


def prepare_geometry_system(geometry: Geometry, layout: FragmentLayout) -> SystemData:
    """Hydrogen-geometry route: RHF + per-fragment localization.

    The fragment orbital lists double as atom/AO lists (one s function per
    hydrogen), which keeps the fragment definition unambiguous.
    """
    ao = build_sto3g_hydrogen(geometry)
    if layout.n_orb != ao.n_ao:
        raise ValueError(
            f"layout covers {layout.n_orb} orbitals but the basis has {ao.n_ao}"
        )
    scf = rhf(ao, geometry.n_electrons)
    fragment_ao_sets = [list(frag.orbitals) for frag in layout.fragments]
    orbitals = localize_per_fragment(ao, scf.fock, fragment_ao_sets)
    ints = ao_to_mo(ao, orbitals, n_electrons=geometry.n_electrons, source="sto3g-localized")
    return SystemData(
        ints=ints,
        layout=layout,
        geometry=geometry,
        rhf_energy=scf.energy,
        info={"scf_iterations": scf.n_iter},
    )


def prepare_h2_cluster_system(
    n_units: int,
    separation: float,
    bond_length: float = 1.0,
) -> SystemData:
    """A row of H2 units, one fragment of 2 orbitals / (1 alpha, 1 beta) each."""
    geometry = h2_clusters(n_units, separation, bond_length=bond_length)
    layout = FragmentLayout.from_counts([2] * n_units, [(1, 1)] * n_units)
    return prepare_geometry_system(geometry, layout)


def prepare_fcidump_system(path, layout: FragmentLayout) -> SystemData:
    ints = read_fcidump(path)
    if layout.n_orb != ints.n_orb:
        raise ValueError(
            f"layout covers {layout.n_orb} orbitals but the FCIDUMP has {ints.n_orb}"
        )
    return SystemData(ints=ints, layout=layout, info={"source": str(path)})


def prepare_system(config: JobConfig) -> SystemData:
    """Dispatch on the job's system input kind."""
    if config.source_kind == "fcidump":
        return prepare_fcidump_system(config.fcidump_path, config.layout)
    if config.geometry is None:
        raise ValueError("job configuration carries no system input")
    return prepare_geometry_system(config.geometry, config.layout)


def casci_reference(
    system: SystemData, dense_threshold: int = 20000
) -> CasciResult:
    """Exact diagonalization over the layout's total particle sector."""
    layout = system.layout
    sector = Sector(system.ints.n_orb, layout.n_alpha, layout.n_beta)
    return casci_ground_state(system.ints, sector, dense_threshold=dense_threshold)
