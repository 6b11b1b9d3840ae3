"""Molecular geometries for the native hydrogen-cluster model systems.

Coordinates are stored in Angstrom; integral routines convert to bohr.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Atom = tuple[str, tuple[float, float, float]]


@dataclass(frozen=True)
class Geometry:
    """A molecular geometry: element symbols with Cartesian coordinates (Angstrom).

    Args:
        atoms: sequence of ``(symbol, (x, y, z))`` entries.
        charge: total molecular charge.
        spin_multiplicity: 2S+1 of the target electronic state.
    """

    atoms: tuple[Atom, ...]
    charge: int = 0
    spin_multiplicity: int = 1

    def __post_init__(self) -> None:
        atoms = tuple((sym, (float(x), float(y), float(z))) for sym, (x, y, z) in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        for sym, xyz in self.atoms:
            if not all(math.isfinite(c) for c in xyz):
                raise ValueError(f"non-finite coordinate on atom {sym!r}: {xyz}")
        if self.n_electrons < 0:
            raise ValueError("negative electron count")
        n_unpaired = self.spin_multiplicity - 1
        if n_unpaired < 0 or (self.n_electrons - n_unpaired) % 2 != 0:
            raise ValueError(
                f"spin multiplicity {self.spin_multiplicity} incompatible with "
                f"{self.n_electrons} electrons"
            )

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def n_electrons(self) -> int:
        return sum(nuclear_charge(sym) for sym, _ in self.atoms) - self.charge

    @property
    def n_alpha(self) -> int:
        return (self.n_electrons + self.spin_multiplicity - 1) // 2

    @property
    def n_beta(self) -> int:
        return self.n_electrons - self.n_alpha


_NUCLEAR_CHARGE = {"H": 1}


def nuclear_charge(symbol: str) -> int:
    try:
        return _NUCLEAR_CHARGE[symbol]
    except KeyError:
        raise ValueError(
            f"unsupported element {symbol!r}: the native integral engine covers hydrogen only"
        ) from None


def h2_clusters(
    n_units: int,
    separation: float,
    bond_length: float = 1.0,
    charge: int = 0,
    spin_multiplicity: int = 1,
) -> Geometry:
    """Stack of parallel H2 units: unit k sits at x = k*separation, bond along y.

    Atoms are ordered unit by unit so that atom indices 2k, 2k+1 belong to
    unit k; fragment layouts over consecutive orbital pairs line up with the
    physical units.

    Args:
        n_units: number of H2 units.
        separation: distance between neighbouring units (Angstrom).
        bond_length: intra-unit H-H distance (Angstrom), 1.0 by default.
    """
    if n_units < 1:
        raise ValueError("need at least one H2 unit")
    if separation <= 0 or bond_length <= 0:
        raise ValueError("separation and bond_length must be positive")
    atoms: list[Atom] = []
    for k in range(n_units):
        x = k * separation
        atoms.append(("H", (x, -bond_length / 2.0, 0.0)))
        atoms.append(("H", (x, +bond_length / 2.0, 0.0)))
    return Geometry(tuple(atoms), charge=charge, spin_multiplicity=spin_multiplicity)


def hydrogen_chain(n_atoms: int, spacing: float, charge: int = 0, spin_multiplicity: int = 1) -> Geometry:
    """Evenly spaced linear H chain along x (Angstrom spacing)."""
    if n_atoms < 1:
        raise ValueError("need at least one atom")
    atoms = tuple(("H", (k * spacing, 0.0, 0.0)) for k in range(n_atoms))
    return Geometry(atoms, charge=charge, spin_multiplicity=spin_multiplicity)
