"""Physical conversion constants used across the package."""

# CODATA 2018 Bohr radius.
BOHR_RADIUS_ANGSTROM = 0.529177210903
ANGSTROM_TO_BOHR = 1.0 / BOHR_RADIUS_ANGSTROM

HARTREE_TO_KCAL_MOL = 627.509
HARTREE_TO_CM1 = 219474.63
