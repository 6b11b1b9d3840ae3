/** Physical constants and basis parameters shared across the bridge. */

/** CODATA 2018 Bohr radius in Angstrom. */
export const BOHR_RADIUS_ANGSTROM = 0.529177210903;

/** Conversion factor from Angstrom to bohr. */
export const ANGSTROM_TO_BOHR = 1.0 / BOHR_RADIUS_ANGSTROM;

/** STO-3G hydrogen 1s primitive exponents (bohr^-2). */
export const STO3G_H_EXPONENTS = [3.42525091, 0.62391373, 0.1688554] as const;

/** STO-3G hydrogen 1s contraction coefficients for unit-normalized primitives. */
export const STO3G_H_COEFFS = [0.15432897, 0.53532814, 0.44463454] as const;
