/** Molecular geometries: element symbols with Cartesian coordinates in Angstrom. */

/** One atom: element symbol and position in Angstrom. */
export type Atom = [symbol: string, xyz: [number, number, number]];

/** A neutral-singlet-by-default molecular geometry. */
export interface Geometry {
    atoms: Atom[];
    charge: number;
    spinMultiplicity: number;
}

/**
 * Nuclear charge of an element supported by the native integral engine.
 *
 * The engine is deliberately hydrogen-only; anything else must arrive as a
 * pre-computed FCIDUMP from an external quantum-chemistry package.
 */
export function nuclearCharge(symbol: string): number {
    if (symbol === "H") return 1;
    throw new Error(
        `unsupported element '${symbol}': the bridge's native integral engine covers ` +
        `hydrogen only; generate integrals for heavier elements with an external ` +
        `quantum-chemistry package and pass them in as an FCIDUMP file`,
    );
}

/** Total electron count of a geometry. */
export function countElectrons(geometry: Geometry): number {
    let n = -geometry.charge;
    for (const [symbol] of geometry.atoms) n += nuclearCharge(symbol);
    return n;
}

/**
 * Stack of parallel H2 units: unit k sits at x = k*separation, bond along y.
 *
 * Atoms are ordered unit by unit so that atom indices 2k, 2k+1 belong to
 * unit k; fragment layouts over consecutive orbital pairs line up with the
 * physical units.
 *
 * @param nUnits number of H2 units
 * @param separation distance between neighbouring units (Angstrom)
 * @param bondLength intra-unit H-H distance (Angstrom)
 */
export function h2Clusters(nUnits: number, separation: number, bondLength = 1.0): Geometry {
    if (nUnits < 1) throw new Error("need at least one H2 unit");
    if (separation <= 0 || bondLength <= 0) {
        throw new Error("separation and bondLength must be positive");
    }
    const atoms: Atom[] = [];
    for (let k = 0; k < nUnits; k++) {
        const x = k * separation;
        atoms.push(["H", [x, -bondLength / 2.0, 0.0]]);
        atoms.push(["H", [x, +bondLength / 2.0, 0.0]]);
    }
    return { atoms, charge: 0, spinMultiplicity: 1 };
}
