/** Dense determinant-basis CASCI: the bridge's independent energy oracle.
 *
 * Determinants are pairs of alpha/beta occupation bitmasks over spatial
 * orbitals.  The spin-summed excitation operators E_pq carry the usual
 * within-spin fermionic parity; the Hamiltonian is assembled column by column
 * as  E = eCore + sum_pq h_pq E_pq + 1/2 sum_pqrs (pq|rs)(E_pq E_rs - d_qr E_ps)
 * and diagonalized with dense Jacobi.  Deliberately simple: this code exists
 * to cross-check another implementation, so it favours directness over speed.
 */

import { eriIndex, SpatialHamiltonian } from "./integrals";
import { jacobiEigh } from "./linalg";

/** Ground-state energy with the CI dimension it was computed in. */
export interface CasciResult {
    energy: number;
    dimension: number;
}

/** All k-subsets of n orbitals as occupation bitmasks, ascending numerically. */
export function occupationMasks(nOrbitals: number, nElectrons: number): number[] {
    if (nElectrons < 0 || nElectrons > nOrbitals) return [];
    const masks: number[] = [];
    const recurse = (orbital: number, left: number, mask: number): void => {
        if (left === 0) {
            masks.push(mask);
            return;
        }
        if (nOrbitals - orbital < left) return;
        recurse(orbital + 1, left - 1, mask | (1 << orbital));
        recurse(orbital + 1, left, mask);
    };
    recurse(0, nElectrons, 0);
    masks.sort((a, b) => a - b);
    return masks;
}

function popcountBelow(mask: number, orbital: number): number {
    let count = 0;
    for (let i = 0; i < orbital; i++) count += (mask >> i) & 1;
    return count;
}

/**
 * Apply the single-spin excitation a+_p a_q to an occupation mask.
 *
 * Returns the new mask and the fermionic sign, or null when the excitation
 * annihilates the state (q empty, or p already occupied and p != q).
 */
export function applySpinExcitation(
    mask: number,
    p: number,
    q: number,
): { mask: number; sign: number } | null {
    if (((mask >> q) & 1) === 0) return null;
    const removed = mask & ~(1 << q);
    if (((removed >> p) & 1) !== 0) return null;
    const sign =
        (popcountBelow(mask, q) + popcountBelow(removed, p)) % 2 === 0 ? 1 : -1;
    return { mask: removed | (1 << p), sign };
}

interface Basis {
    alphaMasks: number[];
    betaMasks: number[];
    alphaIndex: Map<number, number>;
    betaIndex: Map<number, number>;
}

function buildBasis(nOrb: number, nAlpha: number, nBeta: number): Basis {
    const alphaMasks = occupationMasks(nOrb, nAlpha);
    const betaMasks = occupationMasks(nOrb, nBeta);
    const alphaIndex = new Map(alphaMasks.map((m, i) => [m, i]));
    const betaIndex = new Map(betaMasks.map((m, i) => [m, i]));
    return { alphaMasks, betaMasks, alphaIndex, betaIndex };
}

interface Component {
    index: number;
    amplitude: number;
}

/** E_pq applied to one determinant: at most two resulting determinants. */
function applyEpq(
    basis: Basis,
    determinant: number,
    p: number,
    q: number,
): Component[] {
    const ia = Math.floor(determinant / basis.betaMasks.length);
    const ib = determinant % basis.betaMasks.length;
    const out: Component[] = [];
    const alpha = applySpinExcitation(basis.alphaMasks[ia]!, p, q);
    if (alpha !== null) {
        const ja = basis.alphaIndex.get(alpha.mask)!;
        out.push({ index: ja * basis.betaMasks.length + ib, amplitude: alpha.sign });
    }
    const beta = applySpinExcitation(basis.betaMasks[ib]!, p, q);
    if (beta !== null) {
        const jb = basis.betaIndex.get(beta.mask)!;
        out.push({ index: ia * basis.betaMasks.length + jb, amplitude: beta.sign });
    }
    return out;
}

/** Largest CI dimension the dense solver will accept. */
export const MAX_DENSE_DIMENSION = 4900;

/**
 * Ground-state energy of a spatial-orbital Hamiltonian in the
 * (nAlpha, nBeta) sector by dense diagonalization.
 *
 * @throws if the sector is empty or its dimension exceeds
 *   {@link MAX_DENSE_DIMENSION} (this checker targets small active spaces).
 */
export function casciGroundEnergy(
    hamiltonian: SpatialHamiltonian,
    nAlpha: number,
    nBeta: number,
): CasciResult {
    const n = hamiltonian.nOrb;
    if (n > 26) throw new Error(`too many orbitals for bitmask determinants: ${n}`);
    const basis = buildBasis(n, nAlpha, nBeta);
    const dim = basis.alphaMasks.length * basis.betaMasks.length;
    if (dim === 0) {
        throw new Error(
            `empty CI sector: ${nAlpha} alpha / ${nBeta} beta electrons in ${n} orbitals`,
        );
    }
    if (dim > MAX_DENSE_DIMENSION) {
        throw new Error(
            `CI dimension ${dim} exceeds the dense-solver limit ${MAX_DENSE_DIMENSION}; ` +
            `this cross-checker is meant for small active spaces`,
        );
    }

    // Effective one-body term absorbing the chemist-convention contraction
    // -1/2 sum_q (pq|qs) from reordering the two-body operator string.
    const heff: number[][] = [];
    for (let p = 0; p < n; p++) {
        heff.push(new Array<number>(n).fill(0));
        for (let s = 0; s < n; s++) {
            let acc = hamiltonian.h[p]![s]!;
            for (let q = 0; q < n; q++) {
                acc -= 0.5 * hamiltonian.g[eriIndex(p, q, q, s, n)]!;
            }
            heff[p]![s] = acc;
        }
    }

    const matrix: number[][] = [];
    for (let i = 0; i < dim; i++) matrix.push(new Array<number>(dim).fill(0));

    for (let j = 0; j < dim; j++) {
        matrix[j]![j] = matrix[j]![j]! + hamiltonian.eCore;
        for (let p = 0; p < n; p++) {
            for (let q = 0; q < n; q++) {
                const hpq = heff[p]![q]!;
                const firstHop = applyEpq(basis, j, p, q);
                if (hpq !== 0) {
                    for (const c1 of firstHop) {
                        matrix[c1.index]![j] = matrix[c1.index]![j]! + hpq * c1.amplitude;
                    }
                }
                // Two-body: 1/2 (rs|pq) E_rs E_pq with E_pq applied first.
                for (const c1 of firstHop) {
                    for (let r = 0; r < n; r++) {
                        for (let s = 0; s < n; s++) {
                            const grspq = hamiltonian.g[eriIndex(r, s, p, q, n)]!;
                            if (grspq === 0) continue;
                            for (const c2 of applyEpq(basis, c1.index, r, s)) {
                                matrix[c2.index]![j] =
                                    matrix[c2.index]![j]! +
                                    0.5 * grspq * c1.amplitude * c2.amplitude;
                            }
                        }
                    }
                }
            }
        }
    }

    const { values } = jacobiEigh(matrix);
    return { energy: values[0]!, dimension: dim };
}
