/** Native STO-3G integral engine for hydrogen clusters.
 *
 * All closed-form s-type Gaussian work: overlap, kinetic, nuclear attraction,
 * four-index electron repulsion in chemist convention (pq|rs), plus symmetric
 * (Lowdin) orthogonalization into an orthonormal orbital basis ready for
 * FCIDUMP emission.  Energies are in hartree, distances enter in Angstrom and
 * are converted to bohr internally.
 */

import {
    ANGSTROM_TO_BOHR,
    STO3G_H_COEFFS,
    STO3G_H_EXPONENTS,
} from "./constants";
import { Geometry, nuclearCharge } from "./geometry";
import { congruence, jacobiEigh } from "./linalg";

/** AO-basis integrals: overlap, core Hamiltonian, ERIs (chemist), nuclear energy. */
export interface AoIntegrals {
    overlap: number[][];
    core: number[][];
    /** Flat (nAo^4) chemist-ordered ERI tensor; see {@link eriIndex}. */
    eri: Float64Array;
    eNuc: number;
    nAo: number;
}

/** Orthonormal-orbital Hamiltonian: constant + one-body h + two-body g (chemist). */
export interface SpatialHamiltonian {
    nOrb: number;
    eCore: number;
    h: number[][];
    /** Flat (nOrb^4) chemist-ordered tensor: g[eriIndex(p,q,r,s,n)] = (pq|rs). */
    g: Float64Array;
}

/** Flat index of the chemist-ordered four-index tensor entry (pq|rs). */
export function eriIndex(p: number, q: number, r: number, s: number, n: number): number {
    return ((p * n + q) * n + r) * n + s;
}

/**
 * Zeroth Boys function F0(t) = integral of exp(-t x^2) over x in [0, 1].
 *
 * Evaluated without an erf primitive: a Kummer-transformed power series with
 * all-positive terms below the crossover, and the exact large-argument limit
 * sqrt(pi/t)/2 above it (the remainder there is below double precision).
 */
export function boysF0(t: number): number {
    if (t < 1e-12) return 1.0 - t / 3.0;
    if (t > 36.0) return 0.5 * Math.sqrt(Math.PI / t);
    let term = 1.0;
    let sum = 1.0;
    for (let k = 1; k < 400; k++) {
        term *= (2.0 * t) / (2 * k + 1);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return Math.exp(-t) * sum;
}

function dist2(a: readonly number[], b: readonly number[]): number {
    const dx = a[0]! - b[0]!;
    const dy = a[1]! - b[1]!;
    const dz = a[2]! - b[2]!;
    return dx * dx + dy * dy + dz * dz;
}

interface ContractedBasis {
    exps: number[];
    coeffs: number[];
}

/** STO-3G 1s contraction with primitive norms folded in and unit self-overlap. */
function hydrogenBasis(): ContractedBasis {
    const exps = [...STO3G_H_EXPONENTS];
    const coeffs = STO3G_H_COEFFS.map(
        (c, i) => c * Math.pow((2.0 * exps[i]!) / Math.PI, 0.75),
    );
    let selfOverlap = 0;
    for (let i = 0; i < exps.length; i++) {
        for (let j = 0; j < exps.length; j++) {
            selfOverlap +=
                coeffs[i]! * coeffs[j]! * Math.pow(Math.PI / (exps[i]! + exps[j]!), 1.5);
        }
    }
    const norm = 1 / Math.sqrt(selfOverlap);
    return { exps, coeffs: coeffs.map((c) => c * norm) };
}

/**
 * STO-3G AO integrals for an all-hydrogen geometry.
 *
 * One 1s contracted Gaussian per atom, renormalized so each AO self-overlap
 * is exactly 1.  Throws for non-hydrogen atoms.
 */
export function buildSto3gHydrogen(geometry: Geometry): AoIntegrals {
    const charges = geometry.atoms.map(([symbol]) => nuclearCharge(symbol));
    const centers = geometry.atoms.map(([, xyz]) => xyz.map((c) => c * ANGSTROM_TO_BOHR));
    const nAo = centers.length;
    const { exps, coeffs } = hydrogenBasis();
    const npr = exps.length;

    const overlap: number[][] = [];
    const kinetic: number[][] = [];
    const nuclear: number[][] = [];
    for (let i = 0; i < nAo; i++) {
        overlap.push(new Array<number>(nAo).fill(0));
        kinetic.push(new Array<number>(nAo).fill(0));
        nuclear.push(new Array<number>(nAo).fill(0));
    }

    for (let i = 0; i < nAo; i++) {
        for (let j = 0; j <= i; j++) {
            const ab2 = dist2(centers[i]!, centers[j]!);
            let s = 0;
            let t = 0;
            let v = 0;
            for (let ia = 0; ia < npr; ia++) {
                const a = exps[ia]!;
                for (let ib = 0; ib < npr; ib++) {
                    const b = exps[ib]!;
                    const p = a + b;
                    const mu = (a * b) / p;
                    const pref = coeffs[ia]! * coeffs[ib]! * Math.exp(-mu * ab2);
                    const radial = Math.pow(Math.PI / p, 1.5);
                    s += pref * radial;
                    t += pref * mu * (3.0 - 2.0 * mu * ab2) * radial;
                    const pc = centers[i]!.map(
                        (ci, d) => (a * ci + b * centers[j]![d]!) / p,
                    );
                    for (let c = 0; c < nAo; c++) {
                        const r2 = dist2(pc, centers[c]!);
                        v -= charges[c]! * pref * ((2.0 * Math.PI) / p) * boysF0(p * r2);
                    }
                }
            }
            overlap[i]![j] = overlap[j]![i] = s;
            kinetic[i]![j] = kinetic[j]![i] = t;
            nuclear[i]![j] = nuclear[j]![i] = v;
        }
    }

    const eri = new Float64Array(nAo * nAo * nAo * nAo);
    const pairs: [number, number][] = [];
    for (let i = 0; i < nAo; i++) for (let j = 0; j <= i; j++) pairs.push([i, j]);
    for (let ij = 0; ij < pairs.length; ij++) {
        const [i, j] = pairs[ij]!;
        const ab2 = dist2(centers[i]!, centers[j]!);
        for (let kl = 0; kl <= ij; kl++) {
            const [k, l] = pairs[kl]!;
            const cd2 = dist2(centers[k]!, centers[l]!);
            let value = 0;
            for (let ia = 0; ia < npr; ia++) {
                const a = exps[ia]!;
                for (let ib = 0; ib < npr; ib++) {
                    const b = exps[ib]!;
                    const p = a + b;
                    const pc = centers[i]!.map(
                        (ci, d) => (a * ci + b * centers[j]![d]!) / p,
                    );
                    const eAb = Math.exp((-a * b * ab2) / p);
                    for (let ic = 0; ic < npr; ic++) {
                        const c = exps[ic]!;
                        for (let id = 0; id < npr; id++) {
                            const d = exps[id]!;
                            const q = c + d;
                            const qc = centers[k]!.map(
                                (ck, e) => (c * ck + d * centers[l]![e]!) / q,
                            );
                            const eCd = Math.exp((-c * d * cd2) / q);
                            const r2 = dist2(pc, qc);
                            value +=
                                coeffs[ia]! * coeffs[ib]! * coeffs[ic]! * coeffs[id]! *
                                ((2.0 * Math.pow(Math.PI, 2.5)) /
                                    (p * q * Math.sqrt(p + q))) *
                                eAb * eCd *
                                boysF0(((p * q) / (p + q)) * r2);
                        }
                    }
                }
            }
            for (const [ai, bj] of [[i, j], [j, i]] as const) {
                for (const [ck, dl] of [[k, l], [l, k]] as const) {
                    eri[eriIndex(ai, bj, ck, dl, nAo)] = value;
                    eri[eriIndex(ck, dl, ai, bj, nAo)] = value;
                }
            }
        }
    }

    let eNuc = 0;
    for (let i = 0; i < nAo; i++) {
        for (let j = 0; j < i; j++) {
            eNuc += (charges[i]! * charges[j]!) / Math.sqrt(dist2(centers[i]!, centers[j]!));
        }
    }

    const core: number[][] = [];
    for (let i = 0; i < nAo; i++) {
        core.push(new Array<number>(nAo).fill(0));
        for (let j = 0; j < nAo; j++) core[i]![j] = kinetic[i]![j]! + nuclear[i]![j]!;
    }
    return { overlap, core, eri, eNuc, nAo };
}

/**
 * Symmetric (Lowdin) orthogonalization: columns of the returned matrix are
 * orthonormal orbitals, C = S^(-1/2).
 *
 * @throws if the overlap matrix is numerically singular (smallest eigenvalue
 *   below 1e-8), which signals a linearly dependent basis.
 */
export function lowdinOrbitals(overlap: number[][]): number[][] {
    const n = overlap.length;
    const { values, vectors } = jacobiEigh(overlap);
    const smallest = values[0] ?? 1;
    if (smallest < 1e-8) {
        throw new Error(
            `AO overlap matrix is numerically singular (eigenvalue ${smallest.toExponential(3)}); ` +
            `the geometry places basis functions too close together`,
        );
    }
    const c: number[][] = [];
    for (let i = 0; i < n; i++) {
        c.push(new Array<number>(n).fill(0));
        for (let j = 0; j < n; j++) {
            let acc = 0;
            for (let k = 0; k < n; k++) {
                acc += (vectors[i]![k]! * vectors[j]![k]!) / Math.sqrt(values[k]!);
            }
            c[i]![j] = acc;
        }
    }
    return c;
}

/**
 * Transform AO integrals into an orthonormal orbital basis.
 *
 * @param ao AO integrals from {@link buildSto3gHydrogen}
 * @param orbitals coefficient matrix with orthonormal columns (e.g. Lowdin)
 */
export function transformToOrbitalBasis(
    ao: AoIntegrals,
    orbitals: number[][],
): SpatialHamiltonian {
    const n = ao.nAo;
    const h = congruence(ao.core, orbitals);

    // Four quarter transforms of the chemist-ordered ERI tensor.
    let current = ao.eri;
    for (let stage = 0; stage < 4; stage++) {
        const next = new Float64Array(n * n * n * n);
        for (let p = 0; p < n; p++) {
            for (let q = 0; q < n; q++) {
                for (let r = 0; r < n; r++) {
                    for (let s = 0; s < n; s++) {
                        let acc = 0;
                        for (let m = 0; m < n; m++) {
                            // Contract the last slot and move the new orbital
                            // index to the front; four stages restore the order.
                            acc += current[eriIndex(q, r, s, m, n)]! * orbitals[m]![p]!;
                        }
                        next[eriIndex(p, q, r, s, n)] = acc;
                    }
                }
            }
        }
        current = next;
    }
    return { nOrb: n, eCore: ao.eNuc, h, g: current };
}
