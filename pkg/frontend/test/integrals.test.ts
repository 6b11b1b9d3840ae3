import { describe, expect, it } from "vitest";

import { ANGSTROM_TO_BOHR } from "../src/constants";
import { h2Clusters } from "../src/geometry";
import {
    buildSto3gHydrogen,
    eriIndex,
    lowdinOrbitals,
    transformToOrbitalBasis,
} from "../src/integrals";

describe("STO-3G hydrogen integrals", () => {
    const h2 = buildSto3gHydrogen(h2Clusters(1, 1.0, 1.0));

    it("renormalizes each AO to unit self-overlap", () => {
        expect(Math.abs(h2.overlap[0]![0]! - 1)).toBeLessThan(1e-14);
        expect(Math.abs(h2.overlap[1]![1]! - 1)).toBeLessThan(1e-14);
        const cross = h2.overlap[0]![1]!;
        expect(cross).toBeGreaterThan(0);
        expect(cross).toBeLessThan(1);
        expect(h2.overlap[1]![0]).toBe(cross);
    });

    it("reproduces point-charge nuclear repulsion in closed form", () => {
        // Two protons 1.0 Angstrom apart: E = 1 / R_bohr.
        expect(Math.abs(h2.eNuc - 1 / ANGSTROM_TO_BOHR)).toBeLessThan(1e-14);
    });

    it("keeps the core Hamiltonian symmetric with negative diagonal", () => {
        expect(Math.abs(h2.core[0]![1]! - h2.core[1]![0]!)).toBeLessThan(1e-14);
        // Nuclear attraction dominates kinetic energy for a bound electron.
        expect(h2.core[0]![0]!).toBeLessThan(0);
    });

    it("fills the full 8-fold ERI symmetry orbit", () => {
        const h4 = buildSto3gHydrogen(h2Clusters(2, 1.46));
        const n = h4.nAo;
        const value = (p: number, q: number, r: number, s: number): number =>
            h4.eri[eriIndex(p, q, r, s, n)]!;
        for (const [p, q, r, s] of [
            [0, 1, 2, 3],
            [0, 2, 1, 3],
            [3, 1, 2, 0],
        ] as const) {
            const reference = value(p, q, r, s);
            expect(value(q, p, r, s)).toBe(reference);
            expect(value(p, q, s, r)).toBe(reference);
            expect(value(q, p, s, r)).toBe(reference);
            expect(value(r, s, p, q)).toBe(reference);
            expect(value(s, r, p, q)).toBe(reference);
            expect(value(r, s, q, p)).toBe(reference);
            expect(value(s, r, q, p)).toBe(reference);
        }
        // Same-index repulsion is the largest element of its row.
        expect(value(0, 0, 0, 0)).toBeGreaterThan(value(0, 0, 1, 1));
    });

    it("rejects non-hydrogen atoms with an actionable message", () => {
        expect(() =>
            buildSto3gHydrogen({
                atoms: [["He", [0, 0, 0]]],
                charge: 0,
                spinMultiplicity: 1,
            }),
        ).toThrow(/hydrogen only.*FCIDUMP/s);
    });
});

describe("orbital orthogonalization", () => {
    const geometry = h2Clusters(2, 1.46);
    const ao = buildSto3gHydrogen(geometry);
    const orbitals = lowdinOrbitals(ao.overlap);

    it("produces orthonormal orbitals: C^T S C = identity", () => {
        const n = ao.nAo;
        for (let p = 0; p < n; p++) {
            for (let q = 0; q < n; q++) {
                let acc = 0;
                for (let i = 0; i < n; i++) {
                    for (let j = 0; j < n; j++) {
                        acc += orbitals[i]![p]! * ao.overlap[i]![j]! * orbitals[j]![q]!;
                    }
                }
                expect(Math.abs(acc - (p === q ? 1 : 0))).toBeLessThan(1e-12);
            }
        }
    });

    it("keeps transformed integrals symmetric", () => {
        const ham = transformToOrbitalBasis(ao, orbitals);
        const n = ham.nOrb;
        for (let p = 0; p < n; p++) {
            for (let q = 0; q < n; q++) {
                expect(Math.abs(ham.h[p]![q]! - ham.h[q]![p]!)).toBeLessThan(1e-12);
                for (let r = 0; r < n; r++) {
                    for (let s = 0; s < n; s++) {
                        const reference = ham.g[eriIndex(p, q, r, s, n)]!;
                        for (const mirrored of [
                            ham.g[eriIndex(q, p, r, s, n)]!,
                            ham.g[eriIndex(p, q, s, r, n)]!,
                            ham.g[eriIndex(r, s, p, q, n)]!,
                        ]) {
                            expect(Math.abs(mirrored - reference)).toBeLessThan(1e-12);
                        }
                    }
                }
            }
        }
        expect(ham.eCore).toBe(ao.eNuc);
    });

    it("flags a numerically singular overlap", () => {
        // Two hydrogens on top of each other make the basis linearly dependent.
        const fused = buildSto3gHydrogen({
            atoms: [
                ["H", [0, 0, 0]],
                ["H", [0, 0, 1e-7]],
            ],
            charge: 0,
            spinMultiplicity: 1,
        });
        expect(() => lowdinOrbitals(fused.overlap)).toThrow(/singular/);
    });
});

describe("hydrogen cluster geometry", () => {
    it("places H2 units along x with bonds along y", () => {
        const geometry = h2Clusters(2, 1.46);
        expect(geometry.atoms).toEqual([
            ["H", [0, -0.5, 0]],
            ["H", [0, 0.5, 0]],
            ["H", [1.46, -0.5, 0]],
            ["H", [1.46, 0.5, 0]],
        ]);
    });

    it("validates its arguments", () => {
        expect(() => h2Clusters(0, 1.0)).toThrow("at least one");
        expect(() => h2Clusters(1, -1.0)).toThrow("positive");
    });
});
