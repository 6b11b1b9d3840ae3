import { describe, expect, it } from "vitest";

import { congruence, jacobiEigh } from "../src/linalg";

/** Deterministic linear-congruential values in [-1, 1). */
function* lcg(seed: number): Generator<number> {
    let state = seed >>> 0;
    for (;;) {
        state = (Math.imul(state, 1664525) + 1013904223) >>> 0;
        yield (state / 2 ** 31) - 1;
    }
}

function randomSymmetric(n: number, seed: number): number[][] {
    const draw = lcg(seed);
    const a: number[][] = [];
    for (let i = 0; i < n; i++) a.push(new Array<number>(n).fill(0));
    for (let i = 0; i < n; i++) {
        for (let j = 0; j <= i; j++) {
            const value = draw.next().value as number;
            a[i]![j] = a[j]![i] = value;
        }
    }
    return a;
}

describe("jacobi eigensolver", () => {
    it("leaves a diagonal matrix alone, sorted ascending", () => {
        const { values, vectors } = jacobiEigh([
            [3, 0, 0],
            [0, -1, 0],
            [0, 0, 2],
        ]);
        expect(values).toEqual([-1, 2, 3]);
        // Each eigenvector is a signed unit coordinate vector.
        expect(Math.abs(vectors[1]![0]!)).toBe(1);
        expect(Math.abs(vectors[2]![1]!)).toBe(1);
        expect(Math.abs(vectors[0]![2]!)).toBe(1);
    });

    it("solves the classic 2x2 analytically", () => {
        const { values } = jacobiEigh([
            [2, 1],
            [1, 2],
        ]);
        expect(Math.abs(values[0]! - 1)).toBeLessThan(1e-14);
        expect(Math.abs(values[1]! - 3)).toBeLessThan(1e-14);
    });

    it("produces orthonormal vectors with small residuals on random input", () => {
        const n = 14;
        const a = randomSymmetric(n, 20240817);
        const { values, vectors } = jacobiEigh(a);
        for (let j = 0; j + 1 < n; j++) {
            expect(values[j]!).toBeLessThanOrEqual(values[j + 1]!);
        }
        for (let j = 0; j < n; j++) {
            // Residual ||A v - lambda v||.
            let residual = 0;
            for (let i = 0; i < n; i++) {
                let av = 0;
                for (let k = 0; k < n; k++) av += a[i]![k]! * vectors[k]![j]!;
                residual += (av - values[j]! * vectors[i]![j]!) ** 2;
            }
            expect(Math.sqrt(residual)).toBeLessThan(1e-12);
            for (let m = 0; m <= j; m++) {
                let dot = 0;
                for (let i = 0; i < n; i++) dot += vectors[i]![j]! * vectors[i]![m]!;
                expect(Math.abs(dot - (m === j ? 1 : 0))).toBeLessThan(1e-12);
            }
        }
    });

    it("rejects non-square and non-symmetric input", () => {
        expect(() => jacobiEigh([[1, 2]])).toThrow("not square");
        expect(() =>
            jacobiEigh([
                [1, 2],
                [3, 1],
            ]),
        ).toThrow("not symmetric");
    });

    it("computes congruence transforms A^T B A", () => {
        const b = [
            [1, 2],
            [2, 5],
        ];
        const a = [
            [0, 1],
            [1, 0],
        ];
        expect(congruence(b, a)).toEqual([
            [5, 2],
            [2, 1],
        ]);
    });
});
