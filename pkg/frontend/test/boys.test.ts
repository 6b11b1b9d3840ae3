import { describe, expect, it } from "vitest";

import { boysF0 } from "../src/integrals";

/** Composite Simpson quadrature of exp(-t x^2) over [0, 1]. */
function boysByQuadrature(t: number, panels = 20000): number {
    const f = (x: number): number => Math.exp(-t * x * x);
    const h = 1 / panels;
    let sum = f(0) + f(1);
    for (let i = 1; i < panels; i++) {
        sum += f(i * h) * (i % 2 === 1 ? 4 : 2);
    }
    return (sum * h) / 3;
}

describe("zeroth Boys function", () => {
    it("matches an independent quadrature across the argument range", () => {
        for (const t of [0, 1e-13, 1e-6, 0.1, 0.5, 1, 2, 5, 10, 20, 30, 35.9, 36.1, 50, 96]) {
            expect(Math.abs(boysF0(t) - boysByQuadrature(t))).toBeLessThan(1e-12);
        }
    });

    it("is 1 at zero and decreases monotonically", () => {
        expect(boysF0(0)).toBe(1);
        let previous = boysF0(0);
        for (let t = 0.25; t <= 60; t += 0.25) {
            const value = boysF0(t);
            expect(value).toBeLessThan(previous);
            expect(value).toBeGreaterThan(0);
            previous = value;
        }
    });

    it("is continuous across the series/asymptotic crossover", () => {
        const below = boysF0(36.0 - 1e-12);
        const above = boysF0(36.0 + 1e-12);
        expect(Math.abs(below - above)).toBeLessThan(1e-14);
    });

    it("approaches the large-argument limit sqrt(pi/t)/2", () => {
        for (const t of [40, 80, 160]) {
            expect(Math.abs(boysF0(t) - 0.5 * Math.sqrt(Math.PI / t))).toBeLessThan(1e-16);
        }
    });
});
