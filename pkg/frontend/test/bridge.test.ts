/** End-to-end cross-validation against the installed pipeline CLI.
 *
 * These tests spawn the real ``lasuscc`` executable; everything generated
 * lands in a throwaway scratch directory.  The two headline checks: a
 * bridge-generated H4 FCIDUMP must reproduce the pipeline's native-integral
 * exact-diagonalization energy within 1e-6 hartree, and the shipped layout
 * manifests must make the pipeline report the expected parameter counts.
 */

import { copyFileSync, mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, describe, expect, it } from "vitest";

import { casciGroundEnergy } from "../src/casci";
import { checkFcidump } from "../src/check";
import { emitFcidump } from "../src/emit";
import { parseFcidump } from "../src/fcidump";
import { main } from "../src/main";
import { sha256File } from "../src/manifest";
import { primaryCasciEnergy, primaryCountLine } from "../src/primary";

const HERE = fileURLToPath(new URL(".", import.meta.url));
const FIXTURES = join(HERE, "fixtures");
const MANIFESTS = join(HERE, "..", "manifests");

const scratch = mkdtempSync(join(tmpdir(), "bridge-integration-"));
afterAll(() => rmSync(scratch, { recursive: true, force: true }));

/** Copy a shipped manifest into the scratch directory and emit it there. */
function emitShippedManifest(name: string) {
    const target = join(scratch, name);
    copyFileSync(join(MANIFESTS, name), target);
    return emitFcidump(target);
}

describe("H4 cross-validation", () => {
    const emitted = emitShippedManifest("h4.json");

    it("emits the FCIDUMP, the job file and a matching checksum", () => {
        expect(emitted.fcidumpPath).not.toBeNull();
        expect(emitted.manifest.checksum).toMatch(/^sha256:[0-9a-f]{64}$/);
        expect(sha256File(emitted.fcidumpPath!)).toBe(emitted.manifest.checksum);
        const job = JSON.parse(readFileSync(emitted.layoutPath, "utf8"));
        expect(job.system.fcidump).toBeTypeOf("string");
        expect(job.fragments).toHaveLength(2);
    });

    it("agrees with the pipeline on the bridge-generated file", () => {
        // Bare-hex checksum form, as the CLI's --sha256 flag supplies it;
        // the manifest's "sha256:"-prefixed form is covered below.
        const report = checkFcidump(emitted.fcidumpPath!, {
            jobPath: emitted.layoutPath,
            checksum: emitted.manifest.checksum!.replace(/^sha256:/, ""),
        });
        expect(report.dimension).toBe(36);
        expect(report.checksumOk).toBe(true);
        expect(report.delta).toBeLessThan(1e-6);
        expect(report.pass).toBe(true);
    });

    it("reproduces the pipeline's native-integral energy within 1e-6", () => {
        // The pipeline integrates the same geometry with its own engine and
        // its own orbital choice; the exact energy is basis-independent, so
        // the two FCI values must coincide.
        const nativeJobPath = join(scratch, "h4_native_job.json");
        writeFileSync(
            nativeJobPath,
            JSON.stringify({
                system: { h2_clusters: { n_units: 2, separation: 1.46 } },
                fragments: [
                    { orbitals: [0, 1], n_alpha: 1, n_beta: 1 },
                    { orbitals: [2, 3], n_alpha: 1, n_beta: 1 },
                ],
            }) + "\n",
        );
        const nativeEnergy = primaryCasciEnergy(nativeJobPath);
        const bridgeEnergy = primaryCasciEnergy(emitted.layoutPath);
        expect(Math.abs(bridgeEnergy - nativeEnergy)).toBeLessThan(1e-6);
    });

    it("passes through the command-line surface too", () => {
        expect(main(["check", "--manifest", join(scratch, "h4.json")])).toBe(0);
    });
});

describe("pipeline-written FCIDUMP consumed by the bridge", () => {
    // The fixture was written by the pipeline's own FCIDUMP writer for the
    // same H4 system (native fragment-localized orbitals).  Values survive
    // the 17-significant-digit text format exactly, so solving the parsed
    // integrals must land on the pipeline's own answer for the same file.
    const fixture = join(FIXTURES, "h4_native.fcidump");

    it("yields the pipeline's energy from independently parsed integrals", () => {
        const integrals = parseFcidump(readFileSync(fixture, "utf8"));
        const ground = casciGroundEnergy(integrals, 2, 2);
        expect(ground.dimension).toBe(36);
        const report = checkFcidump(fixture);
        expect(report.bridgeEnergy).toBe(ground.energy);
        expect(report.delta).toBeLessThan(1e-9);
        expect(report.pass).toBe(true);
        // Frozen value observed from the pipeline on this exact file.
        expect(Math.abs(ground.energy - -2.1150090536823534)).toBeLessThan(1e-9);
    });

    it("gives the same energy as the bridge-generated orbitals", () => {
        const nativeBasis = casciGroundEnergy(
            parseFcidump(readFileSync(fixture, "utf8")),
            2,
            2,
        ).energy;
        const lowdinBasis = casciGroundEnergy(
            parseFcidump(readFileSync(join(scratch, "out", "h4_bridge.fcidump"), "utf8")),
            2,
            2,
        ).energy;
        expect(Math.abs(nativeBasis - lowdinBasis)).toBeLessThan(1e-6);
    });
});

describe("layout-only manifests for non-hydrogen molecules", () => {
    it("confirms the butadiene parameter count through the pipeline", () => {
        const emitted = emitShippedManifest("butadiene.json");
        expect(emitted.fcidumpPath).toBeNull();
        expect(emitted.messages[0]).toMatch(/external quantum-chemistry package/);
        expect(primaryCountLine(emitted.layoutPath)).toBe(
            "singles 32, doubles 2472, total 2504",
        );
    });

    it("confirms the chromium-dimer parameter count through the pipeline", () => {
        const emitted = emitShippedManifest("cr_dimer.json");
        expect(emitted.fcidumpPath).toBeNull();
        expect(primaryCountLine(emitted.layoutPath)).toBe(
            "singles 18, doubles 756, total 774",
        );
    });
});

describe("defect handling", () => {
    it("detects a tampered FCIDUMP through the checksum", () => {
        const emitted = emitShippedManifest("h4.json");
        const tampered = join(scratch, "tampered.fcidump");
        const text = readFileSync(emitted.fcidumpPath!, "utf8");
        // Bump the first digit after a decimal point; every integral record
        // has one, so the mutation is guaranteed to change the file.
        const mutated = text.replace(
            /(\d)\.(\d)/,
            (_match, whole: string, frac: string) => `${whole}.${(Number(frac) + 1) % 10}`,
        );
        expect(mutated).not.toBe(text);
        writeFileSync(tampered, mutated);
        const report = checkFcidump(tampered, { checksum: emitted.manifest.checksum! });
        expect(report.checksumOk).toBe(false);
        expect(report.pass).toBe(false);
    });

    it("rejects manifests whose electrons disagree with the geometry", () => {
        const manifestPath = join(scratch, "broken.json");
        writeFileSync(
            manifestPath,
            JSON.stringify({
                molecule: "H2",
                basis: "sto-3g",
                fragments: [{ orbitals: [0, 1], n_alpha: 2, n_beta: 2 }],
                geometry: [
                    ["H", [0, -0.5, 0]],
                    ["H", [0, 0.5, 0]],
                ],
                fcidump: "out/broken.fcidump",
                layout: "out/broken.job.json",
            }) + "\n",
        );
        expect(() => emitFcidump(manifestPath)).toThrow(/4 electrons but the geometry has 2/);
    });

    it("rejects non-hydrogen geometry with an actionable message", () => {
        const manifestPath = join(scratch, "oxygen.json");
        writeFileSync(
            manifestPath,
            JSON.stringify({
                molecule: "OH-",
                basis: "sto-3g",
                fragments: [{ orbitals: [0], n_alpha: 1, n_beta: 1 }],
                geometry: [["O", [0, 0, 0]]],
                fcidump: "out/oh.fcidump",
                layout: "out/oh.job.json",
            }) + "\n",
        );
        expect(() => emitFcidump(manifestPath)).toThrow(/hydrogen only/);
    });
});
