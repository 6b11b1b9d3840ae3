/** Cross-validation: independently parse an FCIDUMP, solve it, and compare
 * against the main pipeline's exact-diagonalization answer on the same file.
 */

import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { casciGroundEnergy } from "./casci";
import { parseFcidump } from "./fcidump";
import { fcidumpJob, fragmentsFromCounts } from "./layout";
import { sha256File } from "./manifest";
import { primaryCasciEnergy } from "./primary";

/** Everything a cross-check run measured. */
export interface CheckReport {
    fcidumpPath: string;
    nOrb: number;
    nElectrons: number;
    ms2: number;
    dimension: number;
    /** null when no expected checksum was supplied. */
    checksumOk: boolean | null;
    bridgeEnergy: number;
    primaryEnergy: number;
    delta: number;
    tolerance: number;
    pass: boolean;
}

/** Options for {@link checkFcidump}. */
export interface CheckOptions {
    /** Existing job file to hand the pipeline; a single-fragment job covering
     * the whole space is synthesized when omitted. */
    jobPath?: string;
    /** Expected checksum of the file, as "sha256:<hex>" or bare hex. */
    checksum?: string;
    /** Energy agreement tolerance in hartree. */
    tolerance?: number;
}

/**
 * Parse ``fcidumpPath`` with the bridge's own reader, diagonalize with the
 * bridge's own dense CI, run the pipeline's ``casci`` on the same file, and
 * report both energies with their difference.
 *
 * The electron counts come from the NELEC/MS2 header fields, which must be
 * present and consistent.
 */
export function checkFcidump(fcidumpPath: string, options: CheckOptions = {}): CheckReport {
    const tolerance = options.tolerance ?? 1e-6;

    let checksumOk: boolean | null = null;
    if (options.checksum !== undefined) {
        const expected = options.checksum.replace(/^sha256:/i, "").toLowerCase();
        const actual = sha256File(fcidumpPath).replace(/^sha256:/, "");
        checksumOk = actual === expected;
    }

    const integrals = parseFcidump(readFileSync(fcidumpPath, "utf8"));
    if (integrals.nElectrons === null) {
        throw new Error(`${fcidumpPath}: header carries no NELEC; cannot pick a CI sector`);
    }
    const ms2 = integrals.ms2 ?? 0;
    if ((integrals.nElectrons + ms2) % 2 !== 0 || Math.abs(ms2) > integrals.nElectrons) {
        throw new Error(
            `${fcidumpPath}: NELEC=${integrals.nElectrons} and MS2=${ms2} are inconsistent`,
        );
    }
    const nAlpha = (integrals.nElectrons + ms2) / 2;
    const nBeta = integrals.nElectrons - nAlpha;

    const bridge = casciGroundEnergy(integrals, nAlpha, nBeta);

    let primaryEnergy: number;
    if (options.jobPath !== undefined) {
        primaryEnergy = primaryCasciEnergy(options.jobPath);
    } else {
        const scratch = mkdtempSync(join(tmpdir(), "bridge-"));
        try {
            const jobPath = join(scratch, "job.json");
            const fragments = fragmentsFromCounts([integrals.nOrb], [[nAlpha, nBeta]]);
            writeFileSync(
                jobPath,
                JSON.stringify(fcidumpJob(resolve(fcidumpPath), fragments), null, 2) + "\n",
            );
            primaryEnergy = primaryCasciEnergy(jobPath);
        } finally {
            rmSync(scratch, { recursive: true, force: true });
        }
    }

    const delta = Math.abs(bridge.energy - primaryEnergy);
    return {
        fcidumpPath,
        nOrb: integrals.nOrb,
        nElectrons: integrals.nElectrons,
        ms2,
        dimension: bridge.dimension,
        checksumOk,
        bridgeEnergy: bridge.energy,
        primaryEnergy,
        delta,
        tolerance,
        pass: delta <= tolerance && checksumOk !== false,
    };
}
