/** Emission: turn a manifest into an FCIDUMP file plus a pipeline job file. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join, relative } from "node:path";

import { formatFcidump } from "./fcidump";
import { countElectrons, Geometry, nuclearCharge } from "./geometry";
import { buildSto3gHydrogen, lowdinOrbitals, transformToOrbitalBasis } from "./integrals";
import { fcidumpJob, layoutTotals } from "./layout";
import { BridgeManifest, loadManifest, sha256File } from "./manifest";

/** What an emission run produced. */
export interface EmitResult {
    manifest: BridgeManifest;
    /** Absolute path of the written FCIDUMP, or null in layout-only mode. */
    fcidumpPath: string | null;
    /** Absolute path of the written job JSON. */
    layoutPath: string;
    /** Human-readable notes (layout-only fallback and the like). */
    messages: string[];
}

function writeJson(path: string, data: unknown): void {
    mkdirSync(dirname(path), { recursive: true });
    writeFileSync(path, JSON.stringify(data, null, 2) + "\n");
}

/**
 * Generate the artifacts a manifest asks for.
 *
 * With a geometry present the native STO-3G engine integrates it, Lowdin
 * orthogonalization makes the orbitals orthonormal, and both the FCIDUMP and
 * the job JSON are written; the manifest file is rewritten with the checksum
 * of the emitted FCIDUMP.  Without a geometry (non-hydrogen molecules) only
 * the job JSON is written and the message explains what is missing.
 */
export function emitFcidump(manifestPath: string): EmitResult {
    const manifest = loadManifest(manifestPath);
    const baseDir = dirname(manifestPath);
    const fcidumpPath = join(baseDir, manifest.fcidump);
    const layoutPath = join(baseDir, manifest.layout);
    const totals = layoutTotals(manifest.fragments);
    const messages: string[] = [];

    // The job file references the FCIDUMP relative to its own directory.
    const job = fcidumpJob(
        relative(dirname(layoutPath), fcidumpPath) || manifest.fcidump,
        manifest.fragments,
    );

    if (!manifest.geometry) {
        writeJson(layoutPath, job);
        messages.push(
            `${manifest.molecule}: no geometry in the manifest, so no integrals were ` +
            `generated — the native engine is hydrogen-only and '${manifest.basis}' ` +
            `integrals for this system must come from an external quantum-chemistry ` +
            `package; wrote the fragment layout job only`,
        );
        return { manifest, fcidumpPath: null, layoutPath, messages };
    }

    const geometry: Geometry = {
        atoms: manifest.geometry,
        charge: 0,
        spinMultiplicity: 1 + Math.abs(totals.nAlpha - totals.nBeta),
    };
    for (const [symbol] of geometry.atoms) nuclearCharge(symbol);

    const nElectrons = countElectrons(geometry);
    if (nElectrons !== totals.nAlpha + totals.nBeta) {
        throw new Error(
            `manifest fragments carry ${totals.nAlpha + totals.nBeta} electrons but the ` +
            `geometry has ${nElectrons}; adjust n_alpha/n_beta or the atom list`,
        );
    }
    if (geometry.atoms.length !== totals.nOrb) {
        throw new Error(
            `manifest fragments cover ${totals.nOrb} orbitals but the hydrogen basis ` +
            `has ${geometry.atoms.length} (one 1s function per atom)`,
        );
    }

    const ao = buildSto3gHydrogen(geometry);
    const hamiltonian = transformToOrbitalBasis(ao, lowdinOrbitals(ao.overlap));
    const text = formatFcidump(hamiltonian, nElectrons, totals.nAlpha - totals.nBeta);
    mkdirSync(dirname(fcidumpPath), { recursive: true });
    writeFileSync(fcidumpPath, text);

    manifest.checksum = sha256File(fcidumpPath);
    writeJson(layoutPath, job);
    writeJson(manifestPath, manifest);
    messages.push(
        `${manifest.molecule}: wrote ${manifest.fcidump} (${totals.nOrb} orbitals, ` +
        `${nElectrons} electrons) and ${manifest.layout}`,
    );
    return { manifest, fcidumpPath, layoutPath, messages };
}
