/** Bridge manifests: what to generate, where to put it, how to verify it. */

import { createHash } from "node:crypto";
import { readFileSync } from "node:fs";

import { Atom } from "./geometry";
import { FragmentJson, layoutTotals } from "./layout";

/**
 * A generation manifest: molecule identity, basis, active-space layout and
 * output paths.  ``checksum`` is filled in by emission and must match the
 * emitted FCIDUMP file afterwards.
 */
export interface BridgeManifest {
    /** Human-readable molecule name (e.g. "H4", "trans-butadiene"). */
    molecule: string;
    /** Basis-set label the integrals are (or would be) computed in. */
    basis: string;
    /** Active-space layout, one entry per fragment. */
    fragments: FragmentJson[];
    /** Explicit geometry in Angstrom; omit for molecules the native
     * hydrogen-only engine cannot integrate. */
    geometry?: Atom[];
    /** Output path of the FCIDUMP file, relative to the manifest. */
    fcidump: string;
    /** Output path of the job JSON, relative to the manifest. */
    layout: string;
    /** "sha256:<hex>" of the emitted FCIDUMP file. */
    checksum?: string;
}

/** "sha256:<hex>" digest of a file's bytes. */
export function sha256File(path: string): string {
    const digest = createHash("sha256").update(readFileSync(path)).digest("hex");
    return `sha256:${digest}`;
}

function expectString(data: Record<string, unknown>, field: string, path: string): string {
    const value = data[field];
    if (typeof value !== "string" || value.length === 0) {
        throw new Error(`${path}: manifest field '${field}' must be a non-empty string`);
    }
    return value;
}

/** Parse and validate a manifest file, with actionable messages on defects. */
export function loadManifest(path: string): BridgeManifest {
    let data: Record<string, unknown>;
    try {
        data = JSON.parse(readFileSync(path, "utf8")) as Record<string, unknown>;
    } catch (error) {
        const reason = error instanceof Error ? error.message : String(error);
        throw new Error(`${path}: not readable as JSON manifest: ${reason}`);
    }
    const molecule = expectString(data, "molecule", path);
    const basis = expectString(data, "basis", path);
    const fcidump = expectString(data, "fcidump", path);
    const layout = expectString(data, "layout", path);

    if (!Array.isArray(data["fragments"]) || data["fragments"].length === 0) {
        throw new Error(`${path}: manifest field 'fragments' must be a non-empty array`);
    }
    const fragments = data["fragments"] as FragmentJson[];
    for (const [k, fragment] of fragments.entries()) {
        if (
            !Array.isArray(fragment.orbitals) ||
            typeof fragment.n_alpha !== "number" ||
            typeof fragment.n_beta !== "number"
        ) {
            throw new Error(
                `${path}: fragment ${k} needs 'orbitals', 'n_alpha' and 'n_beta'`,
            );
        }
    }
    layoutTotals(fragments);

    let geometry: Atom[] | undefined;
    if (data["geometry"] !== undefined) {
        if (!Array.isArray(data["geometry"])) {
            throw new Error(`${path}: manifest field 'geometry' must be an array of atoms`);
        }
        geometry = (data["geometry"] as unknown[]).map((entry, i) => {
            const atom = entry as [string, [number, number, number]];
            if (
                !Array.isArray(atom) ||
                atom.length !== 2 ||
                typeof atom[0] !== "string" ||
                !Array.isArray(atom[1]) ||
                atom[1].length !== 3 ||
                !atom[1].every((c) => typeof c === "number" && Number.isFinite(c))
            ) {
                throw new Error(
                    `${path}: geometry entry ${i} must look like ["H", [x, y, z]]`,
                );
            }
            return [atom[0], [atom[1][0], atom[1][1], atom[1][2]]];
        });
    }

    const manifest: BridgeManifest = { molecule, basis, fragments, fcidump, layout };
    if (geometry) manifest.geometry = geometry;
    if (data["checksum"] !== undefined) {
        if (typeof data["checksum"] !== "string") {
            throw new Error(`${path}: manifest field 'checksum' must be a string`);
        }
        manifest.checksum = data["checksum"];
    }
    return manifest;
}
