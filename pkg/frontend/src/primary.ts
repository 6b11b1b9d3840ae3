/** Adapter that drives the main pipeline's command-line interface.
 *
 * The bridge talks to the pipeline exclusively through its public surfaces:
 * FCIDUMP files, job JSON files and the ``lasuscc`` executable.  Nothing here
 * imports pipeline code.
 */

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** The pipeline executable; override with the LASUSCC_BIN environment variable. */
export function primaryBinary(): string {
    return process.env["LASUSCC_BIN"] ?? "lasuscc";
}

function run(args: string[]): string {
    const binary = primaryBinary();
    try {
        return execFileSync(binary, args, { encoding: "utf8" });
    } catch (error) {
        const err = error as NodeJS.ErrnoException & { stderr?: string };
        if (err.code === "ENOENT") {
            throw new Error(
                `pipeline executable '${binary}' not found on PATH; install the Python ` +
                `package (pip install -e .) or point LASUSCC_BIN at it`,
            );
        }
        const detail = err.stderr ? `: ${String(err.stderr).trim()}` : "";
        throw new Error(`'${binary} ${args.join(" ")}' failed${detail}`);
    }
}

/** Exact diagonalization energy reported by the pipeline for a job file. */
export function primaryCasciEnergy(jobPath: string): number {
    const scratch = mkdtempSync(join(tmpdir(), "bridge-"));
    try {
        const reportPath = join(scratch, "report.json");
        run(["casci", "--job", jobPath, "--out", reportPath]);
        const report = JSON.parse(readFileSync(reportPath, "utf8")) as {
            stages?: { reference?: { energy?: number } };
        };
        const energy = report.stages?.reference?.energy;
        if (typeof energy !== "number") {
            throw new Error(`pipeline report ${reportPath} carries no reference energy`);
        }
        return energy;
    } finally {
        rmSync(scratch, { recursive: true, force: true });
    }
}

/** The "singles N, doubles M, total T" line the pipeline prints for a job. */
export function primaryCountLine(jobPath: string): string {
    return run(["count", "--job", jobPath]).trim();
}
