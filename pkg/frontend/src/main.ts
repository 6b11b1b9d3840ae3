/** Command-line entry point for the bridge.
 *
 * Usage:
 *   bridge emit  <manifest.json>
 *   bridge check <fcidump> [--job <job.json>] [--sha256 <sha256:hex>] [--tol <hartree>]
 *   bridge check --manifest <manifest.json>
 */

import { dirname, join } from "node:path";

import { checkFcidump, CheckOptions, CheckReport } from "./check";
import { emitFcidump } from "./emit";
import { loadManifest } from "./manifest";

const USAGE = `usage: bridge <command> [args]

commands:
  emit  <manifest.json>                     generate FCIDUMP + job JSON
  check <fcidump> [--job j] [--sha256 s] [--tol t]
                                            cross-validate one FCIDUMP
  check --manifest <manifest.json>          cross-validate a manifest's output
`;

function printReport(report: CheckReport): void {
    const row = (label: string, value: string): void => {
        console.log(`${label.padEnd(18)}${value}`);
    };
    const mark = (ok: boolean): string => (ok ? "✓" : "✗");
    row("fcidump", report.fcidumpPath);
    row(
        "sector",
        `${report.nOrb} orbitals, ${report.nElectrons} electrons, ms2 ${report.ms2}`,
    );
    row("dimension", String(report.dimension));
    if (report.checksumOk !== null) {
        row("checksum", mark(report.checksumOk));
    }
    row("bridge energy", report.bridgeEnergy.toFixed(12));
    row("pipeline energy", report.primaryEnergy.toFixed(12));
    row(
        "delta",
        `${report.delta.toExponential(2)}  ${mark(report.delta <= report.tolerance)} ` +
        `(tol ${report.tolerance.toExponential(0)})`,
    );
    row("result", report.pass ? "PASS" : "FAIL");
}

function commandEmit(args: string[]): number {
    if (args.length !== 1) {
        console.error(USAGE);
        return 1;
    }
    const result = emitFcidump(args[0]!);
    for (const message of result.messages) console.log(message);
    if (result.fcidumpPath !== null && result.manifest.checksum) {
        console.log(`checksum ${result.manifest.checksum}`);
    }
    return 0;
}

function commandCheck(args: string[]): number {
    let fcidumpPath: string | null = null;
    const options: CheckOptions = {};
    for (let i = 0; i < args.length; i++) {
        const arg = args[i]!;
        if (arg === "--manifest") {
            const manifestPath = args[++i];
            if (!manifestPath) {
                console.error("--manifest needs a path");
                return 1;
            }
            const manifest = loadManifest(manifestPath);
            const base = dirname(manifestPath);
            fcidumpPath = join(base, manifest.fcidump);
            options.jobPath = join(base, manifest.layout);
            if (manifest.checksum) options.checksum = manifest.checksum;
        } else if (arg === "--job") {
            options.jobPath = args[++i];
        } else if (arg === "--sha256") {
            options.checksum = args[++i];
        } else if (arg === "--tol") {
            options.tolerance = Number(args[++i]);
        } else if (!arg.startsWith("--") && fcidumpPath === null) {
            fcidumpPath = arg;
        } else {
            console.error(`unknown argument '${arg}'\n${USAGE}`);
            return 1;
        }
    }
    if (fcidumpPath === null) {
        console.error(USAGE);
        return 1;
    }
    const report = checkFcidump(fcidumpPath, options);
    printReport(report);
    return report.pass ? 0 : 1;
}

export function main(argv: string[]): number {
    const [command, ...rest] = argv;
    try {
        if (command === "emit") return commandEmit(rest);
        if (command === "check") return commandCheck(rest);
        console.error(USAGE);
        return 1;
    } catch (error) {
        console.error(error instanceof Error ? error.message : String(error));
        return 1;
    }
}
