/** FCIDUMP interchange: canonical writer plus an independent tolerant parser.
 *
 * Two-body records are chemist notation (pq|rs) — the de-facto convention for
 * this format: a record ``value i j k l`` with all indices nonzero contributes
 * to g(i,j,k,l) and its 8-fold symmetry partners (1-based in the file);
 * ``value i j 0 0`` is one-body; ``value 0 0 0 0`` is the constant term.
 */

import { eriIndex, SpatialHamiltonian } from "./integrals";

/** Parse failure with the 1-based line number where it happened. */
export class FcidumpError extends Error {
    readonly line: number | null;

    constructor(message: string, line: number | null = null) {
        super(line !== null ? `line ${line}: ${message}` : message);
        this.name = "FcidumpError";
        this.line = line;
    }
}

/** A parsed FCIDUMP: integrals plus the electron-count metadata of the header. */
export interface IntegralFile extends SpatialHamiltonian {
    nElectrons: number | null;
    ms2: number | null;
}

/** ``value`` formatted the way Fortran codes expect: 17 significant digits,
 * sign slot, two-digit exponent. */
export function formatValue(value: number): string {
    const s = value.toExponential(16);
    const match = s.match(/^(-?)(\d\.\d{16})e([+-])(\d+)$/);
    if (!match) throw new Error(`unformattable value: ${value}`);
    const sign = match[1] === "-" ? "-" : " ";
    return `${sign}${match[2]}E${match[3]}${match[4]!.padStart(2, "0")}`;
}

function record(value: number, i: number, j: number, k: number, l: number): string {
    const pad = (x: number): string => String(x).padStart(4, " ");
    return ` ${formatValue(value)} ${pad(i)} ${pad(j)} ${pad(k)} ${pad(l)}`;
}

/**
 * Render a spatial Hamiltonian in canonical FCIDUMP form.
 *
 * Entries appear as two-body (i>=j, k>=l, (ij)>=(kl), ascending), then
 * one-body (i>=j ascending), then the constant; values below the threshold
 * are dropped.  Identical input gives identical bytes.
 */
export function formatFcidump(
    hamiltonian: SpatialHamiltonian,
    nElectrons: number,
    ms2: number,
    threshold = 1e-14,
): string {
    const n = hamiltonian.nOrb;
    const lines: string[] = [
        `&FCI NORB=${n},NELEC=${nElectrons},MS2=${ms2},`,
        "  ORBSYM=" + new Array<string>(n).fill("1").join(",") + ",",
        "  ISYM=1,",
        "&END",
    ];
    for (let i = 0; i < n; i++) {
        for (let j = 0; j <= i; j++) {
            const ij = (i * (i + 1)) / 2 + j;
            for (let k = 0; k <= i; k++) {
                for (let l = 0; l <= k; l++) {
                    if ((k * (k + 1)) / 2 + l > ij) continue;
                    const value = hamiltonian.g[eriIndex(i, j, k, l, n)]!;
                    if (Math.abs(value) > threshold) {
                        lines.push(record(value, i + 1, j + 1, k + 1, l + 1));
                    }
                }
            }
        }
    }
    for (let i = 0; i < n; i++) {
        for (let j = 0; j <= i; j++) {
            const value = hamiltonian.h[i]![j]!;
            if (Math.abs(value) > threshold) lines.push(record(value, i + 1, j + 1, 0, 0));
        }
    }
    lines.push(record(hamiltonian.eCore, 0, 0, 0, 0));
    return lines.join("\n") + "\n";
}

function headerInt(header: string, name: string): number | null {
    const match = header.match(new RegExp(`${name}\\s*=\\s*(-?\\d+)`, "i"));
    return match ? parseInt(match[1]!, 10) : null;
}

function canonicalKey(i: number, j: number, k: number, l: number): string {
    let a = Math.max(i, j);
    let b = Math.min(i, j);
    let c = Math.max(k, l);
    let d = Math.min(k, l);
    if (a < c || (a === c && b < d)) {
        [a, b, c, d] = [c, d, a, b];
    }
    return `${a},${b},${c},${d}`;
}

/**
 * Parse FCIDUMP text into full symmetric tensors.
 *
 * Tolerates case/whitespace/line-ending variants, Fortran ``D`` exponents,
 * multi-line headers ending in ``&END`` or ``/``, and either symmetry-reduced
 * or fully expanded two-body records.  Conflicting duplicate records
 * (difference above 1e-10) raise {@link FcidumpError} with the line number.
 */
export function parseFcidump(text: string): IntegralFile {
    const lines = text.split(/\r\n|\r|\n/);

    const headerLines: string[] = [];
    let bodyStart: number | null = null;
    let inHeader = false;
    for (let ln = 1; ln <= lines.length; ln++) {
        const stripped = lines[ln - 1]!.trim();
        if (!inHeader) {
            if (stripped === "") continue;
            if (!stripped.toUpperCase().startsWith("&FCI")) {
                throw new FcidumpError("expected '&FCI' namelist header", ln);
            }
            inHeader = true;
        }
        headerLines.push(stripped);
        if (stripped.toUpperCase().includes("&END") || stripped.endsWith("/")) {
            bodyStart = ln;
            break;
        }
    }
    if (bodyStart === null) {
        throw new FcidumpError("header never terminated with '&END' or '/'", lines.length);
    }
    const header = headerLines.join(" ");
    const nOrb = headerInt(header, "NORB");
    if (nOrb === null) throw new FcidumpError("header missing NORB", bodyStart);
    if (nOrb <= 0) throw new FcidumpError(`invalid NORB=${nOrb}`, bodyStart);

    let eCore = 0;
    let eCoreLine: number | null = null;
    const hEntries = new Map<string, { value: number; line: number }>();
    const gEntries = new Map<string, { value: number; line: number }>();

    for (let ln = bodyStart + 1; ln <= lines.length; ln++) {
        const stripped = lines[ln - 1]!.trim();
        if (stripped === "") continue;
        const tokens = stripped.split(/\s+/);
        if (tokens.length !== 5) {
            throw new FcidumpError(
                `expected 'value i j k l' (5 fields), got ${tokens.length}`,
                ln,
            );
        }
        const value = Number(tokens[0]!.toUpperCase().replace(/D/g, "E"));
        if (Number.isNaN(value)) {
            throw new FcidumpError(`bad value field '${tokens[0]}'`, ln);
        }
        const indices = tokens.slice(1).map((t) => {
            if (!/^-?\d+$/.test(t)) {
                throw new FcidumpError(`bad index field '${t}'`, ln);
            }
            return parseInt(t, 10);
        });
        const [i, j, k, l] = indices as [number, number, number, number];
        for (const idx of indices) {
            if (idx < 0 || idx > nOrb) {
                throw new FcidumpError(`orbital index ${idx} outside 1..${nOrb}`, ln);
            }
        }

        const nZero = indices.filter((t) => t === 0).length;
        if (nZero === 4) {
            if (eCoreLine !== null && Math.abs(value - eCore) > 1e-10) {
                throw new FcidumpError(
                    `conflicting core energy ${value} (earlier line ${eCoreLine})`,
                    ln,
                );
            }
            eCore = value;
            eCoreLine = ln;
        } else if (k === 0 && l === 0 && i > 0 && j > 0) {
            const key = `${Math.max(i, j) - 1},${Math.min(i, j) - 1}`;
            const prior = hEntries.get(key);
            if (prior && Math.abs(prior.value - value) > 1e-10) {
                throw new FcidumpError(
                    `conflicting one-body entry ${i} ${j} (earlier line ${prior.line})`,
                    ln,
                );
            }
            hEntries.set(key, { value, line: ln });
        } else if (i > 0 && j > 0 && k > 0 && l > 0) {
            const key = canonicalKey(i - 1, j - 1, k - 1, l - 1);
            const prior = gEntries.get(key);
            if (prior && Math.abs(prior.value - value) > 1e-10) {
                throw new FcidumpError(
                    `conflicting two-body entry ${i} ${j} ${k} ${l} ` +
                    `(earlier line ${prior.line})`,
                    ln,
                );
            }
            gEntries.set(key, { value, line: ln });
        } else {
            throw new FcidumpError(
                `unsupported index pattern ${i} ${j} ${k} ${l} (partial zeros)`,
                ln,
            );
        }
    }

    const h: number[][] = [];
    for (let i = 0; i < nOrb; i++) h.push(new Array<number>(nOrb).fill(0));
    for (const [key, { value }] of hEntries) {
        const [a, b] = key.split(",").map(Number) as [number, number];
        h[a]![b] = h[b]![a] = value;
    }
    const g = new Float64Array(nOrb * nOrb * nOrb * nOrb);
    for (const [key, { value }] of gEntries) {
        const [a, b, c, d] = key.split(",").map(Number) as [number, number, number, number];
        for (const [p, q] of [[a, b], [b, a]] as const) {
            for (const [r, s] of [[c, d], [d, c]] as const) {
                g[eriIndex(p, q, r, s, nOrb)] = value;
                g[eriIndex(r, s, p, q, nOrb)] = value;
            }
        }
    }

    return {
        nOrb,
        eCore,
        h,
        g,
        nElectrons: headerInt(header, "NELEC"),
        ms2: headerInt(header, "MS2"),
    };
}
