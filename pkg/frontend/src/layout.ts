/** Fragment layouts and the job JSON consumed by the main pipeline's CLI. */

/** One fragment in the wire format of the pipeline's job files. */
export interface FragmentJson {
    orbitals: number[];
    n_alpha: number;
    n_beta: number;
}

/** Electron and orbital totals of a layout. */
export interface LayoutTotals {
    nOrb: number;
    nAlpha: number;
    nBeta: number;
}

/**
 * Validate a fragment list: disjoint orbitals covering 0..n-1, electron
 * counts within fragment sizes.  Returns the totals.
 */
export function layoutTotals(fragments: FragmentJson[]): LayoutTotals {
    const seen = new Map<number, number>();
    let nAlpha = 0;
    let nBeta = 0;
    fragments.forEach((fragment, k) => {
        if (fragment.orbitals.length === 0) {
            throw new Error(`fragment ${k} has no orbitals`);
        }
        for (const orb of fragment.orbitals) {
            if (!Number.isInteger(orb) || orb < 0) {
                throw new Error(`fragment ${k} has a bad orbital index: ${orb}`);
            }
            const prior = seen.get(orb);
            if (prior !== undefined) {
                throw new Error(`orbital ${orb} appears in fragments ${prior} and ${k}`);
            }
            seen.set(orb, k);
        }
        if (fragment.n_alpha < 0 || fragment.n_alpha > fragment.orbitals.length) {
            throw new Error(
                `fragment ${k}: n_alpha=${fragment.n_alpha} exceeds size ${fragment.orbitals.length}`,
            );
        }
        if (fragment.n_beta < 0 || fragment.n_beta > fragment.orbitals.length) {
            throw new Error(
                `fragment ${k}: n_beta=${fragment.n_beta} exceeds size ${fragment.orbitals.length}`,
            );
        }
        nAlpha += fragment.n_alpha;
        nBeta += fragment.n_beta;
    });
    const nOrb = seen.size;
    for (let orb = 0; orb < nOrb; orb++) {
        if (!seen.has(orb)) {
            throw new Error(`fragment orbitals must cover 0..${nOrb - 1}; missing ${orb}`);
        }
    }
    return { nOrb, nAlpha, nBeta };
}

/**
 * Consecutive orbital blocks: fragment k gets the next sizes[k] orbitals and
 * (n_alpha, n_beta) = electrons[k].
 */
export function fragmentsFromCounts(
    sizes: number[],
    electrons: [number, number][],
): FragmentJson[] {
    if (sizes.length !== electrons.length) {
        throw new Error("sizes and electrons must have equal length");
    }
    const fragments: FragmentJson[] = [];
    let start = 0;
    sizes.forEach((size, k) => {
        const orbitals: number[] = [];
        for (let i = 0; i < size; i++) orbitals.push(start + i);
        fragments.push({
            orbitals,
            n_alpha: electrons[k]![0],
            n_beta: electrons[k]![1],
        });
        start += size;
    });
    return fragments;
}

/** A complete job file pointing the pipeline at an FCIDUMP. */
export function fcidumpJob(fcidumpPath: string, fragments: FragmentJson[]): object {
    layoutTotals(fragments);
    return {
        system: { fcidump: fcidumpPath },
        fragments,
    };
}
