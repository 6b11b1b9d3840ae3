/** Small dense linear algebra: just enough for overlap orthogonalization and CI. */

/** Eigendecomposition of a real symmetric matrix. */
export interface EighResult {
    /** Eigenvalues in ascending order. */
    values: number[];
    /** Orthonormal eigenvectors as columns: vectors[i][j] pairs with values[j]. */
    vectors: number[][];
}

function identity(n: number): number[][] {
    const v: number[][] = [];
    for (let i = 0; i < n; i++) {
        v.push(new Array<number>(n).fill(0));
        v[i]![i] = 1;
    }
    return v;
}

/**
 * Cyclic Jacobi diagonalization of a real symmetric matrix.
 *
 * Robust and exact to machine precision for the small matrices this bridge
 * handles (overlap matrices and CI Hamiltonians up to a few hundred rows).
 *
 * @throws if the input is not square or not symmetric to 1e-10 relative.
 */
export function jacobiEigh(matrix: number[][]): EighResult {
    const n = matrix.length;
    const a = matrix.map((row) => row.slice());
    let scale = 0;
    for (let i = 0; i < n; i++) {
        if (a[i]!.length !== n) throw new Error(`matrix is not square: row ${i}`);
        for (let j = 0; j < n; j++) scale = Math.max(scale, Math.abs(a[i]![j]!));
    }
    for (let i = 0; i < n; i++) {
        for (let j = 0; j < i; j++) {
            if (Math.abs(a[i]![j]! - a[j]![i]!) > 1e-10 * Math.max(scale, 1)) {
                throw new Error(`matrix is not symmetric at (${i}, ${j})`);
            }
        }
    }

    const v = identity(n);
    const tol = 1e-15 * Math.max(scale, Number.MIN_VALUE);
    for (let sweep = 0; sweep < 100; sweep++) {
        let off = 0;
        for (let p = 0; p < n; p++) {
            for (let q = p + 1; q < n; q++) off = Math.max(off, Math.abs(a[p]![q]!));
        }
        if (off <= tol) break;
        for (let p = 0; p < n; p++) {
            for (let q = p + 1; q < n; q++) {
                const apq = a[p]![q]!;
                if (Math.abs(apq) <= tol) continue;
                const tau = (a[q]![q]! - a[p]![p]!) / (2 * apq);
                const t = Math.sign(tau || 1) / (Math.abs(tau) + Math.sqrt(1 + tau * tau));
                const c = 1 / Math.sqrt(1 + t * t);
                const s = t * c;
                for (let k = 0; k < n; k++) {
                    const akp = a[k]![p]!;
                    const akq = a[k]![q]!;
                    a[k]![p] = c * akp - s * akq;
                    a[k]![q] = s * akp + c * akq;
                }
                for (let k = 0; k < n; k++) {
                    const apk = a[p]![k]!;
                    const aqk = a[q]![k]!;
                    a[p]![k] = c * apk - s * aqk;
                    a[q]![k] = s * apk + c * aqk;
                }
                for (let k = 0; k < n; k++) {
                    const vkp = v[k]![p]!;
                    const vkq = v[k]![q]!;
                    v[k]![p] = c * vkp - s * vkq;
                    v[k]![q] = s * vkp + c * vkq;
                }
            }
        }
    }

    const order = Array.from({ length: n }, (_, j) => j);
    order.sort((x, y) => a[x]![x]! - a[y]![y]!);
    const values = order.map((j) => a[j]![j]!);
    const vectors: number[][] = [];
    for (let i = 0; i < n; i++) vectors.push(order.map((j) => v[i]![j]!));
    return { values, vectors };
}

/** C = A^T B A for square A, B (the congruence transform used on one-body matrices). */
export function congruence(b: number[][], a: number[][]): number[][] {
    const n = b.length;
    const tmp: number[][] = [];
    for (let i = 0; i < n; i++) {
        tmp.push(new Array<number>(n).fill(0));
        for (let j = 0; j < n; j++) {
            let acc = 0;
            for (let k = 0; k < n; k++) acc += b[i]![k]! * a[k]![j]!;
            tmp[i]![j] = acc;
        }
    }
    const out: number[][] = [];
    for (let i = 0; i < n; i++) {
        out.push(new Array<number>(n).fill(0));
        for (let j = 0; j < n; j++) {
            let acc = 0;
            for (let k = 0; k < n; k++) acc += a[k]![i]! * tmp[k]![j]!;
            out[i]![j] = acc;
        }
    }
    return out;
}
