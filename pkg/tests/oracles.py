"""Independent brute-force oracles used to freeze expected values.

Everything here works directly in the full Fock space of 2*n_orb spin-orbital
modes by explicit second-quantized action on occupation bitmasks:

    mode p        = spatial orbital p, alpha spin      (p < n_orb)
    mode n_orb+p  = spatial orbital p, beta spin
    basis index b = occupation bitmask, mode 0 = least significant bit
    |b>           = product of creation operators in ascending mode order
                    applied to the vacuum

No code from the package's CI-string, qubit, or operator machinery is used;
only the IntegralSet data container is shared.
"""

from __future__ import annotations

import itertools

import numpy as np


def apply_mode_op(mask: int, mode: int, dagger: bool) -> tuple[int, int] | None:
    """Apply a_mode or a+_mode to |mask>; returns (sign, new_mask) or None."""
    bit = 1 << mode
    parity = bin(mask & (bit - 1)).count("1") & 1
    sign = -1 if parity else 1
    if dagger:
        if mask & bit:
            return None
        return sign, mask | bit
    if not (mask & bit):
        return None
    return sign, mask & ~bit


def apply_op_string(mask: int, ops: list[tuple[int, bool]]) -> tuple[int, int] | None:
    """Apply a product of (mode, dagger) ops, rightmost first."""
    sign = 1
    cur = mask
    for mode, dagger in reversed(ops):
        step = apply_mode_op(cur, mode, dagger)
        if step is None:
            return None
        s, cur = step
        sign *= s
    return sign, cur


def dense_hamiltonian(ints) -> np.ndarray:
    """Full Fock-space Hamiltonian matrix (dimension 4**n_orb)."""
    n = ints.n_orb
    dim = 1 << (2 * n)
    h_mat = np.zeros((dim, dim))
    spins = (0, n)  # mode offset per spin

    one_body = [
        (float(ints.h[p, q]), [(p + off, True), (q + off, False)])
        for p in range(n)
        for q in range(n)
        for off in spins
        if ints.h[p, q] != 0.0
    ]
    two_body = []
    for p, q, r, s in itertools.product(range(n), repeat=4):
        coeff = 0.5 * float(ints.g[p, q, r, s])
        if coeff == 0.0:
            continue
        for off1 in spins:
            for off2 in spins:
                two_body.append(
                    (coeff, [(p + off1, True), (r + off2, True), (s + off2, False), (q + off1, False)])
                )

    for b in range(dim):
        h_mat[b, b] += ints.e_core
        for coeff, ops in one_body:
            out = apply_op_string(b, ops)
            if out is not None:
                sign, b2 = out
                h_mat[b2, b] += coeff * sign
        for coeff, ops in two_body:
            out = apply_op_string(b, ops)
            if out is not None:
                sign, b2 = out
                h_mat[b2, b] += coeff * sign
    return h_mat


def sector_indices(n_orb: int, n_alpha: int, n_beta: int) -> np.ndarray:
    """Fock-space indices with the given per-spin particle numbers, ascending."""
    alpha_mask = (1 << n_orb) - 1
    beta_mask = alpha_mask << n_orb
    idx = np.arange(1 << (2 * n_orb), dtype=np.int64)
    n_a = np.array([bin(int(b) & alpha_mask).count("1") for b in idx])
    n_b = np.array([bin(int(b) & beta_mask).count("1") for b in idx])
    return idx[(n_a == n_alpha) & (n_b == n_beta)]


def sector_matrix(h_mat: np.ndarray, n_orb: int, n_alpha: int, n_beta: int) -> np.ndarray:
    idx = sector_indices(n_orb, n_alpha, n_beta)
    return h_mat[np.ix_(idx, idx)]


def ground_energy(ints, n_alpha: int, n_beta: int) -> float:
    """Exact lowest eigenvalue in one (n_alpha, n_beta) sector."""
    block = sector_matrix(dense_hamiltonian(ints), ints.n_orb, n_alpha, n_beta)
    return float(np.linalg.eigvalsh(block)[0])


def dense_s2(n_orb: int) -> np.ndarray:
    """Total-spin operator S^2 on the full Fock space (same mode convention)."""
    dim = 1 << (2 * n_orb)
    sp = np.zeros((dim, dim))  # S+ = sum_p a+_{p,alpha} a_{p,beta}
    for b in range(dim):
        for p in range(n_orb):
            out = apply_op_string(b, [(p, True), (p + n_orb, False)])
            if out is not None:
                sign, b2 = out
                sp[b2, b] += sign
    sz = np.zeros(dim)
    alpha_mask = (1 << n_orb) - 1
    for b in range(dim):
        na = bin(b & alpha_mask).count("1")
        nb = bin((b >> n_orb) & alpha_mask).count("1")
        sz[b] = 0.5 * (na - nb)
    return sp @ sp.T + np.diag(sz * (sz - 1.0))


def central_gradient(fun, x0: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central finite-difference gradient of a scalar function."""
    x0 = np.asarray(x0, dtype=float)
    grad = np.zeros_like(x0)
    for i in range(x0.size):
        xp = x0.copy()
        xm = x0.copy()
        xp[i] += h
        xm[i] -= h
        grad[i] = (fun(xp) - fun(xm)) / (2.0 * h)
    return grad
