"""Vectorized NumPy statevector kernels (the pure-Python backend).

All kernels operate in place on a complex128 amplitude array of length 2^n
and use the canonical self-adjoint Pauli convention

    P_c(x, z) = i^popcount(x & z) * X^x * Z^z,
    P_c |b> = i^popcount(x & z) * (-1)^popcount(b & z) |b XOR x>.

Excitation kernels receive a compiled mask form of the spin-conserving
operator tau = a+_{c0} a+_{c1} a_{a1} a_{a0} (or its one-body analogue): the
occupation condition is (b & ann_mask) == ann_mask and
((b ^ ann_mask) & cre_mask) == 0, the partner index is b XOR flip_mask, and
the fermionic sign is base_sign * (-1)^popcount(b & parity_mask).
"""

from __future__ import annotations

import math

import numpy as np

_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)

_index_cache: dict[int, np.ndarray] = {}


def _indices(size: int) -> np.ndarray:
    arr = _index_cache.get(size)
    if arr is None:
        arr = np.arange(size, dtype=np.uint64)
        arr.setflags(write=False)
        _index_cache[size] = arr
    return arr


def _parity(values: np.ndarray, mask: int) -> np.ndarray:
    return np.bitwise_count(values & np.uint64(mask)).astype(np.uint8) & 1


def pauli_rotation(psi: np.ndarray, x: int, z: int, theta: float) -> None:
    """psi <- exp(i*theta*P_c(x, z)) psi, in place."""
    idx = _indices(psi.size)
    if x == 0:
        sign = 1.0 - 2.0 * _parity(idx, z)
        psi *= np.exp(1j * theta * sign)
        return
    pivot = x & -x
    b = idx[(idx & np.uint64(pivot)) == 0]
    b2 = b ^ np.uint64(x)
    ik = _I_POW[int(x & z).bit_count() & 3]
    f_b = ik * (1.0 - 2.0 * _parity(b2, z))  # <b|P|b2>
    f_b2 = ik * (1.0 - 2.0 * _parity(b, z))  # <b2|P|b>
    c = math.cos(theta)
    s = math.sin(theta)
    amp_b = psi[b]
    amp_b2 = psi[b2]
    psi[b] = c * amp_b + 1j * s * f_b * amp_b2
    psi[b2] = c * amp_b2 + 1j * s * f_b2 * amp_b


def pauli_accumulate(out: np.ndarray, psi: np.ndarray, x: int, z: int, coeff: complex) -> None:
    """out += coeff * P_c(x, z) psi."""
    idx = _indices(psi.size)
    ik = _I_POW[int(x & z).bit_count() & 3]
    amp = (coeff * ik) * (1.0 - 2.0 * _parity(idx, z)) * psi
    if x == 0:
        out += amp
    else:
        out[idx ^ np.uint64(x)] += amp


def _applicable(idx: np.ndarray, ann_mask: int, cre_mask: int) -> np.ndarray:
    ann = np.uint64(ann_mask)
    cre = np.uint64(cre_mask)
    return ((idx & ann) == ann) & (((idx ^ ann) & cre) == 0)


def excitation_rotation(
    psi: np.ndarray,
    ann_mask: int,
    cre_mask: int,
    flip_mask: int,
    parity_mask: int,
    base_sign: int,
    theta: float,
) -> None:
    """psi <- exp(theta * (tau - tau+)) psi, in place (Givens rotations on
    determinant pairs)."""
    idx = _indices(psi.size)
    b = idx[_applicable(idx, ann_mask, cre_mask)]
    if b.size == 0:
        return
    b2 = b ^ np.uint64(flip_mask)
    sign = base_sign * (1.0 - 2.0 * _parity(b, parity_mask))
    c = math.cos(theta)
    s = math.sin(theta) * sign
    amp_b = psi[b]
    amp_b2 = psi[b2]
    psi[b] = c * amp_b - s * amp_b2
    psi[b2] = c * amp_b2 + s * amp_b


def excitation_accumulate(
    out: np.ndarray,
    psi: np.ndarray,
    ann_mask: int,
    cre_mask: int,
    flip_mask: int,
    parity_mask: int,
    base_sign: int,
    coeff: float,
) -> None:
    """out += coeff * (tau - tau+) psi."""
    idx = _indices(psi.size)
    b = idx[_applicable(idx, ann_mask, cre_mask)]
    if b.size == 0:
        return
    b2 = b ^ np.uint64(flip_mask)
    weight = coeff * base_sign * (1.0 - 2.0 * _parity(b, parity_mask))
    out[b2] += weight * psi[b]
    out[b] -= weight * psi[b2]
