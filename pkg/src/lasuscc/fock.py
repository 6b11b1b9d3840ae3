"""Determinant-basis CI machinery: occupation strings, sector Hamiltonians,
exact ground states, reduced density matrices and spin expectation values.

Conventions
-----------
* Spin-orbital modes are ordered all-alpha-then-beta: spatial orbital p with
  alpha spin is mode p, with beta spin mode n_orb + p.
* An occupation string is an integer bitmask over one spin's spatial
  orbitals; orbital 0 is the least significant bit.  Strings of fixed
  particle number are enumerated in ascending integer order, e.g. the
  (n_orb=2, n_occ=1) strings are [0b01, 0b10].
* A determinant |I_alpha, I_beta> is the alpha creation operators in
  ascending orbital order, then the beta ones, applied to the vacuum.
  Sector basis index = I_alpha_position * N_beta + I_beta_position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .integrals import IntegralSet


@dataclass(frozen=True)
class Sector:
    """A fixed-particle-number, fixed-S_z block of Fock space."""

    n_orb: int
    n_alpha: int
    n_beta: int

    def __post_init__(self) -> None:
        if not (0 <= self.n_alpha <= self.n_orb and 0 <= self.n_beta <= self.n_orb):
            raise ValueError(f"invalid sector {self}")

    @property
    def dim(self) -> int:
        return math.comb(self.n_orb, self.n_alpha) * math.comb(self.n_orb, self.n_beta)

    @property
    def n_electrons(self) -> int:
        return self.n_alpha + self.n_beta

    @property
    def sz(self) -> float:
        return 0.5 * (self.n_alpha - self.n_beta)


def enumerate_strings(n_orb: int, n_occ: int) -> np.ndarray:
    """All n_occ-electron occupation bitmasks over n_orb orbitals, ascending."""
    if not 0 <= n_occ <= n_orb:
        raise ValueError(f"cannot place {n_occ} electrons in {n_orb} orbitals")
    if n_occ == 0:
        return np.array([0], dtype=np.uint64)
    strings = []
    s = (1 << n_occ) - 1
    limit = 1 << n_orb
    while s < limit:
        strings.append(s)
        # Next lexicographic bit permutation (Gosper's hack).
        c = s & -s
        r = s + c
        s = (((r ^ s) >> 2) // c) | r
    return np.array(strings, dtype=np.uint64)


def string_rank(mask: int) -> int:
    """Position of a string within its (n_orb, n_occ) enumeration.

    rank = sum_i C(p_i, i+1) over the occupied orbitals p_0 < p_1 < ...
    """
    rank = 0
    i = 0
    m = int(mask)
    while m:
        p = (m & -m).bit_length() - 1
        rank += math.comb(p, i + 1)
        m &= m - 1
        i += 1
    return rank


class StringSpace:
    """Strings of one spin plus their single-excitation structure."""

    def __init__(self, n_orb: int, n_occ: int):
        self.n_orb = n_orb
        self.n_occ = n_occ
        self.strings = enumerate_strings(n_orb, n_occ)
        self.dim = len(self.strings)
        self.occupations = np.zeros((self.dim, n_orb), dtype=np.float64)
        for i, s in enumerate(self.strings):
            for p in range(n_orb):
                if int(s) >> p & 1:
                    self.occupations[i, p] = 1.0
        self._d_cache: dict[tuple[int, int], sp.csr_matrix] = {}

    def index(self, mask: int) -> int:
        return string_rank(mask)

    def d_matrix(self, p: int, q: int) -> sp.csr_matrix:
        """Sparse matrix of a+_p a_q within this string space."""
        key = (p, q)
        if key in self._d_cache:
            return self._d_cache[key]
        rows, cols, vals = [], [], []
        for i, s in enumerate(self.strings):
            s = int(s)
            if not s >> q & 1:
                continue
            if p != q and s >> p & 1:
                continue
            s1 = s & ~(1 << q)
            sign = -1 if bin(s & ((1 << q) - 1)).count("1") & 1 else 1
            if bin(s1 & ((1 << p) - 1)).count("1") & 1:
                sign = -sign
            rows.append(self.index(s1 | (1 << p)))
            cols.append(i)
            vals.append(float(sign))
        mat = sp.csr_matrix((vals, (rows, cols)), shape=(self.dim, self.dim))
        self._d_cache[key] = mat
        return mat


@lru_cache(maxsize=64)
def get_string_space(n_orb: int, n_occ: int) -> StringSpace:
    return StringSpace(n_orb, n_occ)


@dataclass
class CIVector:
    """CI coefficients over one sector, shaped (N_alpha_strings, N_beta_strings)."""

    sector: Sector
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        alpha = get_string_space(self.sector.n_orb, self.sector.n_alpha)
        beta = get_string_space(self.sector.n_orb, self.sector.n_beta)
        expected = (alpha.dim, beta.dim)
        self.coeffs = np.asarray(self.coeffs)
        if self.coeffs.shape != expected:
            raise ValueError(f"CI coefficients shape {self.coeffs.shape}, expected {expected}")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def normalized(self) -> "CIVector":
        return CIVector(self.sector, self.coeffs / self.norm)

    def ravel(self) -> np.ndarray:
        return self.coeffs.reshape(-1)


def _effective_one_body(ints: IntegralSet) -> np.ndarray:
    """h with the reordering correction -1/2 sum_q (pq|qs) folded in."""
    return ints.h - 0.5 * np.einsum("pqqs->ps", ints.g)


def _spin_one_body(
    ints: IntegralSet,
    h_alpha: np.ndarray | None,
    h_beta: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray]:
    correction = -0.5 * np.einsum("pqqs->ps", ints.g)
    ha = (ints.h if h_alpha is None else np.asarray(h_alpha)) + correction
    hb = (ints.h if h_beta is None else np.asarray(h_beta)) + correction
    return ha, hb


def apply_hamiltonian(
    ints: IntegralSet,
    sector: Sector,
    vec: np.ndarray,
    h_alpha: np.ndarray | None = None,
    h_beta: np.ndarray | None = None,
) -> np.ndarray:
    """Matrix-free H|v> in one sector (streaming spin-summed-excitation form).

    The two-body part uses W_rs = E_rs V intermediates so the cost scales as
    n_orb^2 sparse-dense products plus one dense contraction, never touching
    an explicit Hamiltonian matrix.

    Args:
        ints: Hamiltonian data (e_core included in the result).
        vec: coefficients, shape (dim,) or (N_alpha, N_beta).
        h_alpha / h_beta: optional spin-resolved one-body replacements
            (used by embedding solvers); default is the spin-free ``ints.h``.

    Returns:
        H @ vec with the input's shape.
    """
    alpha = get_string_space(sector.n_orb, sector.n_alpha)
    beta = get_string_space(sector.n_orb, sector.n_beta)
    n = sector.n_orb
    in_shape = vec.shape
    v = vec.reshape(alpha.dim, beta.dim)

    ha, hb = _spin_one_body(ints, h_alpha, h_beta)

    dtype = np.result_type(v.dtype, np.float64)
    w_all = np.empty((n, n, alpha.dim, beta.dim), dtype=dtype)
    for r in range(n):
        for s in range(n):
            w_all[r, s] = alpha.d_matrix(r, s) @ v + (beta.d_matrix(r, s) @ v.T).T

    out = ints.e_core * v.astype(dtype)
    for p in range(n):
        for q in range(n):
            out += ha[p, q] * (alpha.d_matrix(p, q) @ v)
            out += hb[p, q] * (beta.d_matrix(p, q) @ v.T).T

    g2 = ints.g.reshape(n * n, n * n)
    gw = (g2 @ w_all.reshape(n * n, -1)).reshape(n, n, alpha.dim, beta.dim)
    for p in range(n):
        for q in range(n):
            half = gw[p, q]
            out += 0.5 * (alpha.d_matrix(p, q) @ half)
            out += 0.5 * (beta.d_matrix(p, q) @ half.T).T
    return out.reshape(in_shape)


def build_sector_hamiltonian(
    ints: IntegralSet,
    sector: Sector,
    h_alpha: np.ndarray | None = None,
    h_beta: np.ndarray | None = None,
) -> sp.csr_matrix:
    """Explicit sparse Hamiltonian over a sector's determinant basis."""
    alpha = get_string_space(sector.n_orb, sector.n_alpha)
    beta = get_string_space(sector.n_orb, sector.n_beta)
    n = sector.n_orb
    ia = sp.identity(alpha.dim, format="csr")
    ib = sp.identity(beta.dim, format="csr")

    def e_pq(p: int, q: int) -> sp.csr_matrix:
        return sp.kron(alpha.d_matrix(p, q), ib, format="csr") + sp.kron(
            ia, beta.d_matrix(p, q), format="csr"
        )

    ha, hb = _spin_one_body(ints, h_alpha, h_beta)
    dim = alpha.dim * beta.dim
    ham = sp.csr_matrix((dim, dim))
    ham += ints.e_core * sp.identity(dim, format="csr")
    for p in range(n):
        for q in range(n):
            if ha[p, q] != 0.0:
                ham += ha[p, q] * sp.kron(alpha.d_matrix(p, q), ib, format="csr")
            if hb[p, q] != 0.0:
                ham += hb[p, q] * sp.kron(ia, beta.d_matrix(p, q), format="csr")

    e_cache = [[e_pq(p, q) for q in range(n)] for p in range(n)]
    for p in range(n):
        for q in range(n):
            g_pq = sp.csr_matrix((dim, dim))
            for r in range(n):
                for s in range(n):
                    coeff = ints.g[p, q, r, s]
                    if coeff != 0.0:
                        g_pq += coeff * e_cache[r][s]
            if g_pq.nnz:
                ham += 0.5 * (e_cache[p][q] @ g_pq)
    ham.sum_duplicates()
    return ham


def hamiltonian_diagonal(
    ints: IntegralSet,
    sector: Sector,
    h_alpha: np.ndarray | None = None,
    h_beta: np.ndarray | None = None,
) -> np.ndarray:
    """Vectorized Slater-Condon diagonal <I|H|I> over the sector basis."""
    alpha = get_string_space(sector.n_orb, sector.n_alpha)
    beta = get_string_space(sector.n_orb, sector.n_beta)
    oa, ob = alpha.occupations, beta.occupations
    ha = ints.h if h_alpha is None else np.asarray(h_alpha)
    hb = ints.h if h_beta is None else np.asarray(h_beta)

    j_mat = np.einsum("pprr->pr", ints.g)
    k_mat = np.einsum("prrp->pr", ints.g)

    one_a = oa @ np.diag(ha)
    one_b = ob @ np.diag(hb)
    intra_a = 0.5 * np.einsum("ip,pr,ir->i", oa, j_mat - k_mat, oa)
    intra_b = 0.5 * np.einsum("ip,pr,ir->i", ob, j_mat - k_mat, ob)
    cross = np.einsum("ip,pr,jr->ij", oa, j_mat, ob)

    diag = (
        ints.e_core
        + (one_a + intra_a)[:, None]
        + (one_b + intra_b)[None, :]
        + cross
    )
    return diag.reshape(-1)


def davidson_ground_state(
    matvec,
    diag: np.ndarray,
    dim: int,
    tol: float = 1e-8,
    max_iter: int = 200,
    max_subspace: int = 40,
    guess: np.ndarray | None = None,
) -> tuple[float, np.ndarray, bool, int]:
    """Davidson iteration for the lowest eigenpair of a symmetric operator.

    Returns (eigenvalue, eigenvector, converged, iterations); convergence is
    a residual 2-norm below ``tol``.
    """
    if guess is None:
        guess = np.zeros(dim)
        guess[int(np.argmin(diag))] = 1.0
    v = guess / np.linalg.norm(guess)
    basis = [v]
    sigma = [matvec(v)]
    theta, x = 0.0, v
    for it in range(1, max_iter + 1):
        m = len(basis)
        b_mat = np.array(basis)
        s_mat = np.array(sigma)
        h_sub = b_mat @ s_mat.T
        h_sub = 0.5 * (h_sub + h_sub.T)
        evals, evecs = np.linalg.eigh(h_sub)
        theta = float(evals[0])
        y = evecs[:, 0]
        x = y @ b_mat
        hx = y @ s_mat
        residual = hx - theta * x
        rnorm = float(np.linalg.norm(residual))
        if rnorm < tol:
            return theta, x, True, it
        if m >= max_subspace:
            basis = [x]
            sigma = [hx]
            continue
        denom = diag - theta
        denom = np.where(np.abs(denom) < 1e-10, np.copysign(1e-10, denom), denom)
        t = residual / denom
        for b in basis:
            t -= (b @ t) * b
        tnorm = np.linalg.norm(t)
        if tnorm < 1e-12:
            t = np.random.default_rng(m).standard_normal(dim)
            for b in basis:
                t -= (b @ t) * b
            tnorm = np.linalg.norm(t)
        t /= tnorm
        basis.append(t)
        sigma.append(matvec(t))
    return theta, x, False, max_iter


@dataclass
class CasciResult:
    energy: float
    ci: CIVector
    converged: bool
    method: str
    residual_norm: float


def casci_ground_state(
    ints: IntegralSet,
    sector: Sector,
    dense_threshold: int = 20000,
    tol: float = 1e-8,
    max_iter: int = 200,
    h_alpha: np.ndarray | None = None,
    h_beta: np.ndarray | None = None,
) -> CasciResult:
    """Exact ground state of one sector.

    Dense diagonalization up to ``dense_threshold`` basis states, Davidson
    above it.  The returned residual norm ||H x - E x|| is checked against
    ``tol`` in both branches.
    """
    dim = sector.dim
    if dim == 0:
        raise ValueError(f"empty sector {sector}")
    alpha = get_string_space(sector.n_orb, sector.n_alpha)
    beta = get_string_space(sector.n_orb, sector.n_beta)

    if dim <= dense_threshold:
        ham = build_sector_hamiltonian(ints, sector, h_alpha, h_beta).toarray()
        evals, evecs = np.linalg.eigh(ham)
        energy = float(evals[0])
        x = evecs[:, 0]
        residual = float(np.linalg.norm(ham @ x - energy * x))
        converged = residual <= max(tol, 1e-10 * max(1.0, abs(energy)) * dim ** 0.5)
        method = "dense"
    else:
        diag = hamiltonian_diagonal(ints, sector, h_alpha, h_beta)

        def matvec(v: np.ndarray) -> np.ndarray:
            return apply_hamiltonian(ints, sector, v, h_alpha, h_beta)

        energy, x, converged, _ = davidson_ground_state(
            matvec, diag, dim, tol=tol, max_iter=max_iter
        )
        residual = float(np.linalg.norm(matvec(x) - energy * x))
        method = "davidson"
    if not converged:
        raise RuntimeError(
            f"eigensolver did not reach residual {tol:g} in sector {sector} "
            f"(method {method}, residual {residual:.2e})"
        )
    # Deterministic global sign: largest-magnitude coefficient positive.
    pivot = int(np.argmax(np.abs(x)))
    if x[pivot] < 0:
        x = -x
    ci = CIVector(sector, x.reshape(alpha.dim, beta.dim))
    return CasciResult(energy=energy, ci=ci, converged=converged, method=method, residual_norm=residual)


def expectation_value(
    ints: IntegralSet,
    ci: CIVector,
    h_alpha: np.ndarray | None = None,
    h_beta: np.ndarray | None = None,
) -> float:
    """<ci|H|ci> / <ci|ci>."""
    v = ci.ravel()
    hv = apply_hamiltonian(ints, ci.sector, v, h_alpha, h_beta)
    return float(np.real(np.vdot(v, hv)) / np.real(np.vdot(v, v)))


def make_rdm1(ci: CIVector) -> tuple[np.ndarray, np.ndarray]:
    """Spin-resolved one-particle density matrices (gamma_alpha, gamma_beta).

    gamma^sigma_pq = <Psi| a+_{p sigma} a_{q sigma} |Psi>.
    """
    sector = ci.sector
    alpha = get_string_space(sector.n_orb, sector.n_alpha)
    beta = get_string_space(sector.n_orb, sector.n_beta)
    v = ci.coeffs
    n = sector.n_orb
    dm_a = np.zeros((n, n))
    dm_b = np.zeros((n, n))
    for p in range(n):
        for q in range(n):
            dm_a[p, q] = float(np.real(np.vdot(v, alpha.d_matrix(p, q) @ v)))
            dm_b[p, q] = float(np.real(np.vdot(v, (beta.d_matrix(p, q) @ v.T).T)))
    return dm_a, dm_b


def _apply_s_plus(ci: CIVector) -> CIVector | None:
    """S+ |ci>: moves one beta electron to the same spatial alpha orbital."""
    sector = ci.sector
    if sector.n_beta == 0 or sector.n_alpha == sector.n_orb:
        return None
    target = Sector(sector.n_orb, sector.n_alpha + 1, sector.n_beta - 1)
    alpha = get_string_space(sector.n_orb, sector.n_alpha)
    beta = get_string_space(sector.n_orb, sector.n_beta)
    alpha2 = get_string_space(sector.n_orb, sector.n_alpha + 1)
    beta2 = get_string_space(sector.n_orb, sector.n_beta - 1)
    out = np.zeros((alpha2.dim, beta2.dim), dtype=ci.coeffs.dtype)
    n = sector.n_orb
    # S+ = sum_p a+_{p,alpha} a_{p,beta}; the beta annihilation crosses the
    # whole alpha block, giving (-1)^{n_alpha} before the new alpha creation.
    cross_sign = -1.0 if sector.n_alpha % 2 else 1.0
    for p in range(n):
        bit = 1 << p
        for ib, bstr in enumerate(beta.strings):
            bstr = int(bstr)
            if not bstr >> p & 1:
                continue
            sign_b = -1.0 if bin(bstr & (bit - 1)).count("1") & 1 else 1.0
            jb = beta2.index(bstr & ~bit)
            for ia, astr in enumerate(alpha.strings):
                astr = int(astr)
                if astr >> p & 1:
                    continue
                sign_a = -1.0 if bin(astr & (bit - 1)).count("1") & 1 else 1.0
                ja = alpha2.index(astr | bit)
                out[ja, jb] += cross_sign * sign_b * sign_a * ci.coeffs[ia, ib]
    return CIVector(target, out)


def s_squared_expectation(ci: CIVector) -> float:
    """<S^2> of a normalized CI vector: ||S+ psi||^2 + S_z(S_z + 1)."""
    nrm2 = float(np.real(np.vdot(ci.ravel(), ci.ravel())))
    sz = ci.sector.sz
    plus = _apply_s_plus(ci)
    plus_norm2 = 0.0 if plus is None else float(np.real(np.vdot(plus.ravel(), plus.ravel())))
    return plus_norm2 / nrm2 + sz * (sz + 1.0)
