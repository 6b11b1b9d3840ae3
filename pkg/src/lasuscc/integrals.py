"""Native STO-3G integral engine for hydrogen clusters, plus RHF and localization.

Everything here is s-type Gaussian closed-form work: overlap/kinetic/nuclear
one-electron integrals, four-index electron repulsion in chemist convention
(pq|rs), a damped restricted Hartree-Fock solver, and Lowdin-based fragment
localization.  The engine is deliberately hydrogen-only; richer systems enter
through the FCIDUMP reader instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import ANGSTROM_TO_BOHR
from .geometry import Geometry, nuclear_charge

# STO-3G hydrogen 1s: exponents and contraction coefficients (for unit-normalized
# primitives).
STO3G_H_EXPONENTS = (3.42525091, 0.62391373, 0.16885540)
STO3G_H_COEFFS = (0.15432897, 0.53532814, 0.44463454)


@dataclass(frozen=True)
class AoIntegrals:
    """AO-basis integrals: overlap, core Hamiltonian, ERIs (chemist), nuclear energy."""

    overlap: np.ndarray
    core: np.ndarray
    eri: np.ndarray
    e_nuc: float
    n_ao: int

    def __post_init__(self) -> None:
        for arr in (self.overlap, self.core, self.eri):
            arr.setflags(write=False)


@dataclass(frozen=True)
class IntegralSet:
    """Orthonormal-orbital Hamiltonian: constant + one-body h + two-body g.

    ``g`` is stored in chemist convention: g[p, q, r, s] = (pq|rs), so the
    electronic Hamiltonian is  sum_pq h_pq E_pq + 1/2 sum_pqrs (pq|rs)
    (E_pq E_rs - delta_qr E_ps)  over spatial orbitals.

    Args:
        n_orb: number of spatial orbitals.
        e_core: constant energy (nuclear repulsion + any frozen-core folding).
        h: (n_orb, n_orb) one-body matrix.
        g: (n_orb,)*4 two-body tensor, chemist convention.
        n_electrons: optional electron count carried as metadata.
        ms2: optional 2*(n_alpha - n_beta) metadata.
    """

    n_orb: int
    e_core: float
    h: np.ndarray
    g: np.ndarray
    n_electrons: int | None = None
    ms2: int | None = None
    source: str = ""

    def __post_init__(self) -> None:
        h = np.ascontiguousarray(np.asarray(self.h, dtype=float))
        g = np.ascontiguousarray(np.asarray(self.g, dtype=float))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)
        if h.shape != (self.n_orb, self.n_orb):
            raise ValueError(f"h has shape {h.shape}, expected {(self.n_orb, self.n_orb)}")
        if g.shape != (self.n_orb,) * 4:
            raise ValueError(f"g has shape {g.shape}, expected {(self.n_orb,) * 4}")
        h.setflags(write=False)
        g.setflags(write=False)

    def validate(self, tol: float = 1e-12) -> None:
        """Check finiteness, h symmetry and the 8-fold symmetry of g."""
        if not (np.isfinite(self.h).all() and np.isfinite(self.g).all() and math.isfinite(self.e_core)):
            raise ValueError("non-finite integral data")
        if np.abs(self.h - self.h.T).max() > tol:
            raise ValueError("one-body matrix is not symmetric")
        g = self.g
        for perm, name in (
            ((1, 0, 2, 3), "(qp|rs)"),
            ((0, 1, 3, 2), "(pq|sr)"),
            ((2, 3, 0, 1), "(rs|pq)"),
        ):
            if np.abs(g - g.transpose(perm)).max() > tol:
                raise ValueError(f"two-body tensor breaks {name} symmetry")

    def subset(self, orbitals: "list[int] | tuple[int, ...]") -> "IntegralSet":
        """Restriction to a subset of orbitals (no occupation folding)."""
        idx = np.asarray(orbitals, dtype=int)
        return IntegralSet(
            n_orb=len(idx),
            e_core=self.e_core,
            h=self.h[np.ix_(idx, idx)],
            g=self.g[np.ix_(idx, idx, idx, idx)],
            source=self.source,
        )


def _boys_f0(t: float) -> float:
    """Zeroth Boys function F0(t) = int_0^1 exp(-t x^2) dx."""
    if t < 1e-12:
        return 1.0 - t / 3.0
    st = math.sqrt(t)
    return 0.5 * math.sqrt(math.pi / t) * math.erf(st)


def build_sto3g_hydrogen(geometry: Geometry) -> AoIntegrals:
    """STO-3G AO integrals for an all-hydrogen geometry.

    One 1s contracted Gaussian per atom, contraction renormalized so the
    AO self-overlap is exactly 1.

    Args:
        geometry: hydrogen-only geometry (raises ValueError otherwise).

    Returns:
        AoIntegrals with overlap, kinetic+nuclear core matrix, chemist-ordered
        ERIs and the nuclear repulsion energy.
    """
    charges = [nuclear_charge(sym) for sym, _ in geometry.atoms]
    centers = np.array([xyz for _, xyz in geometry.atoms], dtype=float) * ANGSTROM_TO_BOHR
    n_ao = len(centers)

    exps = np.array(STO3G_H_EXPONENTS)
    # Contraction coefficients folded with primitive norms (2a/pi)^(3/4).
    coeffs = np.array(STO3G_H_COEFFS) * (2.0 * exps / math.pi) ** 0.75
    # Renormalize the contracted function.
    self_ov = 0.0
    for a, ca in zip(exps, coeffs):
        for b, cb in zip(exps, coeffs):
            self_ov += ca * cb * (math.pi / (a + b)) ** 1.5
    coeffs /= math.sqrt(self_ov)

    npr = len(exps)

    S = np.zeros((n_ao, n_ao))
    T = np.zeros((n_ao, n_ao))
    V = np.zeros((n_ao, n_ao))

    for i in range(n_ao):
        for j in range(i + 1):
            ab2 = float(np.dot(centers[i] - centers[j], centers[i] - centers[j]))
            s = t = v = 0.0
            for a, ca in zip(exps, coeffs):
                for b, cb in zip(exps, coeffs):
                    p = a + b
                    mu = a * b / p
                    pref = ca * cb * math.exp(-mu * ab2)
                    s += pref * (math.pi / p) ** 1.5
                    t += pref * mu * (3.0 - 2.0 * mu * ab2) * (math.pi / p) ** 1.5
                    # Gaussian product center.
                    pc = (a * centers[i] + b * centers[j]) / p
                    for zc, center in zip(charges, centers):
                        r2 = float(np.dot(pc - center, pc - center))
                        v -= zc * pref * (2.0 * math.pi / p) * _boys_f0(p * r2)
            S[i, j] = S[j, i] = s
            T[i, j] = T[j, i] = t
            V[i, j] = V[j, i] = v

    # Two-electron integrals (chemist (ij|kl)) over unique index quadruples.
    g = np.zeros((n_ao,) * 4)
    pair_list = [(i, j) for i in range(n_ao) for j in range(i + 1)]
    for ij, (i, j) in enumerate(pair_list):
        ab2 = float(np.dot(centers[i] - centers[j], centers[i] - centers[j]))
        for kl in range(ij + 1):
            k, l = pair_list[kl]
            cd2 = float(np.dot(centers[k] - centers[l], centers[k] - centers[l]))
            val = 0.0
            for a, ca in zip(exps, coeffs):
                for b, cb in zip(exps, coeffs):
                    p = a + b
                    pc = (a * centers[i] + b * centers[j]) / p
                    e_ab = math.exp(-a * b / p * ab2)
                    for c, cc in zip(exps, coeffs):
                        for d, cd in zip(exps, coeffs):
                            q = c + d
                            qc = (c * centers[k] + d * centers[l]) / q
                            e_cd = math.exp(-c * d / q * cd2)
                            r2 = float(np.dot(pc - qc, pc - qc))
                            val += (
                                ca * cb * cc * cd
                                * 2.0 * math.pi ** 2.5
                                / (p * q * math.sqrt(p + q))
                                * e_ab * e_cd
                                * _boys_f0(p * q / (p + q) * r2)
                            )
            for a_, b_ in ((i, j), (j, i)):
                for c_, d_ in ((k, l), (l, k)):
                    g[a_, b_, c_, d_] = g[c_, d_, a_, b_] = val

    e_nuc = 0.0
    for i in range(n_ao):
        for j in range(i):
            rij = float(np.linalg.norm(centers[i] - centers[j]))
            e_nuc += charges[i] * charges[j] / rij

    return AoIntegrals(overlap=S, core=T + V, eri=g, e_nuc=e_nuc, n_ao=n_ao)


@dataclass
class RhfResult:
    """Converged (or flagged) restricted Hartree-Fock solution."""

    energy: float
    orbitals: np.ndarray
    orbital_energies: np.ndarray
    fock: np.ndarray
    density: np.ndarray
    converged: bool
    n_iter: int
    energy_trace: list[float] = field(default_factory=list)


def _coulomb_exchange(eri: np.ndarray, density: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    j = np.einsum("pqrs,rs->pq", eri, density, optimize=True)
    k = np.einsum("prqs,rs->pq", eri, density, optimize=True)
    return j, k


def rhf(
    ao: AoIntegrals,
    n_electrons: int,
    max_iter: int = 200,
    e_tol: float = 1e-10,
    d_tol: float = 1e-8,
    damping: float = 0.3,
) -> RhfResult:
    """Closed-shell RHF with fixed density damping.

    Args:
        ao: AO integrals.
        n_electrons: total electron count (must be even).
        damping: fraction of the previous density mixed into each update.

    Returns:
        RhfResult; ``converged`` is False if the iteration cap was hit.
    """
    if n_electrons % 2 != 0:
        raise ValueError("RHF needs an even electron count")
    n_occ = n_electrons // 2
    if n_occ > ao.n_ao:
        raise ValueError("more electron pairs than basis functions")

    s_vals, s_vecs = np.linalg.eigh(ao.overlap)
    if s_vals.min() <= 0 or s_vals.max() / s_vals.min() > 1e10:
        raise ValueError("AO overlap is (near-)singular; geometry too degenerate")

    def solve_fock(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = s_vecs @ np.diag(s_vals ** -0.5) @ s_vecs.T
        e, c_ort = np.linalg.eigh(x @ f @ x)
        return e, x @ c_ort

    eps, c = solve_fock(ao.core)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T

    energy = 0.0
    trace: list[float] = []
    converged = False
    it = 0
    fock = ao.core.copy()
    for it in range(1, max_iter + 1):
        j, k = _coulomb_exchange(ao.eri, density)
        fock = ao.core + j - 0.5 * k
        new_energy = 0.5 * float(np.sum(density * (ao.core + fock))) + ao.e_nuc
        trace.append(new_energy)
        eps, c = solve_fock(fock)
        new_density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        d_rms = math.sqrt(float(np.mean((new_density - density) ** 2)))
        delta_e = abs(new_energy - energy)
        energy = new_energy
        if it > 1 and delta_e < e_tol and d_rms < d_tol:
            converged = True
            density = new_density
            break
        density = damping * density + (1.0 - damping) * new_density

    # Orbital sign convention: largest-magnitude coefficient positive.
    for col in range(c.shape[1]):
        pivot = np.argmax(np.abs(c[:, col]))
        if c[pivot, col] < 0:
            c[:, col] = -c[:, col]

    return RhfResult(
        energy=energy,
        orbitals=c,
        orbital_energies=eps,
        fock=fock,
        density=density,
        converged=converged,
        n_iter=it,
        energy_trace=trace,
    )


def localize_per_fragment(
    ao: AoIntegrals,
    fock_ao: np.ndarray,
    fragment_ao_sets: "list[list[int]]",
) -> np.ndarray:
    """Fragment-local orthonormal orbitals.

    Lowdin orthonormalization (S^{-1/2}) assigns one orthonormal function per
    AO while preserving locality as far as orthogonality allows; each
    fragment's block is then canonicalized by diagonalizing the
    fragment-diagonal block of the Fock matrix.

    Args:
        ao: AO integrals (for the overlap).
        fock_ao: converged AO-basis Fock matrix.
        fragment_ao_sets: disjoint AO index lists covering all AOs; output
            orbital order is the concatenation of these lists.

    Returns:
        (n_ao, n_ao) coefficient matrix; column block k spans fragment k.
    """
    flat = [i for frag in fragment_ao_sets for i in frag]
    if sorted(flat) != list(range(ao.n_ao)):
        raise ValueError("fragment AO sets must partition the AO list")

    s_vals, s_vecs = np.linalg.eigh(ao.overlap)
    if s_vals.min() <= 0:
        raise ValueError("AO overlap not positive definite")
    x = s_vecs @ np.diag(s_vals ** -0.5) @ s_vecs.T  # Lowdin AOs, ordered like the AO list
    f_lowdin = x.T @ fock_ao @ x

    c = np.zeros((ao.n_ao, ao.n_ao))
    col = 0
    for frag in fragment_ao_sets:
        idx = np.asarray(frag, dtype=int)
        _, u = np.linalg.eigh(f_lowdin[np.ix_(idx, idx)])
        block = x[:, idx] @ u
        for k in range(block.shape[1]):
            pivot = np.argmax(np.abs(block[:, k]))
            if block[pivot, k] < 0:
                block[:, k] = -block[:, k]
        c[:, col : col + len(idx)] = block
        col += len(idx)
    return c


def ao_to_mo(
    ao: AoIntegrals,
    orbitals: np.ndarray,
    frozen: "tuple[int, ...]" = (),
    active: "tuple[int, ...] | None" = None,
    n_electrons: int | None = None,
    ms2: int | None = None,
    source: str = "native-sto3g",
) -> IntegralSet:
    """Transform AO integrals to an orthonormal-orbital IntegralSet.

    Args:
        orbitals: (n_ao, n_mo) coefficient matrix, orthonormal w.r.t. the AO
            overlap.
        frozen: orbital columns folded into the core as doubly occupied.
        active: orbital columns kept; defaults to all non-frozen columns.

    Returns:
        IntegralSet over the active orbitals.
    """
    n_mo = orbitals.shape[1]
    frozen = tuple(frozen)
    if active is None:
        active = tuple(i for i in range(n_mo) if i not in frozen)
    if set(frozen) & set(active):
        raise ValueError("frozen and active orbital sets overlap")

    ortho_err = np.abs(orbitals.T @ ao.overlap @ orbitals - np.eye(n_mo)).max()
    if ortho_err > 1e-8:
        raise ValueError(f"orbital set is not orthonormal (max deviation {ortho_err:.2e})")

    core_h = ao.core
    e_core = ao.e_nuc
    if frozen:
        c_f = orbitals[:, list(frozen)]
        d_f = 2.0 * c_f @ c_f.T
        j, k = _coulomb_exchange(ao.eri, d_f)
        e_core += float(np.sum(d_f * ao.core)) + 0.5 * float(np.sum(d_f * (j - 0.5 * k)))
        core_h = ao.core + j - 0.5 * k

    c_a = orbitals[:, list(active)]
    h = c_a.T @ core_h @ c_a
    g = np.einsum("pqrs,pi,qj,rk,sl->ijkl", ao.eri, c_a, c_a, c_a, c_a, optimize=True)

    out = IntegralSet(
        n_orb=len(active),
        e_core=e_core,
        h=h,
        g=g,
        n_electrons=n_electrons,
        ms2=ms2,
        source=source,
    )
    out.validate(tol=1e-10)
    return out
