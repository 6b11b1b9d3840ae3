"""Fragment self-consistency (localized active-space CI) and product-state
assembly into the qubit register.

Each fragment carries its own small CI problem over its orbital block; the
other fragments enter through a frozen mean-field potential (spin-summed
Coulomb minus same-spin exchange built from their current one-particle
density matrices).  Fragments are updated sequentially, which makes every
macro-iteration a coordinate descent step on the product-state energy
functional and the energy trace monotonically non-increasing.

Orbitals stay fixed throughout: the fragment basis is whatever the integral
pipeline (or the FCIDUMP) provides.  The assembled register state places
fragment 0 on the lowest qubits with its alpha block below its beta block,
so the product state is a plain Kronecker product of fragment vectors with
no residual reordering signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .fcidump import FragmentLayout
from .fock import (
    CIVector,
    Sector,
    build_sector_hamiltonian,
    expectation_value,
    get_string_space,
    make_rdm1,
)
from .integrals import IntegralSet
from .qubit import QubitSpace, Statevector

MAX_MACRO_ITERATIONS = 100
ENERGY_TOL = 1e-10
DENSITY_TOL = 1e-8
_FRAGMENT_DENSE_LIMIT = 20000


class LasConvergenceError(RuntimeError):
    """The fragment fixed-point loop failed to converge."""

    def __init__(self, message: str, trace: tuple[float, ...]):
        super().__init__(f"{message}; energy trace: {list(trace)}")
        self.trace = trace


@dataclass
class LasState:
    """Converged product-state description of the fragmented system."""

    layout: FragmentLayout
    fragment_states: tuple[CIVector, ...]
    fragment_energies: tuple[float, ...]
    energy: float
    converged: bool
    iterations: int
    trace: tuple[float, ...]


def _fragment_blocks(ints: IntegralSet, orbitals: tuple[int, ...]):
    ix = np.ix_(orbitals, orbitals)
    h = ints.h[ix]
    g = ints.g[np.ix_(orbitals, orbitals, orbitals, orbitals)]
    return h, g


def _embed_density(n_orb: int, orbitals: tuple[int, ...], local: np.ndarray) -> np.ndarray:
    out = np.zeros((n_orb, n_orb))
    out[np.ix_(orbitals, orbitals)] = local
    return out


def _solve_fragment(
    h: np.ndarray,
    g: np.ndarray,
    sector: Sector,
    h_alpha: np.ndarray | None = None,
    h_beta: np.ndarray | None = None,
) -> tuple[float, CIVector]:
    """Dense ground state of one embedded fragment Hamiltonian."""
    if sector.dim > _FRAGMENT_DENSE_LIMIT:
        raise ValueError(
            f"fragment sector dimension {sector.dim} exceeds the dense solver limit"
        )
    ints = IntegralSet(n_orb=sector.n_orb, e_core=0.0, h=h, g=g)
    mat = build_sector_hamiltonian(ints, sector, h_alpha=h_alpha, h_beta=h_beta).toarray()
    evals, evecs = np.linalg.eigh(mat)
    vec = evecs[:, 0]
    # Deterministic global sign: largest-magnitude coefficient positive.
    pivot = int(np.argmax(np.abs(vec)))
    if vec[pivot] < 0:
        vec = -vec
    alpha = get_string_space(sector.n_orb, sector.n_alpha)
    beta = get_string_space(sector.n_orb, sector.n_beta)
    ci = CIVector(sector, vec.reshape(alpha.dim, beta.dim))
    return float(evals[0]), ci


def _coulomb_potential(g: np.ndarray, density: np.ndarray) -> np.ndarray:
    return np.einsum("abcd,cd->ab", g, density, optimize=True)


def _exchange_potential(g: np.ndarray, density: np.ndarray) -> np.ndarray:
    return np.einsum("abcd,cb->ad", g, density, optimize=True)


def _total_energy(
    ints: IntegralSet,
    layout: FragmentLayout,
    states: list[CIVector],
) -> tuple[float, tuple[float, ...]]:
    """Product-state energy: intrinsic fragment terms plus pairwise
    mean-field cross terms (Coulomb minus same-spin exchange)."""
    n = ints.n_orb
    fragment_energies = []
    d_alpha, d_beta = [], []
    for fragment, ci in zip(layout.fragments, states):
        h_k, g_k = _fragment_blocks(ints, fragment.orbitals)
        local = IntegralSet(n_orb=len(fragment.orbitals), e_core=0.0, h=h_k, g=g_k)
        fragment_energies.append(float(expectation_value(local, ci)))
        da, db = make_rdm1(ci)
        d_alpha.append(_embed_density(n, fragment.orbitals, da))
        d_beta.append(_embed_density(n, fragment.orbitals, db))

    energy = ints.e_core + sum(fragment_energies)
    n_frag = len(layout.fragments)
    for k in range(n_frag):
        dk_tot = d_alpha[k] + d_beta[k]
        for m in range(k + 1, n_frag):
            dm_tot = d_alpha[m] + d_beta[m]
            energy += float(np.einsum("abcd,ab,cd->", ints.g, dk_tot, dm_tot, optimize=True))
            energy -= float(
                np.einsum("abcd,ad,cb->", ints.g, d_alpha[k], d_alpha[m], optimize=True)
            )
            energy -= float(
                np.einsum("abcd,ad,cb->", ints.g, d_beta[k], d_beta[m], optimize=True)
            )
    return float(energy), tuple(fragment_energies)


def lasci(ints: IntegralSet, layout: FragmentLayout) -> LasState:
    """Fragment fixed point: embedded CI per fragment until the total energy
    and every fragment density are stationary.

    Raises LasConvergenceError (with the energy trace) if the loop does not
    settle within 100 macro-iterations.
    """
    if layout.n_orb != ints.n_orb:
        raise ValueError(
            f"layout covers {layout.n_orb} orbitals, integrals have {ints.n_orb}"
        )
    n = ints.n_orb
    fragments = layout.fragments

    states: list[CIVector] = []
    d_alpha: list[np.ndarray] = []
    d_beta: list[np.ndarray] = []
    for fragment in fragments:
        h_k, g_k = _fragment_blocks(ints, fragment.orbitals)
        sector = Sector(len(fragment.orbitals), fragment.n_alpha, fragment.n_beta)
        _, ci = _solve_fragment(h_k, g_k, sector)
        states.append(ci)
        da, db = make_rdm1(ci)
        d_alpha.append(_embed_density(n, fragment.orbitals, da))
        d_beta.append(_embed_density(n, fragment.orbitals, db))

    energy, fragment_energies = _total_energy(ints, layout, states)
    trace = [energy]
    converged = False
    iterations = 0

    for _ in range(MAX_MACRO_ITERATIONS):
        iterations += 1
        max_density_change = 0.0
        for k, fragment in enumerate(fragments):
            orbitals = fragment.orbitals
            env_alpha = sum(
                (d_alpha[m] for m in range(len(fragments)) if m != k),
                start=np.zeros((n, n)),
            )
            env_beta = sum(
                (d_beta[m] for m in range(len(fragments)) if m != k),
                start=np.zeros((n, n)),
            )
            env_tot = env_alpha + env_beta
            coulomb = _coulomb_potential(ints.g, env_tot)[np.ix_(orbitals, orbitals)]
            exch_a = _exchange_potential(ints.g, env_alpha)[np.ix_(orbitals, orbitals)]
            exch_b = _exchange_potential(ints.g, env_beta)[np.ix_(orbitals, orbitals)]
            h_k, g_k = _fragment_blocks(ints, orbitals)
            sector = Sector(len(orbitals), fragment.n_alpha, fragment.n_beta)
            _, ci = _solve_fragment(
                h_k,
                g_k,
                sector,
                h_alpha=h_k + coulomb - exch_a,
                h_beta=h_k + coulomb - exch_b,
            )
            states[k] = ci
            da, db = make_rdm1(ci)
            new_da = _embed_density(n, orbitals, da)
            new_db = _embed_density(n, orbitals, db)
            max_density_change = max(
                max_density_change,
                float(np.abs(new_da - d_alpha[k]).max()),
                float(np.abs(new_db - d_beta[k]).max()),
            )
            d_alpha[k] = new_da
            d_beta[k] = new_db

        energy, fragment_energies = _total_energy(ints, layout, states)
        trace.append(energy)
        if abs(trace[-1] - trace[-2]) < ENERGY_TOL and max_density_change < DENSITY_TOL:
            converged = True
            break

    if not converged:
        raise LasConvergenceError(
            f"fragment fixed point did not converge in {MAX_MACRO_ITERATIONS} macro-iterations",
            tuple(trace),
        )

    return LasState(
        layout=layout,
        fragment_states=tuple(states),
        fragment_energies=fragment_energies,
        energy=energy,
        converged=converged,
        iterations=iterations,
        trace=tuple(trace),
    )


def fragment_local_vector(ci: CIVector) -> np.ndarray:
    """A fragment's CI vector on its local qubit block (alpha bits low)."""
    sector = ci.sector
    n_k = sector.n_orb
    alpha = get_string_space(n_k, sector.n_alpha)
    beta = get_string_space(n_k, sector.n_beta)
    local = np.zeros(1 << (2 * n_k), dtype=np.complex128)
    a_bits = alpha.strings.astype(np.int64)
    b_bits = beta.strings.astype(np.int64) << n_k
    local[a_bits[:, None] | b_bits[None, :]] = ci.coeffs
    return local


def assemble_statevector(las_state: LasState) -> Statevector:
    """Embed the product of fragment CI vectors into the global register.

    With the fragment-major qubit ordering the fragment creation sequences
    are already globally ascending, so the product state is an exact
    Kronecker product with no reordering signs.
    """
    locals_ = [fragment_local_vector(ci) for ci in las_state.fragment_states]
    data = reduce(lambda acc, nxt: np.kron(nxt, acc), locals_[1:], locals_[0])
    n_qubits = 2 * las_state.layout.n_orb
    return Statevector(n_qubits, data)


def las_qubit_space(las_state: LasState) -> QubitSpace:
    return QubitSpace(las_state.layout)
