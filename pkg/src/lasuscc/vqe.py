"""Variational optimization of the Trotterized selected-generator ansatz,
the threshold-ladder sweep, and the spin-coupling formula.

The ansatz applies one exponential per selected generator to the reference
product state, in a fixed canonical order (singles before doubles, each
kind by ascending index tuple).  Energies come from the sector-mapped
Hamiltonian; gradients are exact, via a reverse (adjoint) sweep that walks
the circuit backwards so the cost stays at a small constant multiple of
one energy evaluation regardless of the parameter count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .ansatz import Generator, GeneratorPool, select
from .constants import HARTREE_TO_CM1
from .fcidump import OptimizerSettings
from .integrals import IntegralSet
from .qubit import (
    CompiledExcitation,
    MappedHamiltonian,
    QubitSpace,
    Statevector,
    compile_excitation,
    excitation_rotation_terms,
)
from .resources import GateCountEstimate, estimate


@dataclass
class VqeResult:
    """Outcome of one minimization."""

    energy: float
    amplitudes: np.ndarray
    iterations: int
    gradient_norm: float
    trace: tuple[float, ...]
    wall_time: float
    converged: bool


@dataclass
class SweepRecord:
    """One threshold rung of the ladder."""

    epsilon: float
    n_params: int
    result: VqeResult
    gates: GateCountEstimate
    selection: list[Generator]


class TrotterAnsatz:
    """First-order product of excitation exponentials in a fixed order.

    ``kernel`` picks the statevector backend per generator: ``"fused"``
    (default) applies each exponential as one masked pair rotation;
    ``"pauli"`` applies the generator's commuting Pauli-term rotations one
    by one.  Both produce identical states to rounding.
    """

    def __init__(
        self,
        generators,
        space: QubitSpace,
        kernel: str | None = None,
        canonical_order: bool = True,
    ):
        gens = list(generators)
        if canonical_order:
            gens.sort(key=lambda g: (g.kind != "single", g.indices))
        self.generators: list[Generator] = gens
        self.space = space
        mode = kernel or "auto"
        if mode == "auto":
            mode = "fused"
        if mode not in ("fused", "pauli"):
            raise ValueError(f"unknown kernel mode {mode!r}")
        self.kernel = mode
        self._compiled: list[CompiledExcitation] = []
        self._pauli_terms: list[tuple[tuple[int, int, float], ...]] = []
        for g in gens:
            cre = tuple(int(space.qubit_of_mode[m]) for m in g.create_modes)
            ann = tuple(int(space.qubit_of_mode[m]) for m in g.annihilate_modes)
            self._compiled.append(compile_excitation(cre, ann))
            if mode == "pauli":
                self._pauli_terms.append(
                    excitation_rotation_terms(cre, ann, space.n_qubits)
                )

    def __len__(self) -> int:
        return len(self.generators)

    def _rotate(self, data: np.ndarray, i: int, theta: float) -> None:
        if self.kernel == "fused":
            self._compiled[i].rotate(data, theta)
        else:
            from . import kernels

            ker = kernels.get_backend()
            for x, z, g in self._pauli_terms[i]:
                ker.pauli_rotation(data, x, z, theta * g)

    def _accumulate(self, out: np.ndarray, data: np.ndarray, i: int) -> None:
        if self.kernel == "fused":
            self._compiled[i].accumulate(out, data, 1.0)
        else:
            from . import kernels

            ker = kernels.get_backend()
            for x, z, g in self._pauli_terms[i]:
                ker.pauli_accumulate(out, data, x, z, 1.0j * g)

    def prepare(self, reference, amplitudes: np.ndarray) -> np.ndarray:
        """Apply the full circuit to a copy of the reference state."""
        if len(amplitudes) != len(self.generators):
            raise ValueError(
                f"{len(amplitudes)} amplitudes for {len(self.generators)} generators"
            )
        data = np.array(_as_array(reference), dtype=np.complex128, copy=True)
        for i, t in enumerate(amplitudes):
            self._rotate(data, i, float(t))
        return data


def _as_array(state) -> np.ndarray:
    if isinstance(state, Statevector):
        return state.data
    return np.ascontiguousarray(state, dtype=np.complex128)


def energy(
    selection,
    amplitudes,
    las_statevector,
    ints: IntegralSet,
    space: QubitSpace | None = None,
    kernel: str | None = None,
    _hamiltonian: MappedHamiltonian | None = None,
) -> float:
    """Trotterized ansatz energy at the given amplitudes.

    ``amplitudes[i]`` belongs to ``selection[i]`` regardless of the order
    the circuit applies the exponentials in.
    """
    ansatz, mh, reference, perm = _context(selection, las_statevector, ints, space, kernel, _hamiltonian)
    amps = np.asarray(amplitudes, dtype=float)
    psi = ansatz.prepare(reference, amps if perm is None else amps[perm])
    return mh.expectation(psi)


def gradient(
    selection,
    amplitudes,
    las_statevector,
    ints: IntegralSet,
    space: QubitSpace | None = None,
    kernel: str | None = None,
    _hamiltonian: MappedHamiltonian | None = None,
) -> np.ndarray:
    """Exact derivative of the Trotterized energy for each amplitude,
    aligned with ``selection`` like the amplitudes themselves."""
    ansatz, mh, reference, perm = _context(selection, las_statevector, ints, space, kernel, _hamiltonian)
    amps = np.asarray(amplitudes, dtype=float)
    _, grad = _energy_and_gradient(
        ansatz, mh, reference, amps if perm is None else amps[perm]
    )
    if perm is None:
        return grad
    out = np.empty_like(grad)
    out[perm] = grad
    return out


def _context(selection, las_statevector, ints, space, kernel, hamiltonian):
    """Build (ansatz, hamiltonian, reference array, permutation).

    The permutation maps circuit slots back to positions in the caller's
    selection (``ansatz.generators[k] is selection[perm[k]]``); it is None
    when the caller passed an ansatz and therefore already works in circuit
    order, or when the canonical sort leaves the order unchanged.
    """
    if isinstance(selection, TrotterAnsatz):
        ansatz = selection
        space = ansatz.space
        perm = None
    else:
        if space is None:
            raise ValueError("a QubitSpace is required when passing a raw selection")
        selection = list(selection)
        ansatz = TrotterAnsatz(selection, space, kernel=kernel)
        position = {id(g): i for i, g in enumerate(selection)}
        perm = np.array(
            [position[id(g)] for g in ansatz.generators], dtype=np.intp
        )
        if np.array_equal(perm, np.arange(len(perm))):
            perm = None
    mh = hamiltonian if hamiltonian is not None else MappedHamiltonian(ints, space)
    return ansatz, mh, _as_array(las_statevector), perm


def _energy_and_gradient(
    ansatz: TrotterAnsatz,
    mh: MappedHamiltonian,
    reference: np.ndarray,
    amplitudes: np.ndarray,
) -> tuple[float, np.ndarray]:
    """One forward circuit pass, one Hamiltonian application, one backward
    sweep peeling exponentials off both the state and its Hamiltonian
    image."""
    m = len(ansatz)
    psi = ansatz.prepare(reference, amplitudes)
    hpsi = mh.apply(psi)
    e_val = float(np.vdot(psi, hpsi).real)
    grads = np.zeros(m)
    scratch = np.empty_like(psi)
    lam = hpsi
    for i in range(m - 1, -1, -1):
        scratch.fill(0.0)
        ansatz._accumulate(scratch, psi, i)
        grads[i] = 2.0 * float(np.vdot(lam, scratch).real)
        t = float(amplitudes[i])
        ansatz._rotate(psi, i, -t)
        ansatz._rotate(lam, i, -t)
    return e_val, grads


def minimize(
    selection,
    las_statevector,
    ints: IntegralSet,
    space: QubitSpace | None = None,
    x0=None,
    settings: OptimizerSettings | None = None,
    kernel: str | None = None,
    _hamiltonian: MappedHamiltonian | None = None,
) -> VqeResult:
    """Quasi-Newton (BFGS with backtracking) minimization of the ansatz
    energy.  Hitting the iteration cap flags the result non-converged
    instead of raising."""
    settings = settings or OptimizerSettings()
    ansatz, mh, reference, perm = _context(selection, las_statevector, ints, space, kernel, _hamiltonian)
    m = len(ansatz)
    t_start = time.perf_counter()

    if x0 is None:
        x = np.zeros(m)
    else:
        x = np.asarray(x0, dtype=float).copy()
        if x.shape != (m,):
            raise ValueError(f"initial amplitudes have shape {x.shape}, expected {(m,)}")
        if perm is not None:
            x = x[perm]

    if m == 0:
        e0 = mh.expectation(reference)
        return VqeResult(
            energy=e0,
            amplitudes=x,
            iterations=0,
            gradient_norm=0.0,
            trace=(e0,),
            wall_time=time.perf_counter() - t_start,
            converged=True,
        )

    gtol = settings.gradient_tolerance
    etol = settings.energy_tolerance
    max_iter = settings.max_iterations

    f, g = _energy_and_gradient(ansatz, mh, reference, x)
    trace = [f]
    h_inv = np.eye(m)
    iterations = 0
    converged = bool(np.linalg.norm(g, np.inf) < gtol)

    while not converged and iterations < max_iter:
        p = -(h_inv @ g)
        slope = float(p @ g)
        if slope >= 0.0:
            h_inv = np.eye(m)
            p = -g
            slope = float(p @ g)
            if slope >= 0.0:
                break  # gradient numerically zero
        alpha = 1.0
        f_new = g_new = None
        while alpha > 1e-14:
            x_try = x + alpha * p
            f_try, g_try = _energy_and_gradient(ansatz, mh, reference, x_try)
            if f_try <= f + 1e-4 * alpha * slope:
                f_new, g_new = f_try, g_try
                break
            alpha *= 0.5
        if f_new is None:
            break  # line search exhausted; no decrease possible
        iterations += 1
        s = alpha * p
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            left = np.eye(m) - rho * np.outer(s, y)
            h_inv = left @ h_inv @ left.T + rho * np.outer(s, s)
        x = x + s
        delta = f - f_new
        f, g = f_new, g_new
        trace.append(f)
        if np.linalg.norm(g, np.inf) < gtol or abs(delta) < etol:
            converged = True

    if perm is not None:
        x_out = np.empty_like(x)
        x_out[perm] = x
        x = x_out
    return VqeResult(
        energy=f,
        amplitudes=x,
        iterations=iterations,
        gradient_norm=float(np.linalg.norm(g, np.inf)),
        trace=tuple(trace),
        wall_time=time.perf_counter() - t_start,
        converged=converged,
    )


def sweep(
    pool: GeneratorPool,
    las_statevector,
    ints: IntegralSet,
    ladder,
    warm_start: bool = True,
    settings: OptimizerSettings | None = None,
    kernel: str | None = None,
) -> list[SweepRecord]:
    """One minimization per threshold, largest threshold first.

    With warm starts each rung initializes from the previous optimum
    (zeros for newly admitted amplitudes), which makes the energy column
    non-increasing down the ladder.
    """
    ladder = [float(e) for e in ladder]
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("threshold ladder must be strictly decreasing")
    space = QubitSpace(pool.layout)
    mh = MappedHamiltonian(ints, space)
    reference = _as_array(las_statevector)
    records: list[SweepRecord] = []
    previous: dict[tuple[int, ...], float] = {}

    for eps in ladder:
        selection = select(pool, eps)
        ansatz = TrotterAnsatz(selection, space, kernel=kernel)
        if warm_start and previous:
            x0 = np.array(
                [previous.get(g.indices, 0.0) for g in ansatz.generators]
            )
        else:
            x0 = None
        result = minimize(
            ansatz,
            reference,
            ints,
            x0=x0,
            settings=settings,
            _hamiltonian=mh,
        )
        if warm_start:
            previous = {
                g.indices: float(t)
                for g, t in zip(ansatz.generators, result.amplitudes)
            }
        records.append(
            SweepRecord(
                epsilon=eps,
                n_params=len(selection),
                result=result,
                gates=estimate(selection),
                selection=selection,
            )
        )
    return records


def yamaguchi_j(e_high_spin: float, e_low_spin: float, s2_high_spin: float, s2_low_spin: float) -> float:
    """Magnetic coupling constant in cm^-1 from two spin-state energies.

    J = (E_HS - E_LS) / (<S^2>_LS - <S^2>_HS), converted from Hartree.
    """
    denominator = s2_low_spin - s2_high_spin
    if abs(denominator) < 1e-12:
        raise ValueError("spin expectation values must differ")
    return (e_high_spin - e_low_spin) / denominator * HARTREE_TO_CM1
