"""Timing comparison of the compiled and pure-NumPy statevector kernels.

Runs the two hot operations (Pauli-string rotation, fused excitation
rotation) on both backends over a range of register sizes, then times one
full energy-plus-gradient evaluation on the H4 cluster model with whatever
backend is active.

Usage:
    python benchmarks/bench_kernels.py [--qubits 8 12 16 20] [--repeat 200]
"""

import argparse
import time

import numpy as np

from lasuscc.kernels import backend_name, get_backend
from lasuscc.qubit import compile_excitation


def _random_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(1 << n_qubits)
    return np.ascontiguousarray(psi / np.linalg.norm(psi))


def _time(fun, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fun()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backends(n_qubits: int, repeat: int, rng: np.random.Generator) -> list[tuple]:
    """Best-of-N wall times per backend for one weight-4 Pauli rotation and
    one fused double-excitation rotation."""
    base = _random_state(n_qubits, rng)
    # weight-4 string (XYXZ on the low qubits), double excitation 0,1 -> 2,3
    x_mask, z_mask = 0b0111, 0b1110
    compiled = compile_excitation((2, 3), (0, 1))

    rows = []
    backends = ["python"]
    try:
        get_backend("compiled")
        backends.append("compiled")
    except RuntimeError:
        pass
    for name in backends:
        ker = get_backend(name)
        psi = base.copy()
        t_pauli = _time(lambda: ker.pauli_rotation(psi, x_mask, z_mask, 1e-3), repeat)
        psi = base.copy()
        t_exc = _time(
            lambda: ker.excitation_rotation(
                psi,
                compiled.ann_mask,
                compiled.cre_mask,
                compiled.flip_mask,
                compiled.parity_mask,
                compiled.base_sign,
                1e-3,
            ),
            repeat,
        )
        rows.append((name, t_pauli, t_exc))
    return rows


def bench_end_to_end() -> tuple[float, float]:
    """One full-pool energy+gradient evaluation on the H4 cluster model."""
    from lasuscc.ansatz import enumerate_pool, screen_gradients, select
    from lasuscc.las import assemble_statevector, las_qubit_space, lasci
    from lasuscc.qubit import MappedHamiltonian
    from lasuscc.vqe import energy, gradient
    from lasuscc.workflow import prepare_h2_cluster_system

    system = prepare_h2_cluster_system(2, 1.46)
    las = lasci(system.ints, system.layout)
    reference = assemble_statevector(las)
    pool = enumerate_pool(system.layout)
    screen_gradients(pool, reference, system.ints)
    selection = select(pool, 0.0)
    space = las_qubit_space(las)
    mh = MappedHamiltonian(system.ints, space)
    rng = np.random.default_rng(7)
    amplitudes = rng.uniform(-0.05, 0.05, size=len(selection))

    # warm up lazily built internals so the numbers reflect steady state
    energy(selection, amplitudes, reference, system.ints, space, _hamiltonian=mh)
    gradient(selection, amplitudes, reference, system.ints, space, _hamiltonian=mh)

    t0 = time.perf_counter()
    energy(selection, amplitudes, reference, system.ints, space, _hamiltonian=mh)
    t_energy = time.perf_counter() - t0
    t0 = time.perf_counter()
    gradient(selection, amplitudes, reference, system.ints, space, _hamiltonian=mh)
    t_gradient = time.perf_counter() - t0
    return t_energy, t_gradient


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--qubits", type=int, nargs="+", default=[8, 12, 16, 20])
    parser.add_argument("--repeat", type=int, default=200,
                        help="repetitions per measurement (best is reported)")
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    print(f"active backend: {backend_name()}")
    print(f"{'qubits':>6} {'backend':>9} {'pauli_rot':>12} {'excitation':>12} {'speedup':>9}")
    for n in args.qubits:
        repeat = max(5, args.repeat >> max(0, n - 12))
        rows = bench_backends(n, repeat, rng)
        reference_pauli = rows[0][1]
        for name, t_pauli, t_exc in rows:
            speedup = reference_pauli / t_pauli if t_pauli else float("inf")
            print(
                f"{n:>6} {name:>9} {t_pauli * 1e6:>10.1f}us {t_exc * 1e6:>10.1f}us"
                f" {speedup:>8.1f}x"
            )

    t_energy, t_gradient = bench_end_to_end()
    print(
        f"\nH4 cluster, 146-parameter ansatz ({backend_name()} backend): "
        f"energy {t_energy * 1e3:.2f} ms, gradient {t_gradient * 1e3:.2f} ms"
    )


if __name__ == "__main__":
    main()
