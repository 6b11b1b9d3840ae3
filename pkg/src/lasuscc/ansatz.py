"""Inter-fragment generalized coupled-cluster generator pool: enumeration,
closed-form counting, zero-amplitude screening gradients, and threshold
selection.

Spin orbitals are fock modes: alpha spatial orbitals ``0..n-1``, then beta
``n..2n-1``.  A double excitation is an unordered pair ``{P, Q}`` of two
distinct spin-orbital pairs with matching spin multisets (alpha-alpha,
beta-beta, or alpha-beta); the operator is
``tau = a+_{p1} a+_{p2} a_{q2} a_{q1}`` with each pair stored
higher-index-first and the lexicographically larger pair created.  A single
is a same-spin ordered pair ``(k, l)`` with ``k > l`` (one representative
per conjugate pair).  A generator enters the pool only when its spatial
orbitals touch at least two fragments.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .fcidump import FragmentLayout
from .integrals import IntegralSet
from .qubit import MappedHamiltonian, QubitSpace, Statevector, compile_excitation


@dataclass
class Generator:
    """One anti-Hermitian excitation generator ``tau - tau+``."""

    kind: str  # "single" | "double"
    indices: tuple[int, ...]  # (k, l) or (k, m, n, l), fock spin-orbital modes
    amplitude: float = 0.0
    gradient_at_zero: float = 0.0
    selected: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("single", "double"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        expected = 2 if self.kind == "single" else 4
        if len(self.indices) != expected:
            raise ValueError(
                f"{self.kind} generator needs {expected} indices, got {self.indices}"
            )

    @property
    def create_modes(self) -> tuple[int, ...]:
        if self.kind == "single":
            return (self.indices[0],)
        return (self.indices[0], self.indices[1])

    @property
    def annihilate_modes(self) -> tuple[int, ...]:
        if self.kind == "single":
            return (self.indices[1],)
        return (self.indices[2], self.indices[3])

    @property
    def label(self) -> str:
        cre = " ".join(f"{m}^" for m in self.create_modes)
        ann = " ".join(str(m) for m in self.annihilate_modes)
        return f"{cre} {ann}"

    def spatial_orbitals(self, n_orb: int) -> tuple[int, ...]:
        return tuple(sorted({m % n_orb for m in self.indices}))


@dataclass
class GeneratorPool:
    """The ordered inter-fragment generator set for one layout."""

    layout: FragmentLayout
    generators: list[Generator] = field(default_factory=list)

    @property
    def n_singles(self) -> int:
        return sum(1 for g in self.generators if g.kind == "single")

    @property
    def n_doubles(self) -> int:
        return sum(1 for g in self.generators if g.kind == "double")

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def count_doubles_full(n: int) -> int:
    """All generalized double excitations over n spatial orbitals."""
    if n < 1:
        raise ValueError("orbital count must be >= 1")
    pairs = math.comb(n, 2)
    return 6 * math.comb(pairs, 2) + 2 * (n + 1) * pairs


def count_parameters(layout: FragmentLayout) -> tuple[int, int, int]:
    """(singles, doubles, total) inter-fragment parameter counts."""
    n = layout.n_orb
    sizes = [f.n_orb for f in layout.fragments]
    doubles = count_doubles_full(n) - sum(count_doubles_full(nk) for nk in sizes if nk >= 1)
    singles = 0
    for i in range(len(sizes)):
        for j in range(i + 1, len(sizes)):
            singles += sizes[i] * sizes[j]
    singles *= 2
    return singles, doubles, singles + doubles


def _spin_pairs(n_orb: int) -> list[list[tuple[int, int]]]:
    """Same-spin-multiset pair classes, each pair higher mode first."""
    alpha = range(n_orb)
    beta = range(n_orb, 2 * n_orb)
    aa = [(j, i) for i, j in combinations(alpha, 2)]
    bb = [(j, i) for i, j in combinations(beta, 2)]
    ab = [(b, a) for a in alpha for b in beta]  # beta mode always the larger
    return [aa, bb, ab]


def _touches_two_fragments(layout: FragmentLayout, modes: tuple[int, ...]) -> bool:
    n = layout.n_orb
    frags = {layout.fragment_of_orbital(m % n) for m in modes}
    return len(frags) >= 2


def enumerate_pool(layout: FragmentLayout) -> GeneratorPool:
    """All spin-conserving inter-fragment singles and doubles, canonical
    representative per conjugate pair, singles first then doubles, each in
    ascending index order."""
    n = layout.n_orb
    generators: list[Generator] = []

    for spin_base in (0, n):
        for k in range(n):
            for l in range(k):
                mk, ml = spin_base + k, spin_base + l
                if _touches_two_fragments(layout, (mk, ml)):
                    generators.append(Generator("single", (mk, ml)))

    doubles: list[Generator] = []
    for pair_class in _spin_pairs(n):
        for q_pair, p_pair in combinations(pair_class, 2):
            # combinations yields q_pair before p_pair in list order; store
            # the lexicographically larger pair as the created one.
            p = max(p_pair, q_pair)
            q = min(p_pair, q_pair)
            modes = (p[0], p[1], q[1], q[0])
            if _touches_two_fragments(layout, modes):
                doubles.append(Generator("double", modes))

    generators.sort(key=lambda g: g.indices)
    doubles.sort(key=lambda g: g.indices)
    pool = GeneratorPool(layout=layout, generators=generators + doubles)

    n_singles, n_doubles, total = count_parameters(layout)
    if (pool.n_singles, pool.n_doubles) != (n_singles, n_doubles):
        raise RuntimeError(
            "pool enumeration disagrees with closed-form counts: "
            f"got ({pool.n_singles}, {pool.n_doubles}), "
            f"expected ({n_singles}, {n_doubles})"
        )
    return pool


def screen_gradients(
    pool: GeneratorPool,
    las_statevector,
    ints: IntegralSet,
    threads: int = 1,
) -> GeneratorPool:
    """Fill each generator's zero-amplitude energy derivative.

    The score is ``2 Re <psi| H (tau - tau+) |psi>``, the exact derivative
    of the one-generator ansatz energy at amplitude zero (independent of
    the product ordering there).  The state is applied once with H; each
    generator then needs one sparse pass over the register.
    """
    data = las_statevector.data if isinstance(las_statevector, Statevector) else np.asarray(las_statevector)
    data = np.ascontiguousarray(data, dtype=np.complex128)
    space = QubitSpace(pool.layout)
    if data.shape != (space.dim,):
        raise ValueError(
            f"statevector has shape {data.shape}, expected {(space.dim,)}"
        )
    w = MappedHamiltonian(ints, space).apply(data)

    compiled = [
        compile_excitation(
            tuple(int(space.qubit_of_mode[m]) for m in g.create_modes),
            tuple(int(space.qubit_of_mode[m]) for m in g.annihilate_modes),
        )
        for g in pool.generators
    ]

    def run_range(lo: int, hi: int) -> None:
        scratch = np.empty_like(data)
        for i in range(lo, hi):
            scratch.fill(0.0)
            compiled[i].accumulate(scratch, data, 1.0)
            pool.generators[i].gradient_at_zero = float(
                2.0 * np.vdot(w, scratch).real
            )

    n_gen = len(pool.generators)
    threads = max(1, int(threads))
    if threads == 1 or n_gen < 2 * threads:
        run_range(0, n_gen)
    else:
        bounds = np.linspace(0, n_gen, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as executor:
            futures = [
                executor.submit(run_range, int(bounds[t]), int(bounds[t + 1]))
                for t in range(threads)
            ]
            for fut in futures:
                fut.result()
    return pool


def select(pool: GeneratorPool, epsilon: float) -> list[Generator]:
    """Generators with |gradient| >= epsilon, strongest first.

    Ties break on ascending index tuple; epsilon 0 selects everything.
    Selection flags on the pool are updated in place.
    """
    if epsilon < 0:
        raise ValueError("selection threshold must be >= 0")
    chosen = []
    for g in pool.generators:
        g.selected = abs(g.gradient_at_zero) >= epsilon
        if g.selected:
            chosen.append(g)
    chosen.sort(key=lambda g: (-abs(g.gradient_at_zero), g.indices))
    return chosen


GRADIENT_BIN_EDGES = (0.0, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, math.inf)


def gradient_histogram(pool: GeneratorPool) -> list[tuple[str, int]]:
    """Decade-bin counts of |gradient|, lowest bin [0, 1e-5) first."""
    values = [abs(g.gradient_at_zero) for g in pool.generators]
    out = []
    for lo, hi in zip(GRADIENT_BIN_EDGES[:-1], GRADIENT_BIN_EDGES[1:]):
        label = f"[{lo:g}, {hi:g})"
        out.append((label, sum(1 for v in values if lo <= v < hi)))
    return out
