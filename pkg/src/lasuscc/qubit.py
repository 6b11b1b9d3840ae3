"""Qubit-side representation: Pauli algebra, the fermion-to-qubit mapping,
and the exact statevector simulator.

Conventions
-----------
* A qubit basis index ``b`` encodes occupations with qubit ``q`` at bit ``q``
  (qubit 0 = least significant bit).
* ``PauliString(x_mask, z_mask, phase)`` represents
  ``phase * X^x_mask * Z^z_mask`` acting as
  ``P|b> = phase * (-1)^popcount(b & z_mask) |b XOR x_mask>``.
  The canonical self-adjoint phase for masks ``(x, z)`` is
  ``i^popcount(x & z)``.
* The fermion-to-qubit mapping is the standard parity-string one:
  ``a_p -> Z_0...Z_{p-1} (X_p + iY_p)/2``, so a basis state ``|b>``
  corresponds to the determinant whose creation operators are ordered by
  ascending qubit index.
* The global register is fragment-major: fragment 0's alpha spin orbitals on
  the lowest qubits, then fragment 0's beta, then fragment 1's alpha, and so
  on.  ``QubitSpace`` holds the mode-to-qubit table and the signed maps
  between determinant-sector CI vectors and the full register.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .fcidump import FragmentLayout
from .fock import (
    CIVector,
    Sector,
    apply_hamiltonian,
    build_sector_hamiltonian,
    get_string_space,
)
from .integrals import IntegralSet

MAX_QUBITS = 24
COEFF_PRUNE_TOL = 1e-14

_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


class HermiticityError(ValueError):
    """An expectation value exposed a non-Hermitian observable."""


def _snap_phase(value: complex) -> complex:
    for ph in _PHASES:
        if abs(complex(value) - ph) <= 1e-9:
            return ph
    raise ValueError(f"Pauli phase must be one of 1, i, -1, -i; got {value!r}")


def _phase_power(value: complex) -> int:
    return _PHASES.index(_snap_phase(value))


@dataclass(frozen=True)
class PauliString:
    """A single Pauli operator ``phase * X^x_mask * Z^z_mask``."""

    x_mask: int
    z_mask: int
    phase: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.x_mask < 0 or self.z_mask < 0:
            raise ValueError("Pauli masks must be non-negative")
        object.__setattr__(self, "phase", _snap_phase(self.phase))

    @staticmethod
    def canonical_phase(x_mask: int, z_mask: int) -> complex:
        """The self-adjoint phase ``i^popcount(x & z)`` for these masks."""
        return _PHASES[(x_mask & z_mask).bit_count() & 3]

    @classmethod
    def canonical(cls, x_mask: int, z_mask: int) -> "PauliString":
        return cls(x_mask, z_mask, cls.canonical_phase(x_mask, z_mask))

    @classmethod
    def identity(cls) -> "PauliString":
        return cls(0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a letter string; character ``q`` addresses qubit ``q``."""
        x = z = 0
        phase = 1.0 + 0.0j
        for q, ch in enumerate(label.upper()):
            bit = 1 << q
            if ch == "X":
                x |= bit
            elif ch == "Z":
                z |= bit
            elif ch == "Y":
                x |= bit
                z |= bit
                phase *= 1.0j
            elif ch != "I":
                raise ValueError(f"invalid Pauli letter {ch!r}")
        return cls(x, z, phase)

    def label(self, n_qubits: int) -> str:
        letters = []
        rest = self.phase
        for q in range(n_qubits):
            bit = 1 << q
            has_x = bool(self.x_mask & bit)
            has_z = bool(self.z_mask & bit)
            if has_x and has_z:
                letters.append("Y")
                rest *= -1.0j
            elif has_x:
                letters.append("X")
            elif has_z:
                letters.append("Z")
            else:
                letters.append("I")
        prefix = {1.0 + 0.0j: "", 1.0j: "i", -1.0 + 0.0j: "-", -1.0j: "-i"}[_snap_phase(rest)]
        return prefix + "".join(letters)

    @property
    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    def mul(self, other: "PauliString") -> "PauliString":
        """Operator product ``self * other`` (a PauliString again)."""
        sign = -1.0 if (self.z_mask & other.x_mask).bit_count() & 1 else 1.0
        return PauliString(
            self.x_mask ^ other.x_mask,
            self.z_mask ^ other.z_mask,
            self.phase * other.phase * sign,
        )

    __mul__ = mul

    def dagger(self) -> "PauliString":
        sign = -1.0 if (self.x_mask & self.z_mask).bit_count() & 1 else 1.0
        return PauliString(self.x_mask, self.z_mask, self.phase.conjugate() * sign)

    def is_self_adjoint(self) -> bool:
        return self.dagger() == self

    def to_dense(self, n_qubits: int) -> np.ndarray:
        dim = 1 << n_qubits
        if (self.x_mask | self.z_mask) >> n_qubits:
            raise ValueError("Pauli masks exceed qubit count")
        idx = np.arange(dim, dtype=np.uint64)
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(self.z_mask)) & 1)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[idx ^ np.uint64(self.x_mask), idx] = self.phase * signs
        return mat


def _canonicalize(raw: Iterable[tuple[int, int, complex]]) -> tuple[tuple[int, int, complex], ...]:
    merged: dict[tuple[int, int], complex] = {}
    for x, z, coeff in raw:
        key = (x, z)
        merged[key] = merged.get(key, 0.0 + 0.0j) + coeff
    out = [
        (x, z, coeff)
        for (x, z), coeff in sorted(merged.items())
        if abs(coeff) > COEFF_PRUNE_TOL
    ]
    return tuple(out)


class PauliSum:
    """A canonicalized linear combination of Pauli strings.

    Internally every string is stored with its canonical self-adjoint phase
    ``i^popcount(x & z)``; any input phase is folded into the coefficient.
    Terms are merged by mask pair, sorted, and pruned below ``1e-14``.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[complex, PauliString]] = ()):
        raw = []
        for coeff, string in terms:
            k = _phase_power(string.phase)
            k0 = (string.x_mask & string.z_mask).bit_count() & 3
            raw.append((string.x_mask, string.z_mask, complex(coeff) * _PHASES[(k - k0) % 4]))
        self._terms = _canonicalize(raw)

    @classmethod
    def _from_canonical(cls, raw: Iterable[tuple[int, int, complex]]) -> "PauliSum":
        obj = cls.__new__(cls)
        obj._terms = _canonicalize(raw)
        return obj

    @classmethod
    def zero(cls) -> "PauliSum":
        return cls._from_canonical(())

    @classmethod
    def identity(cls, coeff: complex = 1.0) -> "PauliSum":
        return cls._from_canonical([(0, 0, complex(coeff))])

    @property
    def terms(self) -> tuple[tuple[complex, PauliString], ...]:
        return tuple(
            (coeff, PauliString.canonical(x, z)) for x, z, coeff in self._terms
        )

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        return PauliSum._from_canonical(list(self._terms) + list(other._terms))

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "PauliSum":
        return PauliSum._from_canonical(
            (x, z, complex(scalar) * c) for x, z, c in self._terms
        )

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.__rmul__(other)
        if not isinstance(other, PauliSum):
            return NotImplemented
        raw = []
        for x1, z1, c1 in self._terms:
            k1 = (x1 & z1).bit_count()
            for x2, z2, c2 in other._terms:
                k2 = (x2 & z2).bit_count()
                x = x1 ^ x2
                z = z1 ^ z2
                k12 = (x & z).bit_count()
                power = (k1 + k2 - k12) % 4
                sign = -1.0 if (z1 & x2).bit_count() & 1 else 1.0
                raw.append((x, z, c1 * c2 * sign * _PHASES[power]))
        return PauliSum._from_canonical(raw)

    def dagger(self) -> "PauliSum":
        return PauliSum._from_canonical(
            (x, z, c.conjugate()) for x, z, c in self._terms
        )

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(c.imag) <= tol for _, _, c in self._terms)

    def max_qubit(self) -> int:
        """Highest qubit index touched (-1 for a pure scalar)."""
        mask = 0
        for x, z, _ in self._terms:
            mask |= x | z
        return mask.bit_length() - 1

    def to_dense(self, n_qubits: int) -> np.ndarray:
        dim = 1 << n_qubits
        idx = np.arange(dim, dtype=np.uint64)
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for x, z, coeff in self._terms:
            if (x | z) >> n_qubits:
                raise ValueError("Pauli masks exceed qubit count")
            phase = PauliString.canonical_phase(x, z)
            signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z)) & 1)
            mat[idx ^ np.uint64(x), idx] += (coeff * phase) * signs
        return mat

    def apply(self, data: np.ndarray, backend=None) -> np.ndarray:
        """Return (this operator) @ data for a 2^n amplitude array."""
        ker = backend if backend is not None else kernels.get_backend()
        data = np.ascontiguousarray(data, dtype=np.complex128)
        size = data.size
        out = np.zeros(size, dtype=np.complex128)
        for x, z, coeff in self._terms:
            if (x | z) >= size:
                raise ValueError("Pauli masks exceed state size")
            ker.pauli_accumulate(out, data, x, z, coeff)
        return out


@dataclass
class Statevector:
    """Dense amplitudes over the full qubit register."""

    n_qubits: int
    data: np.ndarray

    def __post_init__(self) -> None:
        if not 0 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"qubit count {self.n_qubits} outside [0, {MAX_QUBITS}]")
        self.data = np.ascontiguousarray(self.data, dtype=np.complex128)
        if self.data.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"amplitude array has shape {self.data.shape}, expected {(1 << self.n_qubits,)}"
            )

    @classmethod
    def zero(cls, n_qubits: int) -> "Statevector":
        return cls.basis(n_qubits, 0)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "Statevector":
        if not 0 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [0, {MAX_QUBITS}], got {n_qubits}")
        if not 0 <= index < (1 << n_qubits):
            raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
        data = np.zeros(1 << n_qubits, dtype=np.complex128)
        data[index] = 1.0
        return cls(n_qubits, data)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def normalized(self) -> "Statevector":
        return Statevector(self.n_qubits, self.data / self.norm)

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.data.copy())

    def inner(self, other: "Statevector") -> complex:
        return complex(np.vdot(self.data, other.data))


def _as_data(state) -> tuple[np.ndarray, bool]:
    if isinstance(state, Statevector):
        return state.data, True
    return np.ascontiguousarray(state, dtype=np.complex128), False


def _wrap_like(state, data: np.ndarray):
    if isinstance(state, Statevector):
        return Statevector(state.n_qubits, data)
    return data


# ---------------------------------------------------------------------------
# Fermion-to-qubit mapping
# ---------------------------------------------------------------------------


def jw_annihilation(mode: int) -> PauliSum:
    """Qubit image of ``a_mode``: parity string times the lowering operator."""
    if mode < 0:
        raise ValueError("mode must be non-negative")
    bit = 1 << mode
    low = bit - 1
    return PauliSum(
        [
            (0.5, PauliString(bit, low, 1.0)),
            (0.5j, PauliString(bit, low | bit, 1.0j)),
        ]
    )


def jw_creation(mode: int) -> PauliSum:
    return jw_annihilation(mode).dagger()


def jw_map(
    coeff: complex,
    ops: Sequence[tuple[int, bool]],
    n_qubits: int,
) -> PauliSum:
    """Map ``coeff * prod_j op_j`` to a PauliSum.

    ``ops`` lists the second-quantized factors left to right as written;
    each entry is ``(mode, is_creation)``.
    """
    for mode, _ in ops:
        if not 0 <= mode < n_qubits:
            raise ValueError(f"mode {mode} out of range for {n_qubits} qubits")
    result = PauliSum.identity(coeff)
    for mode, is_creation in ops:
        factor = jw_creation(mode) if is_creation else jw_annihilation(mode)
        result = result * factor
    return result


def excitation_pauli_sum(
    cre_modes: Sequence[int], ann_modes: Sequence[int], n_qubits: int
) -> PauliSum:
    """Qubit image of ``tau - tau+`` where
    ``tau = a+_{cre[0]} ... a+_{cre[-1]} a_{ann[0]} ... a_{ann[-1]}``."""
    ops = [(m, True) for m in cre_modes] + [(m, False) for m in ann_modes]
    tau = jw_map(1.0, ops, n_qubits)
    return tau - tau.dagger()


def jw_hamiltonian(ints: IntegralSet, space: "QubitSpace") -> PauliSum:
    """Full electronic Hamiltonian as a PauliSum on the space's register.

    Intended for small cross-checks (the term count grows as n_orb^4); large
    systems use ``MappedHamiltonian`` instead.
    """
    n = ints.n_orb
    if space.n_orb != n:
        raise ValueError("integral and qubit-space orbital counts differ")
    nq = space.n_qubits
    qom = space.qubit_of_mode
    raw: list[tuple[int, int, complex]] = list(
        PauliSum.identity(ints.e_core)._terms
    )

    def mode(p: int, spin: int) -> int:
        return int(qom[p + spin * n])

    for spin in (0, 1):
        for p in range(n):
            for q in range(n):
                hpq = ints.h[p, q]
                if abs(hpq) <= COEFF_PRUNE_TOL:
                    continue
                term = jw_map(hpq, [(mode(p, spin), True), (mode(q, spin), False)], nq)
                raw.extend(term._terms)
    for spin1 in (0, 1):
        for spin2 in (0, 1):
            for p in range(n):
                for q in range(n):
                    for r in range(n):
                        for s in range(n):
                            gval = ints.g[p, q, r, s]
                            if abs(gval) <= COEFF_PRUNE_TOL:
                                continue
                            ops = [
                                (mode(p, spin1), True),
                                (mode(r, spin2), True),
                                (mode(s, spin2), False),
                                (mode(q, spin1), False),
                            ]
                            term = jw_map(0.5 * gval, ops, nq)
                            raw.extend(term._terms)
    return PauliSum._from_canonical(raw)


# ---------------------------------------------------------------------------
# Statevector operations
# ---------------------------------------------------------------------------


def apply_pauli_exp(state, pauli: PauliString, theta: float, backend=None):
    """Return ``exp(i * theta * P) |state>`` for a self-adjoint PauliString."""
    canonical = PauliString.canonical_phase(pauli.x_mask, pauli.z_mask)
    ratio = pauli.phase / canonical
    if abs(ratio.imag) > 1e-12 or abs(abs(ratio.real) - 1.0) > 1e-12:
        raise ValueError(
            "apply_pauli_exp requires a self-adjoint PauliString "
            f"(phase must be +/- {canonical!r}, got {pauli.phase!r})"
        )
    sign = 1.0 if ratio.real > 0 else -1.0
    data, _ = _as_data(state)
    out = data.copy()
    ker = backend if backend is not None else kernels.get_backend()
    if (pauli.x_mask | pauli.z_mask) >= out.size and (pauli.x_mask | pauli.z_mask) != 0:
        raise ValueError("Pauli masks exceed state size")
    ker.pauli_rotation(out, pauli.x_mask, pauli.z_mask, sign * theta)
    return _wrap_like(state, out)


def _generator_modes(generator) -> tuple[tuple[int, ...], tuple[int, ...]]:
    create = getattr(generator, "create_modes", None)
    annihilate = getattr(generator, "annihilate_modes", None)
    if create is not None and annihilate is not None:
        return tuple(create), tuple(annihilate)
    cre, ann = generator
    return tuple(cre), tuple(ann)


def apply_excitation_operator(state, generator, space: "QubitSpace | None" = None):
    """Return ``(tau - tau+) |state>`` (linear, not unitary).

    ``generator`` is either an object exposing ``create_modes`` /
    ``annihilate_modes`` or a plain ``(cre_modes, ann_modes)`` pair.  Modes
    are spin-orbital labels; when ``space`` is given they are translated
    through its mode-to-qubit table, otherwise they are used as qubit
    indices directly.
    """
    cre, ann = _generator_modes(generator)
    if space is not None:
        cre = tuple(int(space.qubit_of_mode[m]) for m in cre)
        ann = tuple(int(space.qubit_of_mode[m]) for m in ann)
    data, _ = _as_data(state)
    n_qubits = data.size.bit_length() - 1
    op = excitation_pauli_sum(cre, ann, n_qubits)
    return _wrap_like(state, op.apply(data))


def expectation(state, observable, space: "QubitSpace | None" = None, backend=None) -> float:
    """``<state| observable |state>`` as a real number.

    ``observable`` may be a PauliSum, a MappedHamiltonian, or an IntegralSet
    (the latter requires ``space`` and is evaluated by fermionic sector
    action in the qubit basis, e_core included).  An imaginary residue above
    1e-8 raises HermiticityError; smaller residues are discarded.
    """
    data, _ = _as_data(state)
    if isinstance(observable, PauliSum):
        out = observable.apply(data, backend=backend)
    elif isinstance(observable, MappedHamiltonian):
        out = observable.apply(data)
    elif isinstance(observable, IntegralSet):
        if space is None:
            raise ValueError("IntegralSet expectation requires a QubitSpace")
        out = MappedHamiltonian(observable, space).apply(data)
    else:
        raise TypeError(f"unsupported observable type {type(observable).__name__}")
    value = complex(np.vdot(data, out))
    if abs(value.imag) > 1e-8:
        raise HermiticityError(
            f"expectation value has imaginary part {value.imag:.3e}"
        )
    return value.real


# ---------------------------------------------------------------------------
# Compiled excitation operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompiledExcitation:
    """Mask form of ``tau - tau+`` for the fused statevector kernels.

    For ``tau = a+_{c0} a+_{c1} a_{a0} a_{a1}`` (qubit-register modes), a
    basis state ``b`` is in tau's domain iff it has every annihilated mode
    occupied and, after removing them, every created mode empty.  The image
    index is ``b ^ flip_mask`` and the amplitude is
    ``base_sign * (-1)^popcount(b & parity_mask)``.
    """

    cre_modes: tuple[int, ...]
    ann_modes: tuple[int, ...]
    ann_mask: int
    cre_mask: int
    flip_mask: int
    parity_mask: int
    base_sign: int

    def rotate(self, data: np.ndarray, theta: float, backend=None) -> None:
        """In place: ``data <- exp(theta * (tau - tau+)) data``."""
        ker = backend if backend is not None else kernels.get_backend()
        ker.excitation_rotation(
            data,
            self.ann_mask,
            self.cre_mask,
            self.flip_mask,
            self.parity_mask,
            self.base_sign,
            theta,
        )

    def accumulate(self, out: np.ndarray, data: np.ndarray, coeff: float, backend=None) -> None:
        """``out += coeff * (tau - tau+) data``."""
        ker = backend if backend is not None else kernels.get_backend()
        ker.excitation_accumulate(
            out,
            data,
            self.ann_mask,
            self.cre_mask,
            self.flip_mask,
            self.parity_mask,
            self.base_sign,
            coeff,
        )


def compile_excitation(
    cre_modes: Sequence[int], ann_modes: Sequence[int]
) -> CompiledExcitation:
    """Compile ``tau = a+_{cre...} a_{ann...}`` into mask form.

    The fermionic sign of tau on ``|b>`` factorizes as
    ``base_sign * (-1)^popcount(b & parity_mask)``: each factor in the
    acting order (rightmost first) contributes the occupation parity below
    its mode, evaluated on the partially-updated string; the b-independent
    part of that parity accumulates into ``base_sign``.
    """
    cre = tuple(int(m) for m in cre_modes)
    ann = tuple(int(m) for m in ann_modes)
    if len(set(cre)) != len(cre) or len(set(ann)) != len(ann):
        raise ValueError("duplicate mode within creation or annihilation list")
    if any(m < 0 for m in cre + ann):
        raise ValueError("modes must be non-negative")
    ann_mask = 0
    for m in ann:
        ann_mask |= 1 << m
    cre_mask = 0
    for m in cre:
        cre_mask |= 1 << m
    flip_mask = ann_mask ^ cre_mask
    if flip_mask == 0:
        raise ValueError("tau is diagonal; tau - tau+ vanishes")
    acting_order = list(reversed(list(cre) + list(ann)))
    parity_mask = 0
    prefix = 0
    c_exponent = 0
    for m in acting_order:
        low = (1 << m) - 1
        parity_mask ^= low
        c_exponent ^= (prefix & low).bit_count() & 1
        prefix ^= 1 << m
    base_sign = -1 if c_exponent else 1
    return CompiledExcitation(
        cre_modes=cre,
        ann_modes=ann,
        ann_mask=ann_mask,
        cre_mask=cre_mask,
        flip_mask=flip_mask,
        parity_mask=parity_mask,
        base_sign=base_sign,
    )


def excitation_rotation_terms(
    cre_modes: Sequence[int], ann_modes: Sequence[int], n_qubits: int
) -> tuple[tuple[int, int, float], ...]:
    """Decompose ``exp(theta*(tau - tau+))`` into Pauli rotations.

    Returns ``(x, z, g)`` triples: the exponential equals the product of
    ``exp(i * theta * g * P_c(x, z))`` over the (mutually commuting) triples.
    """
    op = excitation_pauli_sum(cre_modes, ann_modes, n_qubits)
    out = []
    for x, z, coeff in op._terms:
        if abs(coeff.real) > 1e-12:
            raise ValueError("excitation generator is not anti-Hermitian")
        out.append((x, z, float(coeff.imag)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Fock-sector <-> qubit-register maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorMap:
    """Signed embedding of one (n_alpha, n_beta) determinant sector.

    ``indices[ia, ib]`` is the register basis index of determinant
    ``(alpha string ia, beta string ib)``; ``signs`` carries the fermionic
    reordering phase between the mode-ordered determinant and the
    ascending-qubit-ordered register state.
    """

    sector: Sector
    indices: np.ndarray
    signs: np.ndarray


class QubitSpace:
    """Mode-to-qubit layout for a fragment partition.

    Fock modes are alpha spin orbitals ``0..n-1`` then beta ``n..2n-1``
    (spatial index ascending).  Qubits are fragment-major: fragment 0's
    alpha block, fragment 0's beta block, fragment 1's alpha block, ...
    """

    def __init__(self, layout: FragmentLayout):
        self.layout = layout
        self.n_orb = layout.n_orb
        self.n_qubits = 2 * self.n_orb
        if self.n_qubits > MAX_QUBITS:
            raise ValueError(
                f"{self.n_qubits} qubits exceed the supported maximum {MAX_QUBITS}"
            )
        qom = np.empty(self.n_qubits, dtype=np.int64)
        q = 0
        for fragment in layout.fragments:
            for p in fragment.orbitals:
                qom[p] = q
                q += 1
            for p in fragment.orbitals:
                qom[self.n_orb + p] = q
                q += 1
        self.qubit_of_mode = qom
        self.qubit_of_mode.setflags(write=False)
        self.mode_of_qubit = np.argsort(qom)
        self.mode_of_qubit.setflags(write=False)
        self.alpha_mask = 0
        for p in range(self.n_orb):
            self.alpha_mask |= 1 << int(qom[p])
        self.beta_mask = ((1 << self.n_qubits) - 1) ^ self.alpha_mask
        self._sector_maps: dict[tuple[int, int], SectorMap] = {}

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def sector(self, n_alpha: int, n_beta: int) -> Sector:
        return Sector(self.n_orb, n_alpha, n_beta)

    def sector_map(self, sector: Sector) -> SectorMap:
        key = (sector.n_alpha, sector.n_beta)
        cached = self._sector_maps.get(key)
        if cached is not None:
            return cached
        n = self.n_orb
        if sector.n_orb != n:
            raise ValueError("sector orbital count does not match layout")
        alpha = get_string_space(n, sector.n_alpha)
        beta = get_string_space(n, sector.n_beta)
        qom = self.qubit_of_mode
        qa = qom[:n]
        qb = qom[n:]

        occ_a = alpha.occupations
        occ_b = beta.occupations
        bits_a = (occ_a.astype(np.uint64) * (np.uint64(1) << qa.astype(np.uint64))).sum(axis=1)
        bits_b = (occ_b.astype(np.uint64) * (np.uint64(1) << qb.astype(np.uint64))).sum(axis=1)

        # Inversions within each spin's creation sequence (modes ascending,
        # qubit labels possibly not monotone across fragments).
        inv_pairs_a = np.triu((qa[:, None] > qa[None, :]).astype(np.float64), k=1)
        inv_pairs_b = np.triu((qb[:, None] > qb[None, :]).astype(np.float64), k=1)
        intra_a = np.einsum("ip,pq,iq->i", occ_a, inv_pairs_a, occ_a)
        intra_b = np.einsum("ip,pq,iq->i", occ_b, inv_pairs_b, occ_b)

        # Cross inversions: alpha entries precede beta entries in mode order.
        cross_pairs = (qa[:, None] > qb[None, :]).astype(np.float64)
        cross = occ_a @ cross_pairs @ occ_b.T

        total = intra_a[:, None] + intra_b[None, :] + cross
        signs = 1.0 - 2.0 * (np.rint(total).astype(np.int64) & 1)
        indices = bits_a[:, None] | bits_b[None, :]
        sector_map = SectorMap(sector=sector, indices=indices, signs=signs)
        self._sector_maps[key] = sector_map
        return sector_map

    def gather(self, data: np.ndarray, sector: Sector) -> np.ndarray:
        """Extract a sector's CI coefficients (fock determinant convention)."""
        sm = self.sector_map(sector)
        return sm.signs * data[sm.indices]

    def scatter(
        self, coeffs: np.ndarray, sector: Sector, out: np.ndarray | None = None
    ) -> np.ndarray:
        """Embed sector CI coefficients into a full register amplitude array."""
        sm = self.sector_map(sector)
        if out is None:
            out = np.zeros(self.dim, dtype=np.complex128)
        out[sm.indices] += sm.signs * np.asarray(coeffs)
        return out

    def scatter_civector(self, ci: CIVector, out: np.ndarray | None = None) -> np.ndarray:
        return self.scatter(ci.coeffs, ci.sector, out=out)

    def sector_weights(self, data: np.ndarray) -> dict[tuple[int, int], float]:
        """Squared norm of the state in each particle-number sector."""
        idx = np.arange(self.dim, dtype=np.uint64)
        na = np.bitwise_count(idx & np.uint64(self.alpha_mask))
        nb = np.bitwise_count(idx & np.uint64(self.beta_mask))
        weights: dict[tuple[int, int], float] = {}
        prob = np.abs(np.asarray(data)) ** 2
        for a in range(self.n_orb + 1):
            sel_a = na == a
            for b in range(self.n_orb + 1):
                w = float(prob[sel_a & (nb == b)].sum())
                if w > 0.0:
                    weights[(a, b)] = w
        return weights


class MappedHamiltonian:
    """The electronic Hamiltonian acting on the full qubit register.

    Applies sector by sector through the signed maps of a QubitSpace; each
    touched sector uses a cached sparse matrix (small sectors) or the
    streaming matrix-free product (large ones).  e_core is included.
    """

    SPARSE_DIM_LIMIT = 200_000
    WEIGHT_CUTOFF = 1e-28

    def __init__(self, ints: IntegralSet, space: QubitSpace, sparse_dim_limit: int | None = None):
        if ints.n_orb != space.n_orb:
            raise ValueError("integral and qubit-space orbital counts differ")
        self.ints = ints
        self.space = space
        self.sparse_dim_limit = (
            self.SPARSE_DIM_LIMIT if sparse_dim_limit is None else sparse_dim_limit
        )
        self._sector_matrices: dict[tuple[int, int], object] = {}

    def _sector_apply(self, sector: Sector, coeffs: np.ndarray) -> np.ndarray:
        if sector.dim <= self.sparse_dim_limit:
            key = (sector.n_alpha, sector.n_beta)
            mat = self._sector_matrices.get(key)
            if mat is None:
                mat = build_sector_hamiltonian(self.ints, sector)
                self._sector_matrices[key] = mat
            return (mat @ coeffs.reshape(-1)).reshape(coeffs.shape)
        return apply_hamiltonian(self.ints, sector, coeffs)

    def apply(self, data: np.ndarray) -> np.ndarray:
        data = np.ascontiguousarray(data, dtype=np.complex128)
        if data.shape != (self.space.dim,):
            raise ValueError(
                f"state has shape {data.shape}, expected {(self.space.dim,)}"
            )
        out = np.zeros_like(data)
        n = self.space.n_orb
        for na in range(n + 1):
            for nb in range(n + 1):
                sector = Sector(n, na, nb)
                coeffs = self.space.gather(data, sector)
                weight = float(np.vdot(coeffs, coeffs).real)
                if weight <= self.WEIGHT_CUTOFF:
                    continue
                self.space.scatter(self._sector_apply(sector, coeffs), sector, out=out)
        return out

    def expectation(self, data) -> float:
        arr, _ = _as_data(data)
        value = complex(np.vdot(arr, self.apply(arr)))
        if abs(value.imag) > 1e-8:
            raise HermiticityError(
                f"expectation value has imaginary part {value.imag:.3e}"
            )
        return value.real
