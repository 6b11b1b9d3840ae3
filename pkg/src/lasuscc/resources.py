"""Analytic circuit-cost model for a selected ansatz.

A rank-n excitation exponential decomposes into 2^(2n-1) commuting Pauli
rotations on 2n qubits; with the usual CNOT-ladder construction that
costs SQG = (4n + 1) * 2^(2n - 1) and CNOT = (2n - 1) * 2^(2n).  Only
the rank-1 and rank-2 values appear here: a single costs 10 single-qubit
gates and 4 CNOTs, a double 72 and 48.  Generalized four-index doubles
count as rank 2 regardless of fragment membership.
"""

from __future__ import annotations

from dataclasses import dataclass

SQG_PER_SINGLE = 10
CNOT_PER_SINGLE = 4
SQG_PER_DOUBLE = 72
CNOT_PER_DOUBLE = 48


@dataclass(frozen=True)
class GateCountEstimate:
    """Gate totals plus the per-rank breakdown they came from."""

    n_singles: int
    n_doubles: int
    n_sqg: int
    n_cnot: int

    @property
    def breakdown(self) -> dict:
        return {
            "single": {
                "count": self.n_singles,
                "sqg": self.n_singles * SQG_PER_SINGLE,
                "cnot": self.n_singles * CNOT_PER_SINGLE,
            },
            "double": {
                "count": self.n_doubles,
                "sqg": self.n_doubles * SQG_PER_DOUBLE,
                "cnot": self.n_doubles * CNOT_PER_DOUBLE,
            },
        }


def estimate(selection) -> GateCountEstimate:
    """Gate counts for a selection.

    ``selection`` is either an iterable of generators (objects with a
    ``kind`` attribute) or an explicit ``(n_singles, n_doubles)`` pair.
    """
    if isinstance(selection, tuple) and len(selection) == 2 and all(
        isinstance(v, int) for v in selection
    ):
        n_singles, n_doubles = selection
    else:
        n_singles = n_doubles = 0
        for gen in selection:
            if gen.kind == "single":
                n_singles += 1
            elif gen.kind == "double":
                n_doubles += 1
            else:
                raise ValueError(f"unknown generator kind {gen.kind!r}")
    if n_singles < 0 or n_doubles < 0:
        raise ValueError("counts must be non-negative")
    return GateCountEstimate(
        n_singles=n_singles,
        n_doubles=n_doubles,
        n_sqg=n_singles * SQG_PER_SINGLE + n_doubles * SQG_PER_DOUBLE,
        n_cnot=n_singles * CNOT_PER_SINGLE + n_doubles * CNOT_PER_DOUBLE,
    )


def percent_cnot(selected: GateCountEstimate, full: GateCountEstimate) -> float:
    """CNOT fraction of the full ansatz, as a percentage to 2 decimals."""
    if full.n_cnot <= 0:
        raise ZeroDivisionError("full ansatz has no CNOT gates")
    return round(100.0 * selected.n_cnot / full.n_cnot, 2)


def split_from_gate_counts(n_sqg: int, n_cnot: int) -> tuple[int, int]:
    """Invert the cost model: recover (n_singles, n_doubles) from totals.

    The 2x2 integer system must have a unique non-negative integer
    solution; raises ValueError otherwise.
    """
    # n_sqg = 10 s + 72 d;  n_cnot = 4 s + 48 d
    det = SQG_PER_SINGLE * CNOT_PER_DOUBLE - SQG_PER_DOUBLE * CNOT_PER_SINGLE
    s_num = n_sqg * CNOT_PER_DOUBLE - SQG_PER_DOUBLE * n_cnot
    d_num = SQG_PER_SINGLE * n_cnot - n_sqg * CNOT_PER_SINGLE
    if s_num % det or d_num % det:
        raise ValueError(
            f"gate totals ({n_sqg}, {n_cnot}) are not an integer mix of "
            "single and double costs"
        )
    s, d = s_num // det, d_num // det
    if s < 0 or d < 0:
        raise ValueError(f"gate totals ({n_sqg}, {n_cnot}) imply negative counts")
    return int(s), int(d)
