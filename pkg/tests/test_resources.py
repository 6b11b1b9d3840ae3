"""Gate-count cost model: per-excitation constants and the table math."""

import pytest

from lasuscc.resources import (
    CNOT_PER_DOUBLE,
    CNOT_PER_SINGLE,
    SQG_PER_DOUBLE,
    SQG_PER_SINGLE,
    estimate,
    percent_cnot,
    split_from_gate_counts,
)


def test_per_excitation_constants():
    # SQG = (4n+1) 2^(2n-1) and CNOT = (2n-1) 2^(2n) at ranks 1 and 2.
    for n, sqg, cnot in [
        (1, SQG_PER_SINGLE, CNOT_PER_SINGLE),
        (2, SQG_PER_DOUBLE, CNOT_PER_DOUBLE),
    ]:
        assert sqg == (4 * n + 1) * 2 ** (2 * n - 1)
        assert cnot == (2 * n - 1) * 2 ** (2 * n)


def test_estimate_accepts_counts_pair():
    gates = estimate((8, 138))
    assert gates.n_sqg == 8 * 10 + 138 * 72
    assert gates.n_cnot == 8 * 4 + 138 * 48


def test_estimate_h4_full_ansatz_totals():
    gates = estimate((8, 138))
    assert (gates.n_cnot, gates.n_sqg) == (6656, 10016)


def test_estimate_h8_full_ansatz_totals():
    gates = estimate((48, 2748))
    assert (gates.n_cnot, gates.n_sqg) == (132096, 198336)


def test_estimate_from_generator_objects(h4_screened):
    gates = estimate(h4_screened.generators)
    assert gates.n_singles == 8
    assert gates.n_doubles == 138
    assert gates == estimate((8, 138))


def test_estimate_rejects_unknown_kind():
    class Fake:
        kind = "triple"

    with pytest.raises(ValueError):
        estimate([Fake()])


def test_split_round_trips():
    for s, d in [(0, 0), (8, 138), (48, 2748), (7, 0), (0, 19)]:
        gates = estimate((s, d))
        assert split_from_gate_counts(gates.n_sqg, gates.n_cnot) == (s, d)


def test_split_rejects_non_integer_mix():
    with pytest.raises(ValueError):
        split_from_gate_counts(11, 4)


def test_split_rejects_negative_solution():
    # Totals that solve the 2x2 system only with a negative double count.
    gates_s = estimate((100, 0))
    with pytest.raises(ValueError):
        split_from_gate_counts(gates_s.n_sqg + 72 * 2, gates_s.n_cnot)


def test_percent_cnot_reference_rows():
    # Published resource table: selected-vs-full CNOT percentages.
    assert percent_cnot(estimate((4, 19)), estimate((8, 138))) == 13.94
    assert percent_cnot(estimate((20, 378)), estimate((48, 2748))) == 13.80
    assert percent_cnot(estimate((16, 272)), estimate((32, 2472))) == 11.05
    assert percent_cnot(estimate((2, 10)), estimate((18, 756))) == 1.34
    assert percent_cnot(estimate((10, 67)), estimate((18, 756))) == 8.95


def test_percent_cnot_degenerate_full():
    with pytest.raises(ZeroDivisionError):
        percent_cnot(estimate((0, 0)), estimate((0, 0)))
