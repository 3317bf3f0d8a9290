import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from atcalc.generators import random_dag
from atcalc.tree import (
    AttackTree,
    EnumerationCapError,
    Gate,
    InvalidTreeError,
    check_valid,
    minimal_attacks,
    structure_function,
    successful_attacks,
    term,
    truth_table,
    validate,
)

seeds = st.integers(0, 2**32 - 1)


def bank():
    return term("OR(f, AND(b, l))")


def test_bank_minimal_attacks():
    t = bank()
    assert t.bas_names == ["f", "b", "l"]
    assert minimal_attacks(t) == {(1, 0, 0), (0, 1, 1)}
    assert len(successful_attacks(t)) == 5


def test_structure_function_examples():
    t = bank()
    assert structure_function(t, (0, 1, 1))
    assert not structure_function(t, (0, 1, 0))
    assert structure_function(t, (1, 0, 0))


def test_shared_bas_and_parallel_edges():
    t = term("AND(a, a)")
    assert t.n == 1 and t.edge_count == 2
    assert minimal_attacks(t) == {(1,)}


def test_from_term_shares_equal_names():
    t = term("AND(OR(a1, a2), OR(a2, a3))")
    assert t.n == 3
    assert len(t.gates) == 6


@pytest.mark.parametrize(
    "tree, kind",
    [
        (AttackTree((Gate.OR, Gate.BAS), ((1,), (0,))), "cycle"),
        (AttackTree((Gate.OR, Gate.BAS, Gate.BAS), ((1,), (), ())), "root"),
        (AttackTree((Gate.OR, Gate.BAS), ((), ())), "leaf"),
        (AttackTree((Gate.BAS, Gate.BAS), ((1,), ())), "leaf"),
        (AttackTree((Gate.OR, Gate.BAS), ((5,), ())), "edge"),
        (AttackTree((Gate.OR, Gate.BAS, Gate.BAS), ((1, 2), (), ()), (1,)), "anchoring"),
        (AttackTree((Gate.SAND, Gate.BAS), ((1,), ())), "gate"),
    ],
)
def test_validation_localizes_violations(tree, kind):
    kinds = {v.kind for v in validate(tree)}
    assert kind in kinds
    with pytest.raises(InvalidTreeError):
        check_valid(tree)


def test_valid_tree_has_no_violations():
    assert validate(bank()) == []


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_structure_function_matches_oracle(seed):
    t = random_dag(random.Random(seed), max_nodes=10, max_bas=5)
    tt = truth_table(t)
    for mask in range(1 << t.n):
        b = tuple(mask >> i & 1 for i in range(t.n))
        assert bool(tt[mask]) == oracles.sf(t, b) == structure_function(t, b)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_minimal_attacks_match_oracle(seed):
    t = random_dag(random.Random(seed), max_nodes=10, max_bas=5)
    want = {tuple(int(i in s) for i in range(t.n)) for s in oracles.minimal(t)}
    assert minimal_attacks(t) == want


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_structure_function_is_monotone(seed):
    t = random_dag(random.Random(seed), max_nodes=10, max_bas=5)
    tt = truth_table(t)
    for m in range(1 << t.n):
        for i in range(t.n):
            assert tt[m] <= tt[m | (1 << i)]


def test_enumeration_cap(monkeypatch):
    monkeypatch.setenv("ATCALC_ENUM_CAP", "3")
    t = term("OR(a, b, c, d)")
    with pytest.raises(EnumerationCapError):
        truth_table(t)
    assert truth_table(t, cap=4).sum() == 15


def test_truth_table_dtype():
    assert truth_table(bank()).dtype == np.bool_
