import math
import operator
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from atcalc.generators import random_dag
from atcalc.metrics import (
    INF,
    MAXDAMAGE,
    METRICS,
    MINCOST,
    MINSKILL,
    SAT,
    Semiring,
    builtin_semirings,
    eval_propositional_semiring,
    eval_tap,
    get_metric,
    parse_number,
    tap_direct,
)
from atcalc.tree import term

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("s", builtin_semirings(), ids=lambda s: s.name)
def test_builtin_semiring_laws(s):
    assert s.check_laws(1000) == []


def test_law_checker_rejects_bad_semiring():
    bad = Semiring("bad", min, operator.sub, INF, 0, absorbing=True)
    assert bad.check_laws(50)


def test_maxdamage_is_not_absorbing():
    assert not MAXDAMAGE.absorbing
    assert "maxdamage" in METRICS and METRICS["maxdamage"].plugin is None


def test_bank_min_cost():
    t = term("OR(f, AND(b, l))")
    assert get_metric("mincost")(t, [100, 60, 30]) == 90
    assert get_metric("minskill")(t, [100, 60, 30]) == 60
    assert get_metric("sat")(t, [False, True, True]) is True


def test_tap_of_gate_chain():
    t = term("AND(a1, OR(a2, a3))")
    assert abs(eval_tap(t, [0.7, 0.5, 0.3]) - 0.455) <= 1e-12
    assert abs(tap_direct(t, [0.7, 0.5, 0.3]) - 0.455) <= 1e-12


def test_tap_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        eval_tap(term("OR(a, b)"), [0.5, 1.5])


def test_parse_number():
    assert parse_number("inf") == math.inf
    assert parse_number("3") == 3 and isinstance(parse_number("3"), int)
    assert parse_number("2.5") == 2.5


def test_unknown_metric():
    with pytest.raises(KeyError):
        get_metric("nope")


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_tap_matches_exact_oracle(seed):
    rng = random.Random(seed)
    t = random_dag(rng, max_nodes=10, max_bas=5)
    p = [Fraction(rng.randint(0, 20), 20) for _ in range(t.n)]
    want = oracles.tap(t, p)
    pf = [float(x) for x in p]
    assert abs(eval_tap(t, pf) - float(want)) <= 1e-12
    assert abs(tap_direct(t, pf) - float(want)) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_propositional_semirings_match_oracle(seed):
    rng = random.Random(seed)
    t = random_dag(rng, max_nodes=10, max_bas=5)
    for s in (MINCOST, MINSKILL, SAT, MAXDAMAGE):
        x = [s.sample(rng) for _ in range(t.n)]
        want = oracles.semiring(t, s.nabla, s.triangle, s.one_nabla, s.one_triangle, x)
        assert eval_propositional_semiring(t, s, x) == want
