import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atcalc.extensions import (
    ADT_MINCOST,
    MIN_TIME_SOURCES,
    MINTIME,
    AttributeDomain,
    adt_bottom_up,
    adt_compose,
    dat_bottom_up,
    dat_compose,
    validate_adt,
    validate_dat,
)
from atcalc.canon import canonical_form
from atcalc.generators import random_adt, random_dag, random_dat
from atcalc.metrics import MINCOST, eval_bottom_up_semiring
from atcalc.operad import identity, star
from atcalc.tree import AttackTree, Gate, InvalidTreeError, term

seeds = st.integers(0, 2**32 - 1)
INF = math.inf


def parallel_then_c():
    return term("SAND(AND(a, b), c)")


def counter_tree():
    # root OR(C(a, C(b, c)), d); b is the defender's
    gates = ("OR", "C", "BAS", "C", "BAS", "BAS", "BAS")
    children = ((1, 6), (2, 3), (), (4, 5), (), (), ())
    colors = ("p", "p", "p", "o", "o", "p", "p")
    names = ("root", "ca", "a", "cb", "b", "c", "d")
    return AttackTree(gates, children, (2, 4, 5, 6), names, colors)


def test_validators_accept_examples():
    assert validate_dat(parallel_then_c()) == []
    assert validate_adt(counter_tree()) == []


def test_adt_mixed_colors_rejected():
    t = AttackTree(("OR", "BAS", "BAS"), ((1, 2), (), ()), colors=("p", "p", "o"))
    assert [v.kind for v in validate_adt(t)] == ["color"]
    bad_c = AttackTree(("C", "BAS", "BAS"), ((1, 2), (), ()), colors=("p", "o", "o"))
    assert [v.kind for v in validate_adt(bad_c)] == ["counter"]
    assert validate_adt(AttackTree(("OR", "BAS"), ((1,), ()))) != []


def test_mintime_laws():
    assert MINTIME.check_laws(500) == []


def test_parallel_then_sequential_time():
    rng = random.Random(0)
    for _ in range(100):
        ta, tb, tc = (rng.uniform(0, 100) for _ in range(3))
        assert dat_bottom_up(parallel_then_c(), MINTIME, [ta, tb, tc]) == max(ta, tb) + tc


def test_min_time_of_repeated_and_mixed_sequences():
    t1 = term("SAND(a, a)")
    t2 = term("OR(SAND(b, c), AND(b, c))")
    rng = random.Random(1)
    for _ in range(20):
        ta, tb, tc = (rng.uniform(0, 50) for _ in range(3))
        assert dat_bottom_up(t1, MINTIME, [ta]) == 2 * ta
        assert dat_bottom_up(t2, MINTIME, [tb, tc]) == max(tb, tc)
    assert [k for k, v in MIN_TIME_SOURCES.items() if v] == ["bottom-up"]


def test_single_bas():
    assert dat_bottom_up(identity(), MINTIME, [4]) == 4
    assert adt_bottom_up(identity("p"), ADT_MINCOST, [4]) == 4


def test_sand_order_is_respected():
    # a non-commutative lozenge shows the order: string concatenation
    from atcalc.extensions import DynamicSemiring
    from atcalc.metrics import Semiring

    concat = DynamicSemiring(Semiring("s", min, max), lambda a, b: a + b, "")
    t = AttackTree(("SAND", "BAS", "BAS", "BAS"), ((3, 1, 2), (), (), ()), (1, 2, 3))
    assert dat_bottom_up(t, concat, ["x", "y", "z"]) == "zxy"


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_lozenge_equal_to_triangle_collapses(seed):
    from atcalc.extensions import DynamicSemiring

    rng = random.Random(seed)
    t = random_dat(rng)
    d = DynamicSemiring(MINCOST, MINCOST.triangle, 0)
    plain = AttackTree([Gate.AND if g is Gate.SAND else g for g in t.gates], t.children, t.anchors)
    x = [rng.randint(0, 50) for _ in range(t.n)]
    assert dat_bottom_up(t, d, x) == eval_bottom_up_semiring(plain, MINCOST, x)


def test_counter_tree_value():
    assert adt_bottom_up(counter_tree(), ADT_MINCOST, [5, None, 2, 8]) == 7
    assert adt_bottom_up(counter_tree(), ADT_MINCOST, [5, INF, 2, 8]) == 7
    # a cheap c no longer helps once d is cheaper
    assert adt_bottom_up(counter_tree(), ADT_MINCOST, [5, None, 2, 3]) == 3


def test_adt_without_opponent_equals_semiring():
    rng = random.Random(3)
    for _ in range(50):
        t = random_dag(rng)
        t = AttackTree(t.gates, t.children, t.anchors, colors=("p",) * len(t.gates))
        x = [rng.randint(0, 50) for _ in range(t.n)]
        assert adt_bottom_up(t, ADT_MINCOST, x) == eval_bottom_up_semiring(t, MINCOST, x)


def test_adt_missing_value_needs_default():
    dom = AttributeDomain("nodefault", min, max, max, max, min, min)
    with pytest.raises(ValueError):
        adt_bottom_up(counter_tree(), dom, [5, None, 2, 8])


def test_adt_compose_colors():
    t = counter_tree()
    sub_p = AttackTree(("AND", "BAS", "BAS"), ((1, 2), (), ()), colors=("p", "p", "p"))
    out = adt_compose(t, t.anchors[0], sub_p)
    assert validate_adt(out) == []
    assert out.n == 5
    sub_o = AttackTree(("AND", "BAS", "BAS"), ((1, 2), (), ()), colors=("o", "o", "o"))
    with pytest.raises(ValueError):
        adt_compose(t, t.anchors[0], sub_o)
    assert canonical_form(adt_compose(t, t.anchors[1], identity("o"))) == canonical_form(t)


def test_dat_compose():
    t = AttackTree(("SAND", "BAS", "BAS", "BAS"), ((1, 2, 3), (), (), ()), (1, 2, 3))
    sub = term("OR(x, y)")
    out = dat_compose(t, [identity(), sub, identity()])
    assert out.gates[out.root] is Gate.SAND
    kids = out.children[out.root]
    assert len(kids) == 3 and out.gates[kids[1]] is Gate.OR
    assert canonical_form(dat_compose(identity(), [t])) == canonical_form(t)
    plain = term("AND(a, b)")
    assert dat_compose(plain, [sub, identity()]) == star(plain, [sub, identity()])
    with pytest.raises(ValueError):
        dat_compose(t, [sub])


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_modular_analysis_dat(seed):
    rng = random.Random(seed)
    f = random_dat(rng, max_nodes=6, max_bas=3)
    gs = [random_dat(rng, max_nodes=5, max_bas=3) for _ in range(f.n)]
    xs = [[rng.randint(0, 30) for _ in range(g.n)] for g in gs]
    whole = dat_bottom_up(dat_compose(f, gs), MINTIME, [v for x in xs for v in x])
    inner = [dat_bottom_up(g, MINTIME, x) for g, x in zip(gs, xs)]
    assert whole == dat_bottom_up(f, MINTIME, inner)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_modular_analysis_adt(seed):
    rng = random.Random(seed)
    t = random_adt(rng, max_depth=3)
    a = rng.choice(t.anchors)
    sub = random_adt(rng, max_depth=2, root_color=t.colors[a])
    out = adt_compose(t, a, sub)
    assert validate_adt(out) == []
    xs = [rng.randint(0, 30) for _ in range(sub.n)]
    x = [rng.randint(0, 30) for _ in range(t.n)]
    i = t.anchor_of[a]
    x_sub = list(x)
    x_sub[i] = adt_bottom_up(sub, ADT_MINCOST, xs)
    whole = adt_bottom_up(out, ADT_MINCOST, x[:i] + xs + x[i + 1 :])
    assert whole == adt_bottom_up(t, ADT_MINCOST, x_sub)


def test_invalid_dat_raises():
    with pytest.raises(InvalidTreeError):
        dat_bottom_up(AttackTree(("C", "BAS", "BAS"), ((1, 2), (), ())), MINTIME, [1, 2])
