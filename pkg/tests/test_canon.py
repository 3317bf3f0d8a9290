import random

from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from atcalc.canon import anchor_isomorphic, canonical_form
from atcalc.generators import random_adt, random_dag, random_dat
from atcalc.tree import AttackTree, term

seeds = st.integers(0, 2**32 - 1)


def relabel(tree, rng):
    """Same tree with node ids shuffled."""
    perm = list(range(len(tree.gates)))
    rng.shuffle(perm)
    inv = {old: new for new, old in enumerate(perm)}
    gates = [tree.gates[old] for old in perm]
    children = [[inv[c] for c in tree.children[old]] for old in perm]
    for ch, old in zip(children, perm):
        if tree.gates[old].value not in ("SAND", "C"):
            rng.shuffle(ch)
    colors = None if tree.colors is None else [tree.colors[old] for old in perm]
    return AttackTree(gates, children, [inv[a] for a in tree.anchors], None, colors)


def test_names_do_not_matter():
    a = term("OR(f, AND(b, l))")
    b = term("OR(x, AND(y, z))")
    assert canonical_form(a) == canonical_form(b)


def test_anchoring_matters():
    a = term("OR(f, AND(b, l))")
    b = a.with_anchors((a.anchors[1], a.anchors[0], a.anchors[2]))
    assert canonical_form(a) != canonical_form(b)
    assert not oracles.isomorphic(a, b)


def test_edge_multiplicity_matters():
    assert canonical_form(term("AND(a, a)")) != canonical_form(term("AND(a)"))


def test_sand_order_matters():
    a = AttackTree(("SAND", "BAS", "BAS"), ((1, 2), (), ()), (1, 2))
    b = AttackTree(("SAND", "BAS", "BAS"), ((2, 1), (), ()), (1, 2))
    assert canonical_form(a) != canonical_form(b)
    assert not oracles.isomorphic(a, b)
    c = AttackTree(("AND", "BAS", "BAS"), ((1, 2), (), ()), (1, 2))
    d = AttackTree(("AND", "BAS", "BAS"), ((2, 1), (), ()), (1, 2))
    assert canonical_form(c) == canonical_form(d)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_relabeling_preserves_canonical_form(seed):
    rng = random.Random(seed)
    t = random_dag(rng)
    assert canonical_form(t) == canonical_form(relabel(t, rng))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_relabeling_extended_trees(seed):
    rng = random.Random(seed)
    for t in (random_dat(rng), random_adt(rng)):
        assert canonical_form(t) == canonical_form(relabel(t, rng))


@settings(max_examples=300, deadline=None)
@given(seeds, seeds)
def test_agrees_with_graph_isomorphism(s1, s2):
    # small trees so that accidental isomorphism actually happens
    a = random_dag(random.Random(s1), max_nodes=5, max_bas=2)
    b = random_dag(random.Random(s2), max_nodes=5, max_bas=2)
    assert anchor_isomorphic(a, b) == oracles.isomorphic(a, b)


def test_hard_sharing_patterns():
    # two DAGs that colour refinement alone cannot tell apart
    # root AND over 4 ORs over 4 BASs, each BAS in exactly two ORs
    def build(pairs):
        gates = ["AND"] + ["OR"] * 4 + ["BAS"] * 4
        children = [(1, 2, 3, 4)] + [tuple(5 + i for i in p) for p in pairs] + [()] * 4
        return AttackTree(gates, children, (5, 6, 7, 8))

    cyc = build([(0, 1), (1, 2), (2, 3), (3, 0)])
    two = build([(0, 1), (0, 1), (2, 3), (2, 3)])
    assert anchor_isomorphic(cyc, two) == oracles.isomorphic(cyc, two) == False  # noqa: E712
    rng = random.Random(5)
    for _ in range(20):
        assert canonical_form(cyc) == canonical_form(relabel(cyc, rng))
