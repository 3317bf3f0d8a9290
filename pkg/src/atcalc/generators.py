"""Seeded random instances: trees, DAGs, anchorings, surjections, values."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .operad import Surjection
from .tree import AttackTree, Gate

__all__ = [
    "random_treelike",
    "random_dag",
    "random_dat",
    "random_adt",
    "random_anchoring",
    "random_surjection",
    "random_permutation",
]


def _finish(gates, children, rng: random.Random, shuffle_anchors: bool, names=None, colors=None) -> AttackTree:
    bas = [v for v, g in enumerate(gates) if g is Gate.BAS]
    if shuffle_anchors:
        rng.shuffle(bas)
    if names is None:
        names = [None] * len(gates)
        for i, v in enumerate(sorted(u for u, g in enumerate(gates) if g is Gate.BAS)):
            names[v] = f"b{i + 1}"
        k = 0
        for v, g in enumerate(gates):
            if g is not Gate.BAS:
                names[v] = f"g{k}"
                k += 1
    return AttackTree(tuple(gates), tuple(tuple(c) for c in children), tuple(bas), tuple(names), colors)


def random_treelike(
    rng: random.Random,
    n_bas: int,
    gate_types: Sequence[Gate] = (Gate.OR, Gate.AND),
    max_fanin: int = 3,
    shuffle_anchors: bool = True,
) -> AttackTree:
    """A tree (every non-root node has one parent edge) with ``n_bas`` BASs."""
    gates = [Gate.BAS] * n_bas
    children = [[] for _ in range(n_bas)]
    pool = list(range(n_bas))
    while len(pool) > 1:
        k = rng.randint(2, min(max_fanin, len(pool)))
        rng.shuffle(pool)
        kids, pool = pool[:k], pool[k:]
        gates.append(rng.choice(gate_types))
        children.append(kids)
        pool.append(len(gates) - 1)
    return _finish(gates, children, rng, shuffle_anchors)


def random_dag(
    rng: random.Random,
    max_nodes: int = 12,
    max_bas: int = 6,
    gate_types: Sequence[Gate] = (Gate.OR, Gate.AND),
    max_fanin: int = 3,
    parallel: float = 0.15,
    shuffle_anchors: bool = True,
) -> AttackTree:
    """A rooted DAG with shared nodes and occasional parallel edges.

    Nodes are created in topological order (BASs first); the last gate is
    the root and every other parentless node is hung under a later gate.
    """
    n_bas = rng.randint(1, max_bas)
    n_gates = rng.randint(1, max(1, max_nodes - n_bas))
    gates = [Gate.BAS] * n_bas + [rng.choice(gate_types) for _ in range(n_gates)]
    children = [[] for _ in gates]
    for v in range(n_bas, len(gates)):
        k = rng.randint(1, max_fanin)
        kids = rng.sample(range(v), min(k, v))
        if rng.random() < parallel:
            kids.append(rng.choice(kids))
        children[v] = kids
    root = len(gates) - 1
    has_parent = {c for ch in children for c in ch}
    for v in range(len(gates) - 1):
        if v not in has_parent:
            p = rng.randint(max(v + 1, n_bas), root)
            children[p].append(v)
    return _finish(gates, children, rng, shuffle_anchors)


def random_dat(rng: random.Random, max_nodes: int = 12, max_bas: int = 5) -> AttackTree:
    return random_dag(rng, max_nodes, max_bas, (Gate.OR, Gate.AND, Gate.SAND))


def random_adt(rng: random.Random, max_depth: int = 4, root_color: str = "p") -> AttackTree:
    """A treelike attack-defense tree with valid coloring."""
    gates, children, colors = [], [], []

    def gen(color, depth):
        v = len(gates)
        gates.append(None)
        children.append([])
        colors.append(color)
        r = rng.random()
        if depth >= max_depth or r < 0.3:
            gates[v] = Gate.BAS
        elif r < 0.5:
            gates[v] = Gate.C
            other = "o" if color == "p" else "p"
            children[v] = [gen(color, depth + 1), gen(other, depth + 1)]
        else:
            gates[v] = rng.choice((Gate.OR, Gate.AND))
            children[v] = [gen(color, depth + 1) for _ in range(rng.randint(1, 3))]
        return v

    gen(root_color, 0)
    return _finish(gates, children, rng, True, colors=tuple(colors))


def random_anchoring(rng: random.Random, tree: AttackTree) -> AttackTree:
    anchors = list(tree.anchors)
    rng.shuffle(anchors)
    return tree.with_anchors(anchors)


def random_permutation(rng: random.Random, n: int) -> Surjection:
    images = list(range(n))
    rng.shuffle(images)
    return Surjection(tuple(images), n)


def random_surjection(rng: random.Random, n: int, m: Optional[int] = None) -> Surjection:
    """A uniform-ish surjection ``[n] -> [m]`` (``m`` random when omitted)."""
    if m is None:
        m = rng.randint(1, n)
    images = list(range(m)) + [rng.randrange(m) for _ in range(n - m)]
    rng.shuffle(images)
    return Surjection(tuple(images), m)
