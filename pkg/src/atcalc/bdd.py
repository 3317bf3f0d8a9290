"""Reduced ordered BDDs of structure functions and BDD-based metric evaluation.

A :class:`Robdd` is a frozen node table.  Index 0 is the ``0`` terminal,
index 1 the ``1`` terminal, and every other entry is ``(var, lo, hi)`` with
children listed before parents.  ``var`` is a 0-based anchor index and
``order[var]`` its level (0 = top).  Tables are re-indexed by a depth-first
walk from the root, so equal functions under equal orders give identical
tables.

Building happens inside a :class:`BddManager` (unique table plus apply
cache); managers are mutable and meant for a single computation.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .tree import AttackTree, Gate, check_valid

__all__ = [
    "ZERO",
    "ONE",
    "Robdd",
    "BddManager",
    "build_robdd",
    "robdd_from_truth_table",
    "bdd_bu",
    "bdd_bu_values",
    "bdd_metric",
    "tap_plugin",
    "semiring_plugin",
    "shannon_compose",
    "delta_expand",
    "cofactors",
    "precede",
    "check_robdd",
    "order_from_sequence",
    "monotone_functions",
    "table_shannon",
    "table_delta",
    "table_precedes",
    "psi_tap",
    "psi_semiring",
    "PsiReport",
    "check_psi_conditions",
]

ZERO, ONE = 0, 1
_TERMINAL_LEVEL = 1 << 30


@dataclass(frozen=True)
class Robdd:
    nodes: tuple
    root: int
    n: int
    order: tuple

    @property
    def size(self) -> int:
        """Number of internal (decision) nodes."""
        return len(self.nodes) - 2

    def var(self, u: int) -> int:
        return self.nodes[u][0]

    def lo(self, u: int) -> int:
        return self.nodes[u][1]

    def hi(self, u: int) -> int:
        return self.nodes[u][2]

    def is_terminal(self, u: int) -> bool:
        return u < 2

    def level(self, u: int) -> int:
        return _TERMINAL_LEVEL if u < 2 else self.order[self.nodes[u][0]]

    def evaluate(self, b: Sequence) -> bool:
        u = self.root
        while u >= 2:
            var, lo, hi = self.nodes[u]
            u = hi if b[var] else lo
        return u == ONE

    def truth_table(self) -> np.ndarray:
        idx = np.arange(1 << self.n, dtype=np.int64)
        vals = [np.zeros(idx.size, dtype=bool), np.ones(idx.size, dtype=bool)]
        for var, lo, hi in self.nodes[2:]:
            bit = ((idx >> var) & 1).astype(bool)
            vals.append(np.where(bit, vals[hi], vals[lo]))
        return vals[self.root]

    def to_json(self, names: Optional[Sequence[str]] = None) -> str:
        rows = []
        for u, entry in enumerate(self.nodes):
            if u < 2:
                rows.append({"idx": u, "terminal": u})
            else:
                var, lo, hi = entry
                row = {"idx": u, "var": var + 1, "lo": lo, "hi": hi}
                if names is not None:
                    row["name"] = names[var]
                rows.append(row)
        return json.dumps({"n": self.n, "root": self.root, "order": [o for o in self.order], "nodes": rows})

    def to_dot(self, names: Optional[Sequence[str]] = None) -> str:
        """DOT text; 1-edges solid, 0-edges dashed."""
        reach = _reachable(self)
        lines = ["digraph robdd {", "  node [shape=box];"]
        for u in sorted(reach):
            if u < 2:
                lines.append(f'  n{u} [label="{u}"];')
            else:
                var = self.nodes[u][0]
                label = names[var] if names is not None else f"F{var + 1}"
                lines.append(f'  n{u} [label="{label}"];')
        for u in sorted(reach):
            if u >= 2:
                _, lo, hi = self.nodes[u]
                lines.append(f'  n{u} -> n{hi} [label="1"];')
                lines.append(f'  n{u} -> n{lo} [label="0", style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _reachable(b: Robdd) -> set:
    seen = {b.root}
    stack = [b.root]
    while stack:
        u = stack.pop()
        if u >= 2:
            for c in b.nodes[u][1:]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
    return seen


def _check_order(n: int, order: Optional[Sequence[int]]) -> tuple:
    if order is None:
        return tuple(range(n))
    order = tuple(int(o) for o in order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"variable order {order} is not a permutation of {n} levels")
    return order


def order_from_sequence(top_to_bottom: Sequence[int]) -> tuple:
    """Turn a list of variables (top first) into ``order[var] = level``."""
    if sorted(top_to_bottom) != list(range(len(top_to_bottom))):
        raise ValueError(f"variable sequence {list(top_to_bottom)} is not a permutation")
    order = [None] * len(top_to_bottom)
    for level, var in enumerate(top_to_bottom):
        order[var] = level
    return _check_order(len(order), order)


class BddManager:
    def __init__(self, n: int, order: Optional[Sequence[int]] = None):
        self.n = n
        self.order = _check_order(n, order)
        self.table: list = [None, None]
        self.unique: dict = {}
        self.cache: dict = {}

    def level(self, u: int) -> int:
        return _TERMINAL_LEVEL if u < 2 else self.order[self.table[u][0]]

    def mk(self, var: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (var, lo, hi)
        u = self.unique.get(key)
        if u is None:
            u = len(self.table)
            self.table.append(key)
            self.unique[key] = u
        return u

    def variable(self, var: int) -> int:
        return self.mk(var, ZERO, ONE)

    def _cofactors(self, u: int, level: int):
        if self.level(u) == level:
            _, lo, hi = self.table[u]
            return lo, hi
        return u, u

    def apply(self, op: str, u: int, v: int) -> int:
        """``op`` is ``"and"``, ``"or"`` or ``"diff"`` (``u ∧ ¬v``)."""
        if op == "and":
            if u == ZERO or v == ZERO:
                return ZERO
            if u == ONE:
                return v
            if v == ONE or u == v:
                return u
            if u > v:
                u, v = v, u
        elif op == "or":
            if u == ONE or v == ONE:
                return ONE
            if u == ZERO:
                return v
            if v == ZERO or u == v:
                return u
            if u > v:
                u, v = v, u
        elif op == "diff":
            if u == ZERO or v == ONE or u == v:
                return ZERO
            if v == ZERO:
                return u
            if u == ONE:
                return self._neg(v)
        else:
            raise ValueError(f"unknown operation {op!r}")
        key = (op, u, v)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        top = min(self.level(u), self.level(v))
        var = self.table[u][0] if self.level(u) == top else self.table[v][0]
        u0, u1 = self._cofactors(u, top)
        v0, v1 = self._cofactors(v, top)
        res = self.mk(var, self.apply(op, u0, v0), self.apply(op, u1, v1))
        self.cache[key] = res
        return res

    def _neg(self, u: int) -> int:
        # only used by the order test; the public function universe stays monotone
        if u < 2:
            return 1 - u
        key = ("not", u, u)
        hit = self.cache.get(key)
        if hit is None:
            var, lo, hi = self.table[u]
            hit = self.mk(var, self._neg(lo), self._neg(hi))
            self.cache[key] = hit
        return hit

    def restrict(self, u: int, var: int, value: int) -> int:
        if u < 2:
            return u
        key = ("restrict", u, var * 2 + value)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        v, lo, hi = self.table[u]
        if v == var:
            res = hi if value else lo
        elif self.order[v] > self.order[var]:
            res = u
        else:
            res = self.mk(v, self.restrict(lo, var, value), self.restrict(hi, var, value))
        self.cache[key] = res
        return res

    def load(self, b: Robdd, shift: int = 0) -> int:
        """Copy ``b`` into this manager, renaming variable ``i`` to ``i + shift``."""
        ids = [ZERO, ONE]
        for var, lo, hi in b.nodes[2:]:
            ids.append(self.mk(var + shift, ids[lo], ids[hi]))
        return ids[b.root]

    def export(self, root: int) -> Robdd:
        new = {ZERO: ZERO, ONE: ONE}
        nodes = [None, None]
        stack = [(root, False)]
        while stack:
            u, done = stack.pop()
            if u in new:
                continue
            var, lo, hi = self.table[u]
            if done:
                new[u] = len(nodes)
                nodes.append((var, new[lo], new[hi]))
                continue
            stack.append((u, True))
            stack.append((hi, False))
            stack.append((lo, False))
        return Robdd(tuple(nodes), new[root], self.n, self.order)


def build_robdd(tree: AttackTree, order: Optional[Sequence[int]] = None) -> Robdd:
    """ROBDD of the root structure function, built by apply over the tree."""
    check_valid(tree, (Gate.OR, Gate.AND, Gate.BAS))
    mgr = BddManager(tree.n, order)
    val = {}
    for v in tree.postorder:
        g = tree.gates[v]
        if g is Gate.BAS:
            val[v] = mgr.variable(tree.anchor_of[v])
            continue
        op = "or" if g is Gate.OR else "and"
        kids = list(dict.fromkeys(tree.children[v]))
        acc = val[kids[0]]
        for c in kids[1:]:
            acc = mgr.apply(op, acc, val[c])
        val[v] = acc
    return mgr.export(val[tree.root])


def robdd_from_truth_table(table: Sequence, n: Optional[int] = None) -> Robdd:
    """ROBDD (identity order) of a function given as a table indexed by bitmask."""
    table = [bool(t) for t in table]
    if n is None:
        n = max(len(table).bit_length() - 1, 0)
    if len(table) != 1 << n:
        raise ValueError("truth table length must be 2**n")
    mgr = BddManager(n)

    def build(tab, var):
        if len(tab) == 1:
            return ONE if tab[0] else ZERO
        return mgr.mk(var, build(tab[0::2], var + 1), build(tab[1::2], var + 1))

    return mgr.export(build(table, 0))


# -- evaluation -------------------------------------------------------------------


def bdd_bu_values(b: Robdd, g: Callable, z0, z1, x: Sequence) -> dict:
    """Value of every node: terminals give ``z0``/``z1``, a node on variable ``i``
    gives ``g(x_i, value(lo), value(hi))``."""
    if len(x) != b.n:
        raise ValueError(f"expected {b.n} values, got {len(x)}")
    vals = {ZERO: z0, ONE: z1}
    for u in range(2, len(b.nodes)):
        var, lo, hi = b.nodes[u]
        vals[u] = g(x[var], vals[lo], vals[hi])
    return vals


def bdd_bu(b: Robdd, g: Callable, z0, z1, x: Sequence):
    return bdd_bu_values(b, g, z0, z1, x)[b.root]


def bdd_metric(tree: AttackTree, g: Callable, z0, z1, x: Sequence, order: Optional[Sequence[int]] = None):
    return bdd_bu(build_robdd(tree, order), g, z0, z1, x)


def tap_plugin():
    """``(g, z0, z1)`` for total attack probability."""
    return (lambda p, q, r: (1 - p) * q + p * r, 0.0, 1.0)


def semiring_plugin(semiring):
    """``(g, z0, z1)`` for a propositional semiring metric.

    ``g(x, y, z) = y ∇ (x △ z)``, ``z0 = 1_∇``, ``z1 = 1_△``; requires both
    identities and an absorbing semiring.
    """
    if semiring.one_nabla is None or semiring.one_triangle is None:
        raise ValueError(f"{semiring.name}: BDD evaluation needs identities for both operations")
    if not semiring.absorbing:
        raise ValueError(f"{semiring.name}: BDD evaluation needs an absorbing semiring")
    nab, tri = semiring.nabla, semiring.triangle
    return (lambda x, y, z: nab(y, tri(x, z)), semiring.one_nabla, semiring.one_triangle)


# -- Shannon composition and friends (identity variable order) -----------------------


def _require_identity(*bs: Robdd) -> None:
    for b in bs:
        if b.order != tuple(range(b.n)):
            raise ValueError("operation is defined for the identity variable order only")


def precede(f0: Robdd, f1: Robdd) -> bool:
    """``f0 ⪯ f1``: ``f0(b) <= f1(b)`` for every ``b``."""
    if f0.n != f1.n:
        raise ValueError("functions have different arities")
    if f0.order != f1.order:
        raise ValueError("functions use different variable orders")
    mgr = BddManager(f0.n, f0.order)
    return mgr.apply("diff", mgr.load(f0), mgr.load(f1)) == ZERO


def shannon_compose(f0: Robdd, f1: Robdd) -> Robdd:
    """``Sh(f0, f1)(x_1..x_n) = f0(x_2..x_n) ∨ (x_1 ∧ f1(x_2..x_n))`` for ``f0 ≺ f1``."""
    _require_identity(f0, f1)
    if f0.n != f1.n:
        raise ValueError("functions have different arities")
    if f0.nodes == f1.nodes and f0.root == f1.root or not precede(f0, f1):
        raise ValueError("Shannon composition needs f0 strictly below f1")
    mgr = BddManager(f0.n + 1)
    return mgr.export(mgr.mk(0, mgr.load(f0, 1), mgr.load(f1, 1)))


def delta_expand(f: Robdd) -> Robdd:
    """Add an irrelevant first argument: every variable moves up by one."""
    _require_identity(f)
    mgr = BddManager(f.n + 1)
    return mgr.export(mgr.load(f, 1))


def cofactors(f: Robdd) -> tuple:
    """The two cofactors on the first variable, as functions of the rest."""
    _require_identity(f)
    if f.n == 0:
        raise ValueError("a nullary function has no cofactors")
    out = []
    for value in (0, 1):
        mgr = BddManager(f.n)
        r = mgr.restrict(mgr.load(f), 0, value)
        small = mgr.export(r)
        shifted = BddManager(f.n - 1)
        ids = [ZERO, ONE]
        for var, lo, hi in small.nodes[2:]:
            ids.append(shifted.mk(var - 1, ids[lo], ids[hi]))
        out.append(shifted.export(ids[small.root]))
    return tuple(out)


def check_robdd(b: Robdd) -> list:
    """Reduction and ordering invariants; returns violations."""
    out = []
    if b.nodes[0] is not None or b.nodes[1] is not None:
        out.append("terminal slots must be empty")
    seen = {}
    for u in range(2, len(b.nodes)):
        var, lo, hi = b.nodes[u]
        if not 0 <= var < b.n:
            out.append(f"node {u}: variable {var} out of range")
            continue
        if lo == hi:
            out.append(f"node {u}: redundant (lo == hi)")
        if not (lo < u and hi < u):
            out.append(f"node {u}: children must precede parents")
        for c in (lo, hi):
            if c >= 2 and c < len(b.nodes) and b.level(c) <= b.order[var]:
                out.append(f"node {u}: child {c} violates the variable order")
        if (var, lo, hi) in seen:
            out.append(f"node {u}: duplicate of node {seen[(var, lo, hi)]}")
        seen[(var, lo, hi)] = u
    if not 0 <= b.root < len(b.nodes):
        out.append("root out of range")
    return out


# -- the extension Ψ on monotone Boolean functions -----------------------------------------


def table_delta(table: tuple) -> tuple:
    return tuple(table[m >> 1] for m in range(2 * len(table)))


def table_shannon(f0: tuple, f1: tuple) -> tuple:
    return tuple(f0[m >> 1] or (bool(m & 1) and f1[m >> 1]) for m in range(2 * len(f0)))


def table_precedes(f0: tuple, f1: tuple) -> bool:
    return all(a <= b for a, b in zip(f0, f1))


def _is_monotone(table: tuple, n: int) -> bool:
    for m in range(len(table)):
        if table[m]:
            for i in range(n):
                if not table[m | (1 << i)]:
                    return False
    return True


def monotone_functions(n: int) -> list:
    """All monotone functions of ``n`` variables as truth tables (2, 3, 6, 20, 168, ...)."""
    size = 1 << n
    return [
        t for t in (tuple(bool(bits >> k & 1) for k in range(size)) for bits in range(1 << size)) if _is_monotone(t, n)
    ]


def _minimal_points(table: tuple) -> list:
    n = max(len(table).bit_length() - 1, 0)
    return [m for m in range(len(table)) if table[m] and not any(m >> i & 1 and table[m ^ (1 << i)] for i in range(n))]


def psi_tap(table: tuple, p: Sequence[float]) -> float:
    """``Pr[f(Y) = 1]`` for independent ``Y_i ~ Bernoulli(p_i)``."""
    total = 0.0
    for m, value in enumerate(table):
        if value:
            w = 1.0
            for i, pi in enumerate(p):
                w *= pi if m >> i & 1 else 1 - pi
            total += w
    return total


def psi_semiring(semiring) -> Callable:
    """``∇`` over the minimal true points of ``f`` of ``△`` of their values."""

    def psi(table, x):
        terms = [semiring.fold_triangle(x[i] for i in range(len(x)) if m >> i & 1) for m in _minimal_points(table)]
        return semiring.fold_nabla(terms)

    return psi


@dataclass
class PsiReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_psi_conditions(
    psi: Callable,
    g: Callable,
    z0,
    z1,
    n_max: int = 3,
    sample: Optional[Callable[[random.Random], Any]] = None,
    samples: int = 50,
    seed: int = 0,
    close: Callable = lambda a, b: a == b,
) -> PsiReport:
    """Check the conditions that make the BDD algorithm correct for ``psi``.

    Condition 2: ``Ψ(0) = z0`` and ``Ψ(1) = z1``.  Condition 3: ``Ψ`` commutes
    with adding an irrelevant first argument, for functions of fewer than
    ``n_max`` variables.  Condition 4: ``Ψ(Sh(f, f'))(x) =
    g(x_1, Ψ(f)(x'), Ψ(f')(x'))`` for every ``f ≺ f'`` of fewer than
    ``n_max`` variables.  Monotone functions are enumerated exhaustively.
    """
    if n_max > 4:
        raise ValueError("monotone functions are enumerated only up to 3 variables")
    rng = random.Random(seed)
    sample = sample or (lambda r: r.random())
    report = PsiReport()

    def record(ok, what):
        report.checked += 1
        if not ok:
            report.violations.append(what)

    record(close(psi((False,), ()), z0), f"condition 2: Ψ(0) = {psi((False,), ())!r}, expected z0 = {z0!r}")
    record(close(psi((True,), ()), z1), f"condition 2: Ψ(1) = {psi((True,), ())!r}, expected z1 = {z1!r}")

    for n in range(n_max):
        funcs = monotone_functions(n)
        xs = [[sample(rng) for _ in range(n + 1)] for _ in range(samples)]
        for f in funcs:
            df = table_delta(f)
            for x in xs:
                lhs, rhs = psi(df, x), psi(f, x[1:])
                record(close(lhs, rhs), f"condition 3: f={f}, x={x}: {lhs!r} != {rhs!r}")
        for f, fp in itertools.product(funcs, repeat=2):
            if f == fp or not table_precedes(f, fp):
                continue
            sh = table_shannon(f, fp)
            for x in xs:
                lhs = psi(sh, x)
                rhs = g(x[0], psi(f, x[1:]), psi(fp, x[1:]))
                record(close(lhs, rhs), f"condition 4: f={f}, f'={fp}, x={x}: {lhs!r} != {rhs!r}")
    return report
