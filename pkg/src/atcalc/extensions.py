"""Dynamic attack trees (SAND gates) and attack-defense trees (C gates).

Both reuse :class:`AttackTree`.  A DAT is a tree that may contain SAND
gates; the order of ``children[v]`` is the sequencing order.  An ADT has a
``colors`` table with ``"p"`` (proponent) and ``"o"`` (opponent) entries and
may contain C gates, whose children are ``(main, counter)``.
"""

from __future__ import annotations

import math
import operator
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .metrics import Semiring, parse_number
from .operad import star, substitute
from .tree import AttackTree, Gate, InvalidTreeError, Violation, validate

__all__ = [
    "DAT_GATES",
    "ADT_GATES",
    "validate_dat",
    "validate_adt",
    "DynamicSemiring",
    "MINTIME",
    "dat_bottom_up",
    "dat_compose",
    "AttributeDomain",
    "ADT_MINCOST",
    "adt_bottom_up",
    "adt_compose",
    "MIN_TIME_SOURCES",
]

INF = math.inf
DAT_GATES = (Gate.OR, Gate.AND, Gate.SAND, Gate.BAS)
ADT_GATES = (Gate.OR, Gate.AND, Gate.C, Gate.BAS)
COLORS = ("p", "o")


def validate_dat(tree: AttackTree) -> list:
    """Structural violations of a dynamic AT.

    The SAND order is the child list itself, so it is always a bijection onto
    the child edges; only the usual AT invariants need checking.
    """
    return validate(tree, DAT_GATES)


def validate_adt(tree: AttackTree) -> list:
    out = validate(tree, ADT_GATES)
    if any(v.kind in ("shape", "edge", "empty") for v in out):
        return out
    if tree.colors is None:
        return out + [Violation("color", "attack-defense tree needs a color for every node")]
    for v, c in enumerate(tree.colors):
        if c not in COLORS:
            out.append(Violation("color", f"node {tree.name(v)} has color {c!r}, expected p or o", (v,)))
    for v, g in enumerate(tree.gates):
        ch = tree.children[v]
        if g in (Gate.OR, Gate.AND):
            bad = [c for c in ch if tree.colors[c] != tree.colors[v]]
            if bad:
                out.append(
                    Violation(
                        "color",
                        f"{g.value} node {tree.name(v)} has children of the other color: "
                        + ", ".join(tree.name(c) for c in bad),
                        (v, *bad),
                    )
                )
        elif g is Gate.C:
            if len(ch) != 2:
                out.append(Violation("counter", f"C node {tree.name(v)} needs exactly two children", (v,)))
            elif not (tree.colors[v] == tree.colors[ch[0]] != tree.colors[ch[1]]):
                out.append(
                    Violation(
                        "counter",
                        f"C node {tree.name(v)} needs a same-color first child and an other-color second child",
                        (v, *ch),
                    )
                )
    return out


def _require(violations: list) -> None:
    if violations:
        raise InvalidTreeError(violations)


# -- dynamic ATs ------------------------------------------------------------------


@dataclass(frozen=True)
class DynamicSemiring:
    """A semiring plus a sequencing operator ``◇`` (associative, with identity,
    not assumed commutative)."""

    base: Semiring
    lozenge: Callable[[Any, Any], Any]
    one_lozenge: Any

    @property
    def name(self) -> str:
        return self.base.name

    def fold_lozenge(self, values: Sequence):
        acc = self.one_lozenge
        for v in values:
            acc = self.lozenge(acc, v)
        return acc

    def check_laws(self, trials: int = 1000, seed: int = 0) -> list:
        failures = self.base.check_laws(trials, seed)
        rng = random.Random(seed + 1)
        loz = self.lozenge
        for _ in range(trials):
            a, b, c = (self.base.sample(rng) for _ in range(3))
            if loz(loz(a, b), c) != loz(a, loz(b, c)):
                failures.append(f"{self.name}: ◇ associative fails at {(a, b, c)}")
                break
            if loz(a, self.one_lozenge) != a or loz(self.one_lozenge, a) != a:
                failures.append(f"{self.name}: ◇ identity fails at {a}")
                break
        return failures


MINTIME = DynamicSemiring(
    Semiring("mintime", min, max, INF, 0, idempotent_nabla=True, idempotent_triangle=True, absorbing=True),
    operator.add,
    0,
)

# The competing min-time definitions for sequential trees.  Only the
# bottom-up one is computed; the others rest on timed-automata or
# partial-order semantics.
MIN_TIME_SOURCES = {
    "bottom-up": "dat_bottom_up with MINTIME",
    "timed automata": None,
    "sequential sum": None,
    "partial-order semantics": None,
}


def dat_bottom_up(tree: AttackTree, d: DynamicSemiring, x: Sequence):
    """Bottom-up value: ``∇`` at OR, ``△`` at AND, ``◇`` in child order at SAND."""
    _require(validate_dat(tree))
    if len(x) != tree.n:
        raise ValueError(f"expected {tree.n} BAS values, got {len(x)}")
    val = {}
    for v in tree.postorder:
        g = tree.gates[v]
        kids = [val[c] for c in tree.children[v]]
        if g is Gate.BAS:
            val[v] = x[tree.anchor_of[v]]
        elif g is Gate.OR:
            val[v] = d.base.fold_nabla(kids)
        elif g is Gate.AND:
            val[v] = d.base.fold_triangle(kids)
        else:
            val[v] = d.fold_lozenge(kids)
    return val[tree.root]


def dat_compose(outer: AttackTree, parts: Sequence[AttackTree]) -> AttackTree:
    """Modular composition of DATs; a grafted root keeps its BAS's slot in every SAND order."""
    for t in (outer, *parts):
        _require(validate_dat(t))
    out = star(outer, parts)
    _require(validate_dat(out))
    return out


# -- attack-defense trees ------------------------------------------------------------


@dataclass(frozen=True)
class AttributeDomain:
    """Six operations: OR, AND and C for each of the two actors."""

    name: str
    or_p: Callable[[Any, Any], Any]
    and_p: Callable[[Any, Any], Any]
    counter_p: Callable[[Any, Any], Any]
    or_o: Callable[[Any, Any], Any]
    and_o: Callable[[Any, Any], Any]
    counter_o: Callable[[Any, Any], Any]
    default_o: Any = None
    parse: Callable[[str], Any] = field(default=parse_number, compare=False)

    def ops(self, color: str) -> tuple:
        if color == "p":
            return self.or_p, self.and_p, self.counter_p
        return self.or_o, self.and_o, self.counter_o


# min cost of an attack that succeeds whatever the defender does
ADT_MINCOST = AttributeDomain("adt-mincost", min, operator.add, operator.add, operator.add, min, min, default_o=INF)


def _fold(op, values):
    acc = values[0]
    for v in values[1:]:
        acc = op(acc, v)
    return acc


def adt_bottom_up(tree: AttackTree, dom: AttributeDomain, x: Sequence):
    """Bottom-up value; a C node of color c applies ``□^c(main, counter)``.

    ``None`` entries of ``x`` at opponent BASs take ``dom.default_o``.
    """
    _require(validate_adt(tree))
    if len(x) != tree.n:
        raise ValueError(f"expected {tree.n} BAS values, got {len(x)}")
    val = {}
    for v in tree.postorder:
        g = tree.gates[v]
        if g is Gate.BAS:
            xv = x[tree.anchor_of[v]]
            if xv is None:
                if tree.colors[v] != "o" or dom.default_o is None:
                    raise ValueError(f"no value for BAS {tree.name(v)}")
                xv = dom.default_o
            val[v] = xv
            continue
        or_op, and_op, counter = dom.ops(tree.colors[v])
        kids = [val[c] for c in tree.children[v]]
        if g is Gate.OR:
            val[v] = _fold(or_op, kids)
        elif g is Gate.AND:
            val[v] = _fold(and_op, kids)
        else:
            val[v] = counter(kids[0], kids[1])
    return val[tree.root]


def adt_compose(tree: AttackTree, a: int, sub: AttackTree) -> AttackTree:
    """Replace BAS node ``a`` by ``sub``; their colors must agree."""
    _require(validate_adt(tree))
    _require(validate_adt(sub))
    if tree.gates[a] is not Gate.BAS:
        raise ValueError(f"node {a} is not a BAS")
    if tree.colors[a] != sub.colors[sub.root]:
        raise ValueError(
            f"color mismatch: BAS {tree.name(a)} is {tree.colors[a]!r}, replacement root is {sub.colors[sub.root]!r}"
        )
    out = substitute(tree, a, sub)
    _require(validate_adt(out))
    return out
