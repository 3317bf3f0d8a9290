"""Attack tree data model, structure-function semantics and attack enumeration.

Trees are stored as dense integer node tables.  Every tree carries an
anchoring: ``anchors[i]`` is the node id of the BAS with anchor index ``i``
(0-based here, 1-based in the usual mathematical notation).  Attack vectors
are tuples of 0/1 indexed by anchor.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

__all__ = [
    "Gate",
    "AttackTree",
    "AnchoredAT",
    "Violation",
    "InvalidTreeError",
    "EnumerationCapError",
    "validate",
    "check_valid",
    "structure_function",
    "truth_table",
    "successful_attacks",
    "minimal_attacks",
    "enumeration_cap",
    "term",
]

DEFAULT_ENUM_CAP = 20


class Gate(str, Enum):
    OR = "OR"
    AND = "AND"
    BAS = "BAS"
    SAND = "SAND"
    C = "C"

    def __repr__(self) -> str:
        return self.value


Term = Union[str, tuple]


@dataclass(frozen=True)
class AttackTree:
    """Rooted DAG multigraph with gate labels and an anchoring of its BASs.

    ``children[v]`` lists the child of every outgoing edge of ``v``; repeated
    entries are parallel edges.  For SAND gates the listed order is the
    sequencing order.  ``names`` and ``colors`` are optional side tables
    (colors are only used by attack-defense trees, values ``"p"``/``"o"``).
    """

    gates: tuple
    children: tuple
    anchors: Optional[tuple] = None
    names: Optional[tuple] = field(default=None, compare=False)
    colors: Optional[tuple] = None

    def __post_init__(self):
        gates = tuple(Gate(g) for g in self.gates)
        children = tuple(tuple(int(c) for c in ch) for ch in self.children)
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "children", children)
        if self.anchors is None:
            anchors = tuple(v for v, g in enumerate(gates) if g is Gate.BAS)
        else:
            anchors = tuple(int(a) for a in self.anchors)
        object.__setattr__(self, "anchors", anchors)
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
        if self.colors is not None:
            object.__setattr__(self, "colors", tuple(self.colors))

    # -- basic structure -------------------------------------------------

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def n(self) -> int:
        """Number of BASs (the operad arity)."""
        return len(self.anchors)

    @property
    def edge_count(self) -> int:
        return sum(len(ch) for ch in self.children)

    @cached_property
    def parents(self) -> tuple:
        ps = [[] for _ in self.gates]
        for v, ch in enumerate(self.children):
            for c in ch:
                if 0 <= c < len(ps):
                    ps[c].append(v)
        return tuple(tuple(p) for p in ps)

    @cached_property
    def root(self) -> int:
        roots = [v for v, p in enumerate(self.parents) if not p]
        if len(roots) != 1:
            raise InvalidTreeError([Violation("root", f"expected one root, found {len(roots)}", tuple(roots))])
        return roots[0]

    @cached_property
    def anchor_of(self) -> dict:
        return {v: i for i, v in enumerate(self.anchors)}

    @cached_property
    def postorder(self) -> tuple:
        """Nodes reachable from the root, children before parents."""
        seen = set()
        order = []
        stack = [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
                continue
            if v in seen:
                continue
            seen.add(v)
            stack.append((v, True))
            for c in reversed(self.children[v]):
                if c not in seen:
                    stack.append((c, False))
        return tuple(order)

    def is_bas(self, v: int) -> bool:
        return self.gates[v] is Gate.BAS

    def name(self, v: int) -> str:
        if self.names is not None and self.names[v]:
            return self.names[v]
        if self.gates[v] is Gate.BAS and v in self.anchor_of:
            return f"a{self.anchor_of[v] + 1}"
        return f"n{v}"

    def color(self, v: int) -> Optional[str]:
        return None if self.colors is None else self.colors[v]

    @property
    def bas_names(self) -> list:
        return [self.name(v) for v in self.anchors]

    def with_anchors(self, anchors: Sequence[int]) -> "AttackTree":
        return AttackTree(self.gates, self.children, tuple(anchors), self.names, self.colors)

    def with_names(self, names: Sequence[Optional[str]]) -> "AttackTree":
        return AttackTree(self.gates, self.children, self.anchors, tuple(names), self.colors)

    # -- construction helpers ---------------------------------------------

    @classmethod
    def from_term(cls, t: Term) -> "AttackTree":
        """Build a tree from a nested term such as ``("AND", "a", ("OR", "a", "b"))``.

        Strings are BASs; equal strings denote the same (shared) BAS.  The
        anchoring follows first appearance in a left-to-right reading.
        """
        gates, children, names = [], [], []
        bas_ids: dict = {}
        anchors = []

        def walk(node):
            if isinstance(node, str):
                if node not in bas_ids:
                    bas_ids[node] = len(gates)
                    gates.append(Gate.BAS)
                    children.append(())
                    names.append(node)
                    anchors.append(bas_ids[node])
                return bas_ids[node]
            gate, *kids = node
            v = len(gates)
            gates.append(Gate(gate))
            children.append(None)
            names.append(None)
            children[v] = tuple(walk(k) for k in kids)
            return v

        walk(t)
        return cls(tuple(gates), tuple(children), tuple(anchors), tuple(names))

    def __repr__(self) -> str:
        try:
            return f"AttackTree({to_term_string(self)})"
        except InvalidTreeError:
            return f"AttackTree(gates={self.gates!r}, children={self.children!r}, anchors={self.anchors!r})"


# Every tree carries its anchoring, so the anchored type is the same class.
AnchoredAT = AttackTree


def to_term_string(tree: AttackTree) -> str:
    """Render as a nested term; shared gates are repeated."""

    def walk(v):
        if tree.is_bas(v):
            return tree.name(v)
        return f"{tree.gates[v].value}({', '.join(walk(c) for c in tree.children[v])})"

    return walk(tree.root)


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def term(text: str) -> AttackTree:
    """Parse a one-line term like ``"AND(OR(a1, a2), a3)"`` into a tree."""
    tokens = [(m.group(1), m.group(2)) for m in _TOKEN.finditer(text) if m.group(1) or m.group(2)]
    pos = 0

    def parse():
        nonlocal pos
        ident, punct = tokens[pos]
        if ident is None:
            raise ValueError(f"unexpected {punct!r} in term")
        pos += 1
        if pos < len(tokens) and tokens[pos][1] == "(":
            pos += 1
            kids = [parse()]
            while tokens[pos][1] == ",":
                pos += 1
                kids.append(parse())
            if tokens[pos][1] != ")":
                raise ValueError("expected ')' in term")
            pos += 1
            return (ident.upper(), *kids)
        return ident

    t = parse()
    if pos != len(tokens):
        raise ValueError("trailing input in term")
    return AttackTree.from_term(t)


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    nodes: tuple = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


class InvalidTreeError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class EnumerationCapError(ValueError):
    pass


def validate(tree: AttackTree, allowed: Iterable[Gate] = (Gate.OR, Gate.AND, Gate.BAS)) -> list:
    """Return every violated structural invariant (an empty list means valid)."""
    allowed = set(allowed)
    out = []
    size = len(tree.gates)
    if size == 0:
        return [Violation("empty", "tree has no nodes")]
    if len(tree.children) != size:
        return [Violation("shape", "gates and children tables differ in length")]
    bad_edge = False
    for v, ch in enumerate(tree.children):
        for c in ch:
            if not 0 <= c < size:
                out.append(Violation("edge", f"edge {v}->{c} points outside the node table", (v,)))
                bad_edge = True
    if bad_edge:
        return out
    for v, g in enumerate(tree.gates):
        if g not in allowed:
            out.append(Violation("gate", f"gate {g.value} not allowed at node {tree.name(v)}", (v,)))
        if (g is Gate.BAS) != (len(tree.children[v]) == 0):
            what = "BAS node has children" if g is Gate.BAS else "gate has no children"
            out.append(Violation("leaf", f"{what}: {tree.name(v)}", (v,)))

    cycle = _find_cycle(tree)
    if cycle:
        out.append(Violation("cycle", "cycle at " + " -> ".join(tree.name(v) for v in cycle), tuple(cycle)))

    roots = [v for v, p in enumerate(tree.parents) if not p]
    if len(roots) != 1:
        out.append(Violation("root", f"expected exactly one root, found {len(roots)}", tuple(roots)))
    else:
        reach = {roots[0]}
        stack = [roots[0]]
        while stack:
            for c in tree.children[stack.pop()]:
                if c not in reach:
                    reach.add(c)
                    stack.append(c)
        for v in range(size):
            if v not in reach:
                out.append(Violation("unreachable", f"node {tree.name(v)} is not reachable from the root", (v,)))

    bas = {v for v, g in enumerate(tree.gates) if g is Gate.BAS}
    if not bas:
        out.append(Violation("empty", "tree has no BAS"))
    if sorted(tree.anchors) != sorted(bas) or len(set(tree.anchors)) != len(tree.anchors):
        out.append(Violation("anchoring", "anchoring is not a bijection onto the BASs", tuple(tree.anchors)))
    if tree.colors is not None and len(tree.colors) != size:
        out.append(Violation("shape", "color table has the wrong length"))
    return out


def _find_cycle(tree: AttackTree) -> list:
    WHITE, GREY, BLACK = 0, 1, 2
    state = [WHITE] * len(tree.gates)
    for start in range(len(tree.gates)):
        if state[start] != WHITE:
            continue
        path = [start]
        its = [iter(tree.children[start])]
        state[start] = GREY
        while its:
            nxt = next(its[-1], None)
            if nxt is None:
                state[path.pop()] = BLACK
                its.pop()
            elif state[nxt] == GREY:
                return path[path.index(nxt):] + [nxt]
            elif state[nxt] == WHITE:
                state[nxt] = GREY
                path.append(nxt)
                its.append(iter(tree.children[nxt]))
    return []


def check_valid(tree: AttackTree, allowed: Iterable[Gate] = (Gate.OR, Gate.AND, Gate.BAS)) -> AttackTree:
    violations = validate(tree, allowed)
    if violations:
        raise InvalidTreeError(violations)
    return tree


# -- semantics ----------------------------------------------------------------


def structure_function(tree: AttackTree, b: Sequence[int], v: Optional[int] = None) -> bool:
    """Whether attack ``b`` activates node ``v`` (default: the root).

    Parallel edges collapse since conjunction and disjunction are idempotent.
    """
    if len(b) != tree.n:
        raise ValueError(f"attack vector has length {len(b)}, tree has {tree.n} BASs")
    if v is None:
        v = tree.root
    elif not 0 <= v < len(tree.gates):
        raise KeyError(f"unknown node id {v}")
    memo: dict = {}
    anchor_of = tree.anchor_of
    stack = [v]
    while stack:
        u = stack[-1]
        if u in memo:
            stack.pop()
            continue
        g = tree.gates[u]
        if g is Gate.BAS:
            memo[u] = bool(b[anchor_of[u]])
            stack.pop()
            continue
        pending = [c for c in tree.children[u] if c not in memo]
        if pending:
            stack.extend(pending)
            continue
        vals = [memo[c] for c in tree.children[u]]
        if g is Gate.OR:
            memo[u] = any(vals)
        elif g in (Gate.AND, Gate.SAND):
            memo[u] = all(vals)
        else:
            raise ValueError(f"structure function undefined for gate {g.value}")
        stack.pop()
    return memo[v]


def enumeration_cap() -> int:
    return int(os.environ.get("ATCALC_ENUM_CAP", DEFAULT_ENUM_CAP))


def _check_cap(n: int, cap: Optional[int]) -> None:
    cap = enumeration_cap() if cap is None else cap
    if n > cap:
        raise EnumerationCapError(f"{n} BASs exceed the enumeration cap of {cap}")


def truth_table(tree: AttackTree, cap: Optional[int] = None) -> np.ndarray:
    """Root structure function on all 2**n attacks.

    Entry ``k`` is the value on the attack whose bit ``i`` (of ``k``) is the
    activation of anchor ``i``.
    """
    n = tree.n
    _check_cap(n, cap)
    idx = np.arange(1 << n, dtype=np.int64)
    vals: dict = {}
    for v in tree.postorder:
        g = tree.gates[v]
        if g is Gate.BAS:
            vals[v] = ((idx >> tree.anchor_of[v]) & 1).astype(bool)
            continue
        kids = list(dict.fromkeys(tree.children[v]))
        acc = vals[kids[0]].copy()
        for c in kids[1:]:
            if g is Gate.OR:
                acc |= vals[c]
            elif g in (Gate.AND, Gate.SAND):
                acc &= vals[c]
            else:
                raise ValueError(f"structure function undefined for gate {g.value}")
        vals[v] = acc
    return vals[tree.root]


def _mask_to_vector(mask: int, n: int) -> tuple:
    return tuple((mask >> i) & 1 for i in range(n))


def successful_masks(tree: AttackTree, cap: Optional[int] = None) -> np.ndarray:
    return np.flatnonzero(truth_table(tree, cap))


def minimal_masks(tree: AttackTree, cap: Optional[int] = None) -> np.ndarray:
    table = truth_table(tree, cap)
    idx = np.arange(table.size, dtype=np.int64)
    minimal = table.copy()
    # monotone: minimal iff clearing any single set bit loses success
    for i in range(tree.n):
        bit = 1 << i
        has = (idx & bit) != 0
        minimal &= ~(has & table[idx ^ bit])
    return np.flatnonzero(minimal)


def successful_attacks(tree: AttackTree, cap: Optional[int] = None) -> set:
    return {_mask_to_vector(int(m), tree.n) for m in successful_masks(tree, cap)}


def minimal_attacks(tree: AttackTree, cap: Optional[int] = None) -> set:
    return {_mask_to_vector(int(m), tree.n) for m in minimal_masks(tree, cap)}
