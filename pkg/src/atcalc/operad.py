"""The attack-tree (sc)operad: composition, re-anchoring, BAS merging and
decomposition into prime trees.

Anchor indices and surjections are 0-based: a surjection from ``[n]`` to
``[m]`` is the tuple of images ``(s(0), ..., s(n-1))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .tree import AttackTree, Gate, check_valid

__all__ = [
    "Surjection",
    "identity",
    "prime",
    "star",
    "substitute",
    "tau",
    "block_map",
    "block_permutation",
    "Id",
    "Prime",
    "Star",
    "Tau",
    "prime_decompose",
    "eval_decomposition",
    "format_decomposition",
    "parse_decomposition",
]

@dataclass(frozen=True)
class Surjection:
    images: tuple
    m: Optional[int] = None

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        m = (max(images) + 1 if images else 0) if self.m is None else int(self.m)
        if sorted(set(images)) != list(range(m)):
            raise ValueError(f"{images} is not a surjection onto [{m}]")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def is_bijective(self) -> bool:
        return self.n == self.m

    def __call__(self, i: int) -> int:
        return self.images[i]

    def after(self, other: "Surjection") -> "Surjection":
        """``self ∘ other``."""
        if other.m != self.n:
            raise ValueError("surjections do not compose")
        return Surjection(tuple(self.images[j] for j in other.images), self.m)

    def pull(self, x: Sequence) -> list:
        """``(σ*x)_i = x_{σ(i)}``: the argument vector seen by the unmerged tree."""
        return [x[j] for j in self.images]

    @classmethod
    def identity(cls, n: int) -> "Surjection":
        return cls(tuple(range(n)), n)


def _as_surjection(sigma) -> Surjection:
    return sigma if isinstance(sigma, Surjection) else Surjection(tuple(sigma))


def identity(color: Optional[str] = None) -> AttackTree:
    """The single-BAS tree, the operad unit."""
    return AttackTree((Gate.BAS,), ((),), (0,), colors=None if color is None else (color,))


def prime(gate, n: int) -> AttackTree:
    """``OR``/``AND`` root over ``n`` BASs, anchored left to right."""
    gate = Gate(gate)
    if gate not in (Gate.OR, Gate.AND, Gate.SAND) or n < 1:
        raise ValueError("prime trees are OR/AND gates over at least one BAS")
    gates = (gate,) + (Gate.BAS,) * n
    children = (tuple(range(1, n + 1)),) + ((),) * n
    return AttackTree(gates, children, tuple(range(1, n + 1)))


def _colors_needed(*trees) -> bool:
    return any(t.colors is not None for t in trees)


def star(outer: AttackTree, parts: Sequence[AttackTree]) -> AttackTree:
    """Simultaneous modular composition ``outer[parts[0]/a_1, ..., parts[n-1]/a_n]``.

    Node ids are reassigned densely: the outer tree's gates first (in id
    order), then each part's nodes in turn.  The anchors of the result are
    the parts' anchors concatenated in part order.
    """
    parts = list(parts)
    if len(parts) != outer.n:
        raise ValueError(f"arity mismatch: tree has {outer.n} BASs, got {len(parts)} parts")
    gates, children, names, colors, anchors = [], [], [], [], []
    use_colors = _colors_needed(outer, *parts)
    outer_map = {}
    for v, g in enumerate(outer.gates):
        if g is not Gate.BAS:
            outer_map[v] = len(gates)
            gates.append(g)
            children.append(None)
            names.append(outer.names[v] if outer.names else None)
            colors.append(outer.color(v) or "p")
    part_roots = []
    for i, part in enumerate(parts):
        offset = len(gates)
        # an unnamed unit keeps the name of the BAS it replaces
        inherit = outer.names[outer.anchors[i]] if outer.names and len(part.gates) == 1 else None
        for v, g in enumerate(part.gates):
            gates.append(g)
            children.append(tuple(offset + c for c in part.children[v]))
            names.append(part.names[v] if part.names and part.names[v] else inherit)
            colors.append(part.color(v) or "p")
        anchors.extend(offset + a for a in part.anchors)
        part_roots.append(offset + part.root)
    anchor_of = outer.anchor_of
    for v, new in outer_map.items():
        children[new] = tuple(
            part_roots[anchor_of[c]] if outer.gates[c] is Gate.BAS else outer_map[c] for c in outer.children[v]
        )
    return AttackTree(
        tuple(gates),
        tuple(children),
        tuple(anchors),
        tuple(names),
        tuple(colors) if use_colors else None,
    )


def substitute(tree: AttackTree, a: int, sub: AttackTree) -> AttackTree:
    """``T[T'/a]`` for a BAS node id ``a``; the new BASs take a's anchor slot."""
    if not 0 <= a < len(tree.gates) or tree.gates[a] is not Gate.BAS:
        raise ValueError(f"node {a} is not a BAS")
    parts = [identity(tree.color(v)) for v in tree.anchors]
    parts[tree.anchor_of[a]] = sub
    return star(tree, parts)


def tau(sigma, tree: AttackTree) -> AttackTree:
    """Re-anchor (bijective ``sigma``) or merge BASs (surjective ``sigma``).

    BAS ``a_i`` becomes anchor ``sigma(i)``; BASs with equal images are
    merged, and every edge into them is kept (so edge multiplicities add up).
    """
    sigma = _as_surjection(sigma)
    if sigma.n != tree.n:
        raise ValueError(f"surjection has domain {sigma.n}, tree has {tree.n} BASs")
    if sigma.is_bijective:
        anchors = [None] * tree.n
        for i, v in enumerate(tree.anchors):
            anchors[sigma(i)] = v
        return tree.with_anchors(anchors)
    gates, children, names, colors = [], [], [], []
    remap = {}
    for v, g in enumerate(tree.gates):
        if g is not Gate.BAS:
            remap[v] = len(gates)
            gates.append(g)
            children.append(None)
            names.append(tree.names[v] if tree.names else None)
            colors.append(tree.color(v))
    merged = []
    for j in range(sigma.m):
        merged.append(len(gates))
        first = next(i for i in range(tree.n) if sigma(i) == j)
        src = tree.anchors[first]
        gates.append(Gate.BAS)
        children.append(())
        names.append(tree.names[src] if tree.names else None)
        colors.append(tree.color(src))
    for v in tree.anchors:
        remap[v] = merged[sigma(tree.anchor_of[v])]
    for v, g in enumerate(tree.gates):
        if g is not Gate.BAS:
            children[remap[v]] = tuple(remap[c] for c in tree.children[v])
    return AttackTree(
        tuple(gates),
        tuple(children),
        tuple(merged),
        tuple(names),
        tuple(colors) if tree.colors is not None else None,
    )


def block_map(sigmas: Sequence) -> Surjection:
    """``(σ_1, ..., σ_n)``: apply each ``σ_i`` inside its own block of arguments."""
    sigmas = [_as_surjection(s) for s in sigmas]
    images = []
    offset = 0
    for s in sigmas:
        images.extend(offset + s(k) for k in range(s.n))
        offset += s.m
    return Surjection(tuple(images), offset)


def block_permutation(sigma, sizes: Sequence[int]) -> Surjection:
    """Reorders the blocks of ``f ⋆ (g_σ(1), ..., g_σ(n))`` into those of ``τ_σ(f) ⋆ g``.

    ``sizes[j]`` is the arity of ``g_j``.  With ``π`` the result,
    ``τ_σ(f) ⋆ g  ≅  τ_π(f ⋆ (g_σ(1), ..., g_σ(n)))``.
    """
    sigma = _as_surjection(sigma)
    if not sigma.is_bijective:
        raise ValueError("block permutation needs a bijection")
    start = [0]
    for s in sizes:
        start.append(start[-1] + s)
    images = []
    for i in range(sigma.n):
        j = sigma(i)
        images.extend(start[j] + k for k in range(sizes[j]))
    return Surjection(tuple(images), start[-1])


# -- prime decomposition ---------------------------------------------------------


@dataclass(frozen=True)
class Id:
    def __str__(self):
        return "id"


@dataclass(frozen=True)
class Prime:
    gate: Gate
    n: int

    def __str__(self):
        return f"{Gate(self.gate).value}{self.n}"


@dataclass(frozen=True)
class Star:
    outer: "Decomposition"
    parts: tuple

    def __str__(self):
        return f"star({self.outer}; {', '.join(map(str, self.parts))})"


@dataclass(frozen=True)
class Tau:
    sigma: tuple
    inner: "Decomposition"

    def __str__(self):
        return f"tau[{','.join(str(i + 1) for i in self.sigma)}]({self.inner})"


Decomposition = Union[Id, Prime, Star, Tau]


def _build(gates, children, anchors, names) -> AttackTree:
    """Compact a node table (entries set to None are dropped)."""
    keep = [v for v, g in enumerate(gates) if g is not None]
    new = {v: i for i, v in enumerate(keep)}
    return AttackTree(
        tuple(gates[v] for v in keep),
        tuple(tuple(new[c] for c in children[v]) for v in keep),
        tuple(new[a] for a in anchors),
        tuple(names[v] for v in keep),
    )


def _maybe_tau(images, inner):
    if tuple(images) == tuple(range(len(images))):
        return inner
    return Tau(tuple(images), inner)


def prime_decompose(tree: AttackTree) -> Decomposition:
    """An expression over prime trees, ``⋆`` and ``τ`` evaluating to ``tree``.

    Follows the standard induction: single-gate trees are merges of a prime
    tree; a gate whose BAS children hang only below it is factored out with
    ``⋆``; otherwise a shared BAS is split into copies and re-merged with
    ``τ``.  One witness is returned; decompositions are not unique.
    """
    check_valid(tree)
    return _decompose(tree)


def _decompose(t: AttackTree) -> Decomposition:
    if t.gates[t.root] is Gate.BAS:
        return Id()
    internal = [v for v, g in enumerate(t.gates) if g is not Gate.BAS]
    if len(internal) == 1:
        edges = t.children[t.root]
        images = tuple(t.anchor_of[c] for c in edges)
        return _maybe_tau(images, Prime(t.gates[t.root], len(edges)))

    names = list(t.names) if t.names else [None] * len(t.gates)
    parents = t.parents
    bottom = [v for v in internal if all(t.is_bas(c) for c in t.children[v])]
    for v in bottom:
        if all(set(parents[c]) == {v} for c in t.children[v]):
            return _factor(t, v, names)
    # every bottom gate has a BAS child shared with another parent: split it
    v = bottom[0]
    a = next(c for c in t.children[v] if set(parents[c]) != {v})
    return _split(t, a, names)


def _factor(t: AttackTree, v: int, names) -> Decomposition:
    kids = sorted(set(t.children[v]), key=t.anchor_of.__getitem__)
    # inner tree T_v
    inner_ids = {c: i + 1 for i, c in enumerate(kids)}
    inner = AttackTree(
        (t.gates[v],) + (Gate.BAS,) * len(kids),
        (tuple(inner_ids[c] for c in t.children[v]),) + ((),) * len(kids),
        tuple(range(1, len(kids) + 1)),
        (names[v],) + tuple(names[c] for c in kids),
    )
    # outer tree: v becomes a BAS, its children disappear
    gates = list(t.gates)
    children = list(t.children)
    gates[v] = Gate.BAS
    children[v] = ()
    for c in kids:
        gates[c] = None
    kidset = set(kids)
    first = min(t.anchor_of[c] for c in kids)
    outer_anchors = []
    for i, a in enumerate(t.anchors):
        if a in kidset:
            if i == first:
                outer_anchors.append(v)
        else:
            outer_anchors.append(a)
    outer = _build(gates, children, outer_anchors, names)
    pos = outer_anchors.index(v)
    parts = [Id()] * len(outer_anchors)
    parts[pos] = _decompose(inner)
    # anchors of the composite, expressed as anchors of t
    composite = []
    for a in outer_anchors:
        if a == v:
            composite.extend(t.anchor_of[c] for c in kids)
        else:
            composite.append(t.anchor_of[a])
    return _maybe_tau(composite, Star(_decompose(outer), tuple(parts)))


def _split(t: AttackTree, a: int, names) -> Decomposition:
    gates = list(t.gates)
    children = [list(ch) for ch in t.children]
    names = list(names)
    anchors = list(t.anchors)
    images = list(range(t.n))
    ps = sorted(set(t.parents[a]))
    for p in ps[1:]:
        copy = len(gates)
        gates.append(Gate.BAS)
        children.append([])
        names.append(names[a])
        children[p] = [copy if c == a else c for c in children[p]]
        anchors.append(copy)
        images.append(t.anchor_of[a])
    split = _build(gates, children, anchors, names)
    return Tau(tuple(images), _decompose(split))


def eval_decomposition(d: Decomposition) -> AttackTree:
    """Fold a decomposition expression back into an anchored tree."""
    if isinstance(d, Id):
        return identity()
    if isinstance(d, Prime):
        return prime(d.gate, d.n)
    if isinstance(d, Star):
        return star(eval_decomposition(d.outer), [eval_decomposition(p) for p in d.parts])
    if isinstance(d, Tau):
        return tau(Surjection(d.sigma), eval_decomposition(d.inner))
    raise TypeError(f"not a decomposition: {d!r}")


def format_decomposition(d: Decomposition) -> str:
    return str(d)


_DTOK = re.compile(r"\s*(star|tau|id|OR\d+|AND\d+|\d+|[()\[\];,])")


def parse_decomposition(text: str) -> Decomposition:
    """Inverse of :func:`format_decomposition` (surjection images are 1-based)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _DTOK.match(text, pos)
        if not m:
            raise ValueError(f"bad decomposition syntax at offset {pos}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def expect(tok):
        nonlocal i
        if i >= len(tokens) or tokens[i] != tok:
            raise ValueError(f"expected {tok!r}")
        i += 1

    def expr():
        nonlocal i
        if i >= len(tokens):
            raise ValueError("unexpected end of decomposition")
        tok = tokens[i]
        i += 1
        if tok == "id":
            return Id()
        if tok.startswith("OR"):
            return Prime(Gate.OR, int(tok[2:]))
        if tok.startswith("AND"):
            return Prime(Gate.AND, int(tok[3:]))
        if tok == "star":
            expect("(")
            outer = expr()
            expect(";")
            parts = [expr()]
            while tokens[i] == ",":
                i += 1
                parts.append(expr())
            expect(")")
            return Star(outer, tuple(parts))
        if tok == "tau":
            expect("[")
            images = [int(tokens[i]) - 1]
            i += 1
            while tokens[i] == ",":
                images.append(int(tokens[i + 1]) - 1)
                i += 2
            expect("]")
            expect("(")
            inner = expr()
            expect(")")
            return Tau(tuple(images), inner)
        raise ValueError(f"unexpected token {tok!r}")

    d = expr()
    if i != len(tokens):
        raise ValueError("trailing input in decomposition")
    return d
