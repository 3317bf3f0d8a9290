"""Canonical serialization of anchored attack trees.

Two anchored trees get the same canonical bytes iff there is a graph
isomorphism between them preserving gates, edge multiplicities, SAND child
order, colors and the anchoring.

Nodes are first colored by bottom-up keys ranked per height (BAS key is its
anchor index), the coloring is refined with parent/child multisets, and any
remaining ties are broken by individualization; the lexicographically
smallest serialization over all tie-breaking branches is the canonical one.
Twin nodes (same children, same parents) are interchangeable, so only one
of each twin group is tried.
"""

from __future__ import annotations

from .tree import AttackTree, Gate, check_valid

__all__ = ["canonical_form", "anchor_isomorphic"]

_ALL_GATES = tuple(Gate)


def _rank(keys):
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def _child_colors(tree, v, colors):
    cs = [colors[c] for c in tree.children[v]]
    return tuple(cs) if tree.gates[v] is Gate.SAND else tuple(sorted(cs))


def _initial_colors(tree: AttackTree) -> list:
    height = {}
    for v in tree.postorder:
        ch = tree.children[v]
        height[v] = 0 if not ch else 1 + max(height[c] for c in ch)
    anchor_of = tree.anchor_of
    colors = [None] * len(tree.gates)
    next_rank = 0
    for h in sorted(set(height.values())):
        layer = [v for v in height if height[v] == h]
        keys = []
        for v in layer:
            keys.append((
                tree.gates[v].value,
                tree.color(v) or "",
                anchor_of.get(v, -1),
                _child_colors(tree, v, colors),
            ))
        ranks = _rank(keys)
        for v, r in zip(layer, ranks):
            colors[v] = next_rank + r
        next_rank += max(ranks) + 1
    return colors


def _parent_slots(tree):
    slots = [[] for _ in tree.gates]
    for p, ch in enumerate(tree.children):
        sand = tree.gates[p] is Gate.SAND
        for pos, c in enumerate(ch):
            slots[c].append((p, pos if sand else -1))
    return slots


def _refine(tree, colors, slots):
    count = len(set(colors))
    while True:
        keys = [
            (colors[v], _child_colors(tree, v, colors), tuple(sorted((colors[p], pos) for p, pos in slots[v])))
            for v in range(len(colors))
        ]
        new = _rank(keys)
        new_count = len(set(new))
        if new_count == count:
            return new
        colors, count = new, new_count


def _serialize(tree, colors):
    # colors are a discrete ranking 0..N-1 here
    out = []
    order = sorted(range(len(colors)), key=colors.__getitem__)
    anchor_of = tree.anchor_of
    for v in order:
        out.append((
            tree.gates[v].value,
            tree.color(v) or "",
            anchor_of.get(v, -1),
            _child_colors(tree, v, colors),
        ))
    return (colors[tree.root], tuple(out))


def _twin_signature(tree, v, slots):
    if any(tree.gates[p] is Gate.SAND for p, _ in slots[v]):
        return ("unique", v)
    ch = tree.children[v]
    return (tuple(ch) if tree.gates[v] is Gate.SAND else tuple(sorted(ch)), tuple(sorted(p for p, _ in slots[v])))


def _search(tree, colors, slots):
    colors = _refine(tree, colors, slots)
    if len(set(colors)) == len(colors):
        return _serialize(tree, colors)
    groups: dict = {}
    for v, c in enumerate(colors):
        groups.setdefault(c, []).append(v)
    target = min(c for c, vs in groups.items() if len(vs) > 1)
    tried = set()
    best = None
    for v in groups[target]:
        sig = _twin_signature(tree, v, slots)
        if sig in tried:
            continue
        tried.add(sig)
        split = _rank([(c, 0 if u == v else 1) for u, c in enumerate(colors)])
        cand = _search(tree, split, slots)
        if best is None or cand < best:
            best = cand
    return best


def canonical_form(tree: AttackTree) -> bytes:
    """Canonical byte string of the anchor-isomorphism class of ``tree``."""
    check_valid(tree, _ALL_GATES)
    slots = _parent_slots(tree)
    root, rows = _search(tree, _initial_colors(tree), slots)
    parts = [f"atc1 root={root}"]
    for i, (gate, color, anchor, kids) in enumerate(rows):
        label = gate + (f"@{color}" if color else "")
        if anchor >= 0:
            label += f"#{anchor + 1}"
        parts.append(f"{i}:{label}[{','.join(map(str, kids))}]")
    return ";".join(parts).encode()


def anchor_isomorphic(a: AttackTree, b: AttackTree) -> bool:
    if len(a.gates) != len(b.gates) or a.n != b.n or a.edge_count != b.edge_count:
        return False
    return canonical_form(a) == canonical_form(b)
