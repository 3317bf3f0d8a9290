"""Attack tree metrics: structure, total attack probability, and the
propositional and bottom-up semiring families.

A :class:`Metric` bundles the evaluation function ``φ(T)(x)`` with the
gate operators ``C_k``/``D_k`` (what the metric does on a single OR/AND
gate over ``k`` BASs) and, for metrics computable on ROBDDs, the
``(g, z0, z1)`` plugin.
"""

from __future__ import annotations

import itertools
import math
import operator
import random
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .bdd import semiring_plugin, tap_plugin
from .tree import AttackTree, Gate, check_valid, minimal_masks, structure_function, successful_masks

__all__ = [
    "INF",
    "Semiring",
    "Metric",
    "MINCOST",
    "MINSKILL",
    "SAT",
    "MAXDAMAGE",
    "builtin_semirings",
    "eval_structure_metric",
    "eval_tap",
    "tap_direct",
    "eval_propositional_semiring",
    "eval_bottom_up_semiring",
    "structure_metric",
    "tap_metric",
    "propositional_metric",
    "bottom_up_metric",
    "METRICS",
    "get_metric",
    "parse_number",
    "parse_bool",
]

INF = math.inf


def parse_number(text: str):
    text = text.strip().lower()
    if text in ("inf", "+inf", "infinity", "∞"):
        return INF
    if text in ("-inf", "-infinity"):
        return -INF
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "t"):
        return True
    if t in ("0", "false", "no", "f"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _sample_cost(rng: random.Random):
    return INF if rng.random() < 0.05 else rng.randint(0, 100)


def _sample_finite(rng: random.Random):
    return rng.randint(0, 100)


def _sample_bool(rng: random.Random):
    return rng.random() < 0.5


@dataclass(frozen=True)
class Semiring:
    """Descriptor ``(X, ∇, △)`` with optional identities and law flags."""

    name: str
    nabla: Callable[[Any, Any], Any]
    triangle: Callable[[Any, Any], Any]
    one_nabla: Any = None
    one_triangle: Any = None
    idempotent_nabla: bool = False
    idempotent_triangle: bool = False
    absorbing: bool = False
    carrier: str = "extended reals"
    sample: Callable[[random.Random], Any] = field(default=_sample_cost, compare=False)
    parse: Callable[[str], Any] = field(default=parse_number, compare=False)

    def fold_nabla(self, values: Sequence):
        values = list(values)
        if not values:
            if self.one_nabla is None:
                raise ValueError(f"{self.name}: empty ∇-fold without identity")
            return self.one_nabla
        return reduce(self.nabla, values)

    def fold_triangle(self, values: Sequence):
        values = list(values)
        if not values:
            if self.one_triangle is None:
                raise ValueError(f"{self.name}: empty △-fold without identity")
            return self.one_triangle
        return reduce(self.triangle, values)

    def check_laws(self, trials: int = 1000, seed: int = 0) -> list:
        """Sampled check of the declared algebraic laws; returns failures."""
        rng = random.Random(seed)
        nab, tri = self.nabla, self.triangle
        failures = []

        def law(name, ok, *args):
            if not ok:
                failures.append(f"{self.name}: {name} fails at {args}")

        for _ in range(trials):
            a, b, c = self.sample(rng), self.sample(rng), self.sample(rng)
            law("∇ commutative", nab(a, b) == nab(b, a), a, b)
            law("△ commutative", tri(a, b) == tri(b, a), a, b)
            law("∇ associative", nab(nab(a, b), c) == nab(a, nab(b, c)), a, b, c)
            law("△ associative", tri(tri(a, b), c) == tri(a, tri(b, c)), a, b, c)
            law("△ distributes over ∇", tri(a, nab(b, c)) == nab(tri(a, b), tri(a, c)), a, b, c)
            if self.one_nabla is not None:
                law("∇ identity", nab(a, self.one_nabla) == a, a)
            if self.one_triangle is not None:
                law("△ identity", tri(a, self.one_triangle) == a, a)
            if self.idempotent_nabla:
                law("∇ idempotent", nab(a, a) == a, a)
            if self.idempotent_triangle:
                law("△ idempotent", tri(a, a) == a, a)
            if self.absorbing:
                law("absorption", nab(a, tri(a, b)) == a, a, b)
            if failures:
                break
        return failures


def _registered(semiring: Semiring) -> Semiring:
    failures = semiring.check_laws()
    if failures:
        raise ValueError("; ".join(failures))
    return semiring


MINCOST = _registered(Semiring("mincost", min, operator.add, INF, 0, idempotent_nabla=True, absorbing=True))
MINSKILL = _registered(
    Semiring("minskill", min, max, INF, 0, idempotent_nabla=True, idempotent_triangle=True, absorbing=True)
)
SAT = _registered(
    Semiring(
        "sat",
        operator.or_,
        operator.and_,
        False,
        True,
        idempotent_nabla=True,
        idempotent_triangle=True,
        absorbing=True,
        carrier="booleans",
        sample=_sample_bool,
        parse=parse_bool,
    )
)
MAXDAMAGE = _registered(
    Semiring("maxdamage", max, operator.add, 0, 0, idempotent_nabla=True, sample=_sample_finite)
)


def builtin_semirings() -> list:
    return [MINCOST, MINSKILL, SAT, MAXDAMAGE]


# -- evaluators -------------------------------------------------------------------


def _check_arity(tree: AttackTree, x: Sequence) -> None:
    if len(x) != tree.n:
        raise ValueError(f"expected {tree.n} BAS values, got {len(x)}")


def eval_structure_metric(tree: AttackTree, b: Sequence) -> bool:
    _check_arity(tree, b)
    return structure_function(tree, [bool(v) for v in b])


def _check_probabilities(p: Sequence) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.size and (np.any(arr < 0) or np.any(arr > 1) or np.any(np.isnan(arr))):
        raise ValueError(f"probabilities must lie in [0, 1]: {list(p)}")
    return arr


def eval_tap(tree: AttackTree, p: Sequence[float], cap: Optional[int] = None) -> float:
    """Total attack probability by summing the weight of every successful attack."""
    _check_arity(tree, p)
    probs = _check_probabilities(p)
    masks = successful_masks(tree, cap)
    weight = np.ones(masks.size)
    for i, pi in enumerate(probs):
        bit = ((masks >> i) & 1).astype(bool)
        weight *= np.where(bit, pi, 1.0 - pi)
    return float(weight.sum())


def tap_direct(tree: AttackTree, p: Sequence[float]) -> float:
    """Reference TAP: a plain loop over all attacks, one structure-function call each."""
    _check_arity(tree, p)
    _check_probabilities(p)
    total = 0.0
    for b in itertools.product((0, 1), repeat=tree.n):
        if structure_function(tree, b):
            w = 1.0
            for bi, pi in zip(b, p):
                w *= pi if bi else 1.0 - pi
            total += w
    return total


def eval_propositional_semiring(tree: AttackTree, semiring: Semiring, x: Sequence, cap: Optional[int] = None):
    """``∇`` over minimal attacks of the ``△`` of the activated BAS values."""
    _check_arity(tree, x)
    terms = []
    for mask in minimal_masks(tree, cap):
        mask = int(mask)
        terms.append(semiring.fold_triangle(x[i] for i in range(tree.n) if mask >> i & 1))
    return semiring.fold_nabla(terms)


def eval_bottom_up_semiring(tree: AttackTree, semiring: Semiring, x: Sequence):
    """Fold ``∇`` at OR gates and ``△`` at AND gates, once per edge."""
    _check_arity(tree, x)
    check_valid(tree)
    val = {}
    for v in tree.postorder:
        g = tree.gates[v]
        if g is Gate.BAS:
            val[v] = x[tree.anchor_of[v]]
        elif g is Gate.OR:
            val[v] = semiring.fold_nabla(val[c] for c in tree.children[v])
        else:
            val[v] = semiring.fold_triangle(val[c] for c in tree.children[v])
    return val[tree.root]


# -- metric bundles ------------------------------------------------------------------


@dataclass(frozen=True)
class Metric:
    """A metric ``φ`` together with its gate operators and BDD plugin."""

    name: str
    evaluate: Callable[[AttackTree, Sequence], Any]
    or_op: Optional[Callable[[Sequence], Any]] = None
    and_op: Optional[Callable[[Sequence], Any]] = None
    propositional: bool = False
    merge_invariant: bool = False
    plugin: Optional[tuple] = None
    parse_value: Callable[[str], Any] = parse_number
    sample_value: Callable[[random.Random], Any] = _sample_cost
    tolerance: float = 0.0
    semiring: Optional[Semiring] = None

    def __call__(self, tree: AttackTree, x: Sequence):
        return self.evaluate(tree, x)

    def close(self, a, b) -> bool:
        if self.tolerance == 0:
            return a == b
        return abs(a - b) <= self.tolerance


def _sample_prob(rng: random.Random) -> float:
    return rng.random()


def _tap_or(p):
    q = 1.0
    for pi in p:
        q *= 1.0 - pi
    return 1.0 - q


def _tap_and(p):
    q = 1.0
    for pi in p:
        q *= pi
    return q


def structure_metric() -> Metric:
    return Metric(
        "struct",
        eval_structure_metric,
        or_op=any,
        and_op=all,
        propositional=True,
        merge_invariant=True,
        plugin=semiring_plugin(SAT),
        parse_value=parse_bool,
        sample_value=_sample_bool,
    )


def tap_metric() -> Metric:
    return Metric(
        "tap",
        eval_tap,
        or_op=_tap_or,
        and_op=_tap_and,
        propositional=True,
        merge_invariant=False,
        plugin=tap_plugin(),
        parse_value=float,
        sample_value=_sample_prob,
        tolerance=1e-12,
    )


def propositional_metric(semiring: Semiring) -> Metric:
    try:
        plugin = semiring_plugin(semiring)
    except ValueError:
        plugin = None
    return Metric(
        semiring.name,
        lambda tree, x: eval_propositional_semiring(tree, semiring, x),
        or_op=semiring.fold_nabla,
        and_op=semiring.fold_triangle,
        propositional=True,
        # merging BASs is invisible exactly when a repeated △-argument collapses
        merge_invariant=semiring.idempotent_triangle,
        plugin=plugin,
        parse_value=semiring.parse,
        sample_value=semiring.sample,
        semiring=semiring,
    )


def bottom_up_metric(semiring: Semiring) -> Metric:
    return Metric(
        f"bu-{semiring.name}",
        lambda tree, x: eval_bottom_up_semiring(tree, semiring, x),
        or_op=semiring.fold_nabla,
        and_op=semiring.fold_triangle,
        propositional=False,
        merge_invariant=True,
        parse_value=semiring.parse,
        sample_value=semiring.sample,
        semiring=semiring,
    )


METRICS = {
    m.name: m
    for m in [
        structure_metric(),
        tap_metric(),
        *(propositional_metric(s) for s in builtin_semirings()),
        *(bottom_up_metric(s) for s in builtin_semirings()),
    ]
}


def get_metric(name: str) -> Metric:
    try:
        return METRICS[name]
    except KeyError:
        raise KeyError(f"unknown metric {name!r}; known: {', '.join(sorted(METRICS))}") from None
