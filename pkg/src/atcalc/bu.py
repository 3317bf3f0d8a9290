"""The bottom-up algorithm and executable checks of when it is correct."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .metrics import Metric
from .operad import Surjection, tau
from .tree import AttackTree, Gate, check_valid

__all__ = [
    "BuTrace",
    "bu",
    "bu_trace",
    "is_treelike",
    "Report",
    "check_treelike_theorem",
    "check_scoperad_morphism",
]


@dataclass
class BuTrace:
    value: Any
    values: dict
    order: list
    op_count: int


def bu_trace(tree: AttackTree, metric: Metric, x: Sequence) -> BuTrace:
    """Run the bottom-up algorithm, recording every node value.

    Each node is evaluated once (shared sub-DAGs are memoized, which gives
    the same result as re-entering them).  OR gates apply ``C_k`` and AND
    gates ``D_k`` to one child value per edge.
    """
    if metric.or_op is None or metric.and_op is None:
        raise ValueError(f"metric {metric.name} has no gate operators")
    if len(x) != tree.n:
        raise ValueError(f"expected {tree.n} BAS values, got {len(x)}")
    check_valid(tree)
    values = {}
    order = []
    ops = 0
    for v in tree.postorder:
        g = tree.gates[v]
        if g is Gate.BAS:
            values[v] = x[tree.anchor_of[v]]
        else:
            args = [values[c] for c in tree.children[v]]
            ops += len(args)
            values[v] = metric.or_op(args) if g is Gate.OR else metric.and_op(args)
        order.append(v)
    return BuTrace(values[tree.root], values, order, ops)


def bu(tree: AttackTree, metric: Metric, x: Sequence):
    return bu_trace(tree, metric, x).value


def is_treelike(tree: AttackTree) -> bool:
    """Every non-root node has exactly one incoming edge (counted with multiplicity)."""
    root = tree.root
    return all(len(p) == 1 for v, p in enumerate(tree.parents) if v != root)


@dataclass
class Report:
    metric: str
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.passed:
            return f"{self.metric}: no counterexample found in {self.checked} samples"
        return f"{self.metric}: {len(self.failures)} counterexamples in {self.checked} samples"


def check_treelike_theorem(
    metric: Metric, samples: Iterable, treelike_only: bool = True, oracle=None
) -> Report:
    """Compare ``bu`` against the metric's own evaluation on ``(tree, x)`` samples.

    Non-treelike samples are skipped unless ``treelike_only`` is off, in which
    case disagreements on DAGs are reported as well.
    """
    oracle = oracle or metric.evaluate
    report = Report(metric.name)
    for tree, x in samples:
        if treelike_only and not is_treelike(tree):
            continue
        report.checked += 1
        got, want = bu(tree, metric, x), oracle(tree, x)
        if not metric.close(got, want):
            report.failures.append({"tree": tree, "x": list(x), "bu": got, "eval": want})
    return report


def check_scoperad_morphism(metric: Metric, samples: Iterable) -> Report:
    """Check ``φ(τ_σ T)(x) = φ(T)(σ*x)`` on ``(tree, sigma, x)`` samples.

    ``x`` has one value per merged BAS.  Every failure is cross-checked: when
    the unmerged tree is treelike, the merged tree is a witness where ``bu``
    and the metric disagree.  Passing samples record whether ``bu`` agreed
    with the metric on the merged tree.
    """
    report = Report(metric.name)
    for tree, sigma, x in samples:
        sigma = sigma if isinstance(sigma, Surjection) else Surjection(tuple(sigma))
        merged = tau(sigma, tree)
        report.checked += 1
        lhs = metric.evaluate(merged, x)
        rhs = metric.evaluate(tree, sigma.pull(x))
        bu_merged = bu(merged, metric, x) if metric.or_op is not None else None
        if not metric.close(lhs, rhs):
            entry = {"tree": tree, "sigma": sigma.images, "x": list(x), "merged": lhs, "unmerged": rhs}
            if bu_merged is not None:
                entry["bu"] = bu_merged
                entry["bu_mismatch"] = not metric.close(bu_merged, lhs)
            report.failures.append(entry)
        elif bu_merged is not None and not metric.close(bu_merged, lhs) and is_treelike(tree):
            report.notes.append({"tree": tree, "sigma": sigma.images, "x": list(x), "bu": bu_merged, "eval": lhs})
    return report
