"""Command line front end: ``atcalc eval|compose|canon|decompose|bdd``.

Exit codes: 0 success, 2 invalid input (syntax, structure, values),
3 algorithm and metric do not fit together.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .bdd import bdd_bu_values, build_robdd, order_from_sequence
from .bu import bu_trace
from .canon import canonical_form
from .dsl import DslError, format_tree, parse, read_values
from .extensions import ADT_MINCOST, MINTIME, adt_bottom_up, adt_compose, dat_bottom_up, dat_compose
from .metrics import METRICS, get_metric
from .operad import format_decomposition, identity, prime_decompose, star
from .tree import EnumerationCapError, InvalidTreeError

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_INCOMPATIBLE = 0, 2, 3
KIND_METRICS = {"dat": {"mintime"}, "adt": {"adt-mincost"}}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _json_value(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if hasattr(v, "item"):
        return _json_value(v.item())
    return v


def _load(path: str):
    try:
        text = Path(path).read_bytes()
    except OSError as e:
        raise CliError(f"{path}: {e.strerror}", EXIT_INVALID) from None
    try:
        return parse(text)
    except DslError as e:
        raise CliError("\n".join(f"{path}:{d}" for d in e.diagnostics), EXIT_INVALID) from None


def _parse_order(text: str, tree) -> tuple:
    """``--order`` lists BASs top first, by name or 1-based anchor index."""
    names = tree.bas_names
    seq = []
    for item in text.split(","):
        item = item.strip()
        if item in names:
            seq.append(names.index(item))
        elif item.isdigit() and 1 <= int(item) <= tree.n:
            seq.append(int(item) - 1)
        else:
            raise CliError(f"--order: unknown BAS {item!r}", EXIT_INVALID)
    if len(seq) != tree.n:
        raise CliError(f"--order: expected all {tree.n} BASs, got {len(seq)}", EXIT_INVALID)
    try:
        return order_from_sequence(seq)
    except ValueError as e:
        raise CliError(f"--order: {e}", EXIT_INVALID) from None


# -- eval ----------------------------------------------------------------------------


def _metric_for(doc, name: str):
    if doc.kind in KIND_METRICS:
        if name not in KIND_METRICS[doc.kind]:
            want = ", ".join(sorted(KIND_METRICS[doc.kind]))
            raise CliError(f"{doc.kind} documents support metric {want}, not {name!r}", EXIT_INCOMPATIBLE)
        return None
    if name in ("mintime", "adt-mincost"):
        raise CliError(f"metric {name} needs a {'dat' if name == 'mintime' else 'adt'} document", EXIT_INCOMPATIBLE)
    try:
        return get_metric(name)
    except KeyError as e:
        raise CliError(str(e.args[0]), EXIT_INVALID) from None


def _read_values(args, tree, parse_value, opponent_default=False):
    if args.values is None:
        raise CliError("--values is required", EXIT_INVALID)
    try:
        text = Path(args.values).read_text()
        return read_values(text, tree, parse_value, opponent_default)
    except OSError as e:
        raise CliError(f"{args.values}: {e.strerror}", EXIT_INVALID) from None
    except ValueError as e:
        raise CliError(f"{args.values}: {e}", EXIT_INVALID) from None


def _run_algo(algo, metric, tree, x, order, want_trace):
    """Value, extra fields and trace for one algorithm."""
    extra = {}
    trace = None
    if algo == "enum":
        value = metric.evaluate(tree, x)
    elif algo == "bu":
        t = bu_trace(tree, metric, x)
        value = t.value
        trace = [{"node": tree.name(v), "gate": tree.gates[v].value, "value": _json_value(t.values[v])} for v in t.order]
    else:
        if metric.plugin is None:
            why = "it is not propositional" if not metric.propositional else "its semiring is not absorbing"
            raise CliError(f"metric {metric.name} cannot be computed on a BDD: {why}", EXIT_INCOMPATIBLE)
        b = build_robdd(tree, order)
        g, z0, z1 = metric.plugin
        vals = bdd_bu_values(b, g, z0, z1, x)
        value = vals[b.root]
        extra["bdd_size"] = b.size
        names = tree.bas_names
        trace = [{"node": 0, "terminal": 0, "value": _json_value(z0)}, {"node": 1, "terminal": 1, "value": _json_value(z1)}]
        for u in range(2, len(b.nodes)):
            var, lo, hi = b.nodes[u]
            trace.append(
                {"node": u, "var": var + 1, "bas": names[var], "lo": lo, "hi": hi, "value": _json_value(vals[u])}
            )
    return value, extra, (trace if want_trace else None)


def _eval_one(path: str, args) -> dict:
    doc = _load(path)
    tree = doc.tree
    metric = _metric_for(doc, args.metric)
    out = {"schema": SCHEMA, "file": path, "kind": doc.kind, "metric": args.metric, "algo": args.algo}
    out["nodes"] = len(tree.gates)
    out["bas"] = tree.n
    if metric is None:
        if args.algo != "bu":
            raise CliError(f"{doc.kind} metrics are bottom-up only; use --algo bu", EXIT_INCOMPATIBLE)
        if doc.kind == "dat":
            x = _read_values(args, tree, MINTIME.base.parse)
            value = dat_bottom_up(tree, MINTIME, x)
        else:
            x = _read_values(args, tree, ADT_MINCOST.parse, opponent_default=True)
            value = adt_bottom_up(tree, ADT_MINCOST, x)
        out["value"] = _json_value(value)
        return out
    x = _read_values(args, tree, metric.parse_value)
    order = _parse_order(args.order, tree) if args.order else None
    try:
        value, extra, trace = _run_algo(args.algo, metric, tree, x, order, args.trace)
        out["value"] = _json_value(value)
        out.update(extra)
        if trace is not None:
            out["trace"] = trace
        if args.compare:
            results = {args.algo: value}
            for other in ("enum", "bu", "bdd"):
                if other == args.algo:
                    continue
                try:
                    results[other] = _run_algo(other, metric, tree, x, order, False)[0]
                except CliError:
                    continue
            ref = results.get("enum", value)
            out["comparison"] = {k: _json_value(v) for k, v in results.items()}
            out["agree"] = all(metric.close(v, ref) for v in results.values())
    except EnumerationCapError as e:
        raise CliError(str(e), EXIT_INCOMPATIBLE) from None
    except InvalidTreeError as e:
        raise CliError(str(e), EXIT_INVALID) from None
    except ValueError as e:
        raise CliError(str(e), EXIT_INVALID) from None
    return out


def cmd_eval(args) -> int:
    def job(path):
        try:
            return path, _eval_one(path, args), None
        except CliError as e:
            return path, None, e

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(job, args.files))
    code = EXIT_OK
    for path, out, err in results:
        if err is not None:
            print(str(err), file=sys.stderr)
            code = max(code, err.code)
        else:
            print(json.dumps(out, ensure_ascii=False))
    return code


# -- the other commands ----------------------------------------------------------------


def cmd_compose(args) -> int:
    doc = _load(args.outer)
    tree = doc.tree
    names = tree.bas_names
    parts = [identity(tree.color(v)) for v in tree.anchors]
    subs = {}
    for item in args.sub:
        if "=" not in item:
            raise CliError(f"--sub expects NAME=FILE, got {item!r}", EXIT_INVALID)
        name, path = item.split("=", 1)
        if name not in names:
            raise CliError(f"--sub: {name!r} is not a BAS of {args.outer}", EXIT_INVALID)
        sub = _load(path)
        if sub.kind != doc.kind and not (doc.kind == "dat" and sub.kind == "at"):
            raise CliError(f"cannot substitute a {sub.kind} tree into a {doc.kind} tree", EXIT_INVALID)
        subs[name] = sub.tree
    try:
        if doc.kind == "adt":
            # one substitution at a time keeps the color check local
            for name, sub in subs.items():
                v = tree.anchors[tree.bas_names.index(name)]
                tree = adt_compose(tree, v, sub)
        else:
            for name, sub in subs.items():
                parts[names.index(name)] = sub
            tree = dat_compose(tree, parts) if doc.kind == "dat" else star(tree, parts)
    except (ValueError, InvalidTreeError) as e:
        raise CliError(str(e), EXIT_INVALID) from None
    sys.stdout.write(format_tree(tree, doc.kind, doc.name))
    return EXIT_OK


def cmd_canon(args) -> int:
    doc = _load(args.file)
    sys.stdout.write(canonical_form(doc.tree).decode() + "\n")
    return EXIT_OK


def cmd_decompose(args) -> int:
    doc = _load(args.file)
    if doc.kind != "at":
        raise CliError("prime decomposition is defined for plain attack trees", EXIT_INCOMPATIBLE)
    sys.stdout.write(format_decomposition(prime_decompose(doc.tree)) + "\n")
    return EXIT_OK


def cmd_bdd(args) -> int:
    doc = _load(args.file)
    if doc.kind != "at":
        raise CliError("BDDs are built for plain attack trees", EXIT_INCOMPATIBLE)
    tree = doc.tree
    order = _parse_order(args.order, tree) if args.order else None
    try:
        b = build_robdd(tree, order)
    except InvalidTreeError as e:
        raise CliError(str(e), EXIT_INVALID) from None
    if args.json:
        sys.stdout.write(b.to_json(tree.bas_names) + "\n")
    else:
        sys.stdout.write(b.to_dot(tree.bas_names))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="atcalc", description="Attack tree metrics, composition and BDD analysis.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a metric on one or more tree files")
    e.add_argument("files", nargs="+", metavar="FILE")
    e.add_argument("--metric", required=True, help=f"one of {', '.join(sorted(METRICS))}, mintime, adt-mincost")
    e.add_argument("--algo", choices=("bu", "bdd", "enum"), default="enum")
    e.add_argument("--values", metavar="CSV", help="name,value rows; 'inf' for infinity")
    e.add_argument("--order", help="BDD variable order, top first: BAS names or 1-based indices")
    e.add_argument("--trace", action="store_true", help="include per-node values")
    e.add_argument("--compare", action="store_true", help="also run the other algorithms and report agreement")
    e.add_argument("--jobs", type=int, default=1, help="evaluate files concurrently")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("compose", help="substitute trees for BASs and print the result")
    c.add_argument("outer")
    c.add_argument("--sub", action="append", default=[], metavar="NAME=FILE")
    c.set_defaults(func=cmd_compose)

    k = sub.add_parser("canon", help="print the canonical serialization")
    k.add_argument("file")
    k.set_defaults(func=cmd_canon)

    d = sub.add_parser("decompose", help="print a prime decomposition")
    d.add_argument("file")
    d.set_defaults(func=cmd_decompose)

    b = sub.add_parser("bdd", help="dump the ROBDD of the structure function")
    b.add_argument("file")
    fmt = b.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="DOT output (default)")
    fmt.add_argument("--json", action="store_true")
    b.add_argument("--order", help="variable order, top first")
    b.set_defaults(func=cmd_bdd)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(str(e), file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
