import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atcalc.canon import canonical_form
from atcalc.dsl import DslError, format_tree, parse, print_document, read_values, try_parse
from atcalc.generators import random_adt, random_dag, random_dat

BANK = """
# rob a bank
at bank {
  r = OR(f, s)
  s = AND(b, l)
  f: bas
  b: bas
  l: bas
}
"""


def test_bank_document():
    doc = parse(BANK)
    assert doc.kind == "at" and doc.name == "bank"
    assert len(doc.tree.gates) == 5
    assert doc.tree.bas_names == ["f", "b", "l"]


def test_headerless_and_parallel_edges():
    doc = parse("r = OR(a, a)\na: bas\n")
    assert doc.tree.edge_count == 2 and doc.tree.n == 1


def test_unknown_child_span():
    _, diags = try_parse("at t {\n  r = OR(x)\n}\n")
    (d,) = diags
    assert d.kind == "linking" and "x" in d.message
    assert (d.span.line, d.span.col) == (2, 10)


def test_syntax_error_has_expected_set():
    _, diags = try_parse("at t {\n  r = OR(a b)\n  a: bas\n  b: bas\n}\n")
    assert diags[0].expected == ("','", "')'")
    assert diags[0].span.line == 2


def test_multiple_errors_reported():
    _, diags = try_parse("at t {\n  r = XOR(a)\n  a: leaf\n  $\n}\n")
    kinds = [d.kind for d in diags]
    assert kinds.count("syntax") == 2 and "lexical" in kinds


@pytest.mark.parametrize(
    "src, word",
    [
        ("r = OR(a)\nr = AND(a)\na: bas\n", "duplicate"),
        ("r = OR(a)\ns = OR(a)\na: bas\n", "root"),
        ("r = OR(s)\ns = OR(r)\n", "cycle"),
        ("at t { r = SAND(a, b)\n a: bas\n b: bas }", "SAND"),
        ("dat t { r = C(a, b)\n a: bas\n b: bas }", "C"),
        ("at t { r@p = OR(a)\n a: bas }", "color"),
        ("adt t { r = OR(a, b)\n a: bas\n b@o: bas }", "other color"),
        ("at t {\n r = OR(a)\n a: bas\n", "'}'"),
        ("", "no nodes"),
    ],
)
def test_diagnostics(src, word):
    doc, diags = try_parse(src)
    assert doc is None and diags
    assert any(word in d.message for d in diags), [str(d) for d in diags]
    with pytest.raises(DslError):
        parse(src)


def test_bytes_input():
    assert parse(BANK.encode()).tree.n == 3
    _, diags = try_parse(b"\xff\xfe")
    assert diags[0].kind == "lexical"


def test_adt_colors_default_to_p():
    doc = parse("adt t {\n r = C(a, b)\n a: bas\n b@o: bas\n}")
    assert doc.tree.colors == ("p", "p", "o")


def _round_trip(tree, kind):
    text = format_tree(tree, kind, "t")
    doc = parse(text)
    assert canonical_form(doc.tree) == canonical_form(tree)
    assert print_document(doc) == text
    assert print_document(parse(print_document(doc))) == text


def test_round_trip_500_trees():
    rng = random.Random(0)
    for i in range(500):
        kind = ("at", "dat", "adt")[i % 3]
        tree = {"at": random_dag, "dat": random_dat, "adt": random_adt}[kind](rng)
        _round_trip(tree, kind)


def test_format_deduplicates_names():
    from atcalc.tree import AttackTree

    t = AttackTree(("OR", "BAS", "BAS"), ((1, 2), (), ()), names=("x", "a", "a"))
    doc = parse(format_tree(t))
    assert doc.tree.bas_names == ["a", "a_2"]


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet=st.sampled_from(list("atdOR ANDSC(),=:@{}#\nbasxyzpo;_1")), max_size=80))
def test_fuzz_never_crashes(text):
    doc, diags = try_parse(text)
    assert (doc is None) == bool(diags)
    for d in diags:
        assert d.span.line >= 1 and d.span.col >= 1


def test_read_values():
    doc = parse(BANK)
    assert read_values("name,value\nf,100\nb,inf\n# c\nl,30\n", doc.tree, float) == [100, float("inf"), 30]
    with pytest.raises(ValueError, match="no value"):
        read_values("f,1\n", doc.tree, float)
    with pytest.raises(ValueError, match="unknown"):
        read_values("f,1\nb,1\nl,1\nq,1\n", doc.tree, float)
    with pytest.raises(ValueError, match="bad value"):
        read_values("f,x\n", doc.tree, float)


@pytest.mark.parametrize("src", ["at t x {\n r = OR(a)\n a: bas\n}\n", "dat t ;\n", "adt t OR( {\n}\n", "at t"])
def test_bad_header_is_a_diagnostic(src):
    doc, diags = try_parse(src)
    assert doc is None and diags
