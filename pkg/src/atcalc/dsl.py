"""Text format for attack trees.

::

    # comments run to the end of the line
    at bank {
      r = OR(f, s)
      s = AND(b, l)
      f: bas
      b: bas
      l: bas
    }

The header is ``at``, ``dat`` or ``adt`` followed by a name; it may be
omitted, in which case the body is a plain AT.  ``dat`` allows ``SAND``
(child order significant), ``adt`` allows ``C(main, counter)`` and color
annotations ``id@p`` / ``id@o`` (default ``p``).  Repeating a child gives
parallel edges.  The order of ``: bas`` declarations is the anchoring.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Optional

from .extensions import validate_adt, validate_dat
from .tree import AttackTree, Gate, validate

__all__ = [
    "Span",
    "Diagnostic",
    "DslError",
    "Decl",
    "TreeDocument",
    "parse",
    "try_parse",
    "print_document",
    "format_tree",
    "read_values",
]

KINDS = ("at", "dat", "adt")
GATES = {"OR": Gate.OR, "AND": Gate.AND, "SAND": Gate.SAND, "C": Gate.C}
ALLOWED = {
    "at": (Gate.OR, Gate.AND, Gate.BAS),
    "dat": (Gate.OR, Gate.AND, Gate.SAND, Gate.BAS),
    "adt": (Gate.OR, Gate.AND, Gate.C, Gate.BAS),
}


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    message: str
    span: Span
    expected: tuple = ()
    kind: str = "syntax"

    def __str__(self) -> str:
        text = f"{self.span}: {self.kind} error: {self.message}"
        if self.expected:
            text += f" (expected {' or '.join(self.expected)})"
        return text


class DslError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Decl:
    name: str
    gate: Gate
    children: tuple = ()
    color: Optional[str] = None
    span: Optional[Span] = field(default=None, compare=False)
    child_spans: tuple = field(default=(), compare=False)


@dataclass
class TreeDocument:
    kind: str
    name: str
    decls: list
    tree: AttackTree
    span: Optional[Span] = field(default=None, compare=False)


# -- lexer ------------------------------------------------------------------------

_TOKENS = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[=(),:@{};])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident, punct, eof
    text: str
    span: Span


def _lex(text: str):
    toks, diags = [], []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if m is None:
            ch = text[pos]
            diags.append(Diagnostic(f"unexpected character {ch!r}", Span(line, col, line, col + 1), kind="lexical"))
            pos += 1
            col += 1
            continue
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in ("ident", "punct"):
                toks.append(_Tok(kind, s, Span(line, col, line, col + len(s))))
            col += len(s)
        pos = m.end()
    toks.append(_Tok("eof", "", Span(line, col, line, col)))
    return toks, diags


# -- parser ---------------------------------------------------------------------


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0
        self.diags = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text == text

    def fail(self, expected, message=None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise _SyntaxError(Diagnostic(message or f"unexpected {found}", t.span, tuple(expected)))

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.fail([repr(text)])
        return self.advance()

    def ident(self, what="identifier") -> _Tok:
        if self.tok.kind != "ident":
            self.fail([what])
        return self.advance()

    def recover(self, line: int) -> None:
        # skip to the first token on a later line (or a closing brace)
        while self.tok.kind != "eof" and self.tok.span.line <= line and not self.at("}"):
            self.advance()

    def document(self):
        kind, name, span = "at", "tree", self.tok.span
        braced = False
        if self.tok.kind == "ident" and self.tok.text in KINDS and self.toks[self.i + 1].kind == "ident":
            kind = self.advance().text
            name = self.advance().text
            braced = True
            try:
                self.expect("{")
            except _SyntaxError as e:
                self.diags.append(e.diag)
                # resume after the opening brace if there is one on this line
                line = self.tok.span.line
                while self.tok.kind != "eof" and self.tok.span.line == line and not self.at("{"):
                    self.advance()
                if self.at("{"):
                    self.advance()
        decls = []
        while True:
            if self.tok.kind == "eof":
                if braced:
                    self.diags.append(Diagnostic("missing '}'", self.tok.span, ("'}'",)))
                break
            if braced and self.at("}"):
                self.advance()
                if self.tok.kind != "eof":
                    self.diags.append(Diagnostic("text after end of tree", self.tok.span, ("end of input",)))
                break
            if self.at(";"):
                self.advance()
                continue
            start, before = self.tok.span.line, self.i
            try:
                decls.append(self.decl())
            except _SyntaxError as e:
                self.diags.append(e.diag)
                self.recover(start)
                if self.i == before:
                    self.advance()
        return kind, name, decls, span

    def decl(self) -> Decl:
        first = self.tok
        name = self.ident("node name").text
        color = None
        if self.at("@"):
            self.advance()
            c = self.ident("'p' or 'o'")
            if c.text not in ("p", "o"):
                raise _SyntaxError(Diagnostic(f"unknown color {c.text!r}", c.span, ("'p'", "'o'")))
            color = c.text
        if self.at(":"):
            self.advance()
            t = self.ident("'bas'")
            if t.text.lower() != "bas":
                raise _SyntaxError(Diagnostic(f"unknown declaration {t.text!r}", t.span, ("'bas'",)))
            return Decl(name, Gate.BAS, (), color, _join(first.span, t.span))
        if not self.at("="):
            self.fail(["'='", "':'", "'@'"])
        self.advance()
        g = self.ident("gate (OR, AND, SAND, C)")
        gate = GATES.get(g.text.upper())
        if gate is None:
            raise _SyntaxError(Diagnostic(f"unknown gate {g.text!r}", g.span, ("OR", "AND", "SAND", "C")))
        self.expect("(")
        kids, spans = [], []
        while True:
            c = self.ident("child name")
            kids.append(c.text)
            spans.append(c.span)
            if self.at(","):
                self.advance()
                continue
            if self.at(")"):
                end = self.advance()
                break
            self.fail(["','", "')'"])
        return Decl(name, gate, tuple(kids), color, _join(first.span, end.span), tuple(spans))


class _SyntaxError(Exception):
    def __init__(self, diag):
        self.diag = diag


def _join(a: Span, b: Span) -> Span:
    return Span(a.line, a.col, b.end_line, b.end_col)


# -- linking -----------------------------------------------------------------------


def _link(kind: str, decls: list, doc_span: Span):
    diags = []
    index = {}
    for d in decls:
        if d.name in index:
            first = decls[index[d.name]]
            diags.append(
                Diagnostic(f"duplicate definition of {d.name!r} (first at {first.span})", d.span, kind="linking")
            )
        else:
            index[d.name] = len(index)
    uniq = []
    seen = set()
    for d in decls:
        if d.name not in seen:
            seen.add(d.name)
            uniq.append(d)
    for d in uniq:
        if d.color is not None and kind != "adt":
            diags.append(Diagnostic("color annotations are only allowed in adt documents", d.span, kind="linking"))
        if d.gate not in ALLOWED[kind]:
            diags.append(Diagnostic(f"gate {d.gate.value} is not allowed in {kind} documents", d.span, kind="linking"))
        for c, s in zip(d.children, d.child_spans):
            if c not in index:
                diags.append(Diagnostic(f"unknown node {c!r}", s, kind="linking"))
    if not uniq:
        diags.append(Diagnostic("document declares no nodes", doc_span, kind="linking"))
    if diags:
        return None, diags
    gates = tuple(d.gate for d in uniq)
    children = tuple(tuple(index[c] for c in d.children) for d in uniq)
    anchors = tuple(i for i, d in enumerate(uniq) if d.gate is Gate.BAS)
    names = tuple(d.name for d in uniq)
    colors = tuple(d.color or "p" for d in uniq) if kind == "adt" else None
    tree = AttackTree(gates, children, anchors, names, colors)
    if kind == "adt":
        violations = validate_adt(tree)
    elif kind == "dat":
        violations = validate_dat(tree)
    else:
        violations = validate(tree)
    for v in violations:
        span = uniq[v.nodes[0]].span if v.nodes and 0 <= v.nodes[0] < len(uniq) else doc_span
        diags.append(Diagnostic(v.message, span, kind="linking"))
    return (None if diags else tree), diags


def try_parse(text) -> tuple:
    """``(document or None, diagnostics)``; never raises on bad input."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            return None, [Diagnostic(f"input is not UTF-8 ({e.reason})", Span(1, 1, 1, 1), kind="lexical")]
    toks, diags = _lex(text)
    p = _Parser(toks)
    kind, name, decls, span = p.document()
    diags += p.diags
    if diags:
        return None, diags
    tree, diags = _link(kind, decls, span)
    if diags:
        return None, diags
    return TreeDocument(kind, name, decls, tree, span), []


def parse(text) -> TreeDocument:
    doc, diags = try_parse(text)
    if diags:
        raise DslError(diags)
    return doc


# -- printing --------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _node_names(tree: AttackTree) -> list:
    used = set()
    out = []
    for v in range(len(tree.gates)):
        base = tree.names[v] if tree.names and tree.names[v] else tree.name(v)
        if not _IDENT.match(base) or base in KINDS:
            base = f"n{v}"
        name, k = base, 2
        while name in used:
            name = f"{base}_{k}"
            k += 1
        used.add(name)
        out.append(name)
    return out


def format_tree(tree: AttackTree, kind: str = "at", name: str = "tree") -> str:
    """Source text for ``tree``; gates top-down from the root, then BASs in anchor order."""
    names = _node_names(tree)
    order = []
    seen = set()
    stack = [tree.root]
    while stack:
        v = stack.pop()
        if v in seen or tree.is_bas(v):
            continue
        seen.add(v)
        order.append(v)
        stack.extend(reversed(tree.children[v]))

    def head(v):
        return names[v] + (f"@{tree.color(v)}" if kind == "adt" and tree.color(v) else "")

    lines = [f"{kind} {name} {{"]
    for v in order:
        kids = ", ".join(names[c] for c in tree.children[v])
        lines.append(f"  {head(v)} = {tree.gates[v].value}({kids})")
    for v in tree.anchors:
        lines.append(f"  {head(v)}: bas")
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_document(doc: TreeDocument) -> str:
    return format_tree(doc.tree, doc.kind, doc.name)


# -- values ----------------------------------------------------------------------


def read_values(text: str, tree: AttackTree, parse_value, allow_missing_opponent: bool = False) -> list:
    """Values in anchor order from ``name,value`` CSV rows.

    Blank lines and ``#`` comments are skipped, as is a ``name,value``
    header.  With ``allow_missing_opponent``, opponent BASs without a row get
    ``None`` (the caller supplies the default).
    """
    rows = {}
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, 1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise ValueError(f"values line {lineno}: expected 'name,value'")
        key, raw = row[0].strip(), row[1].strip()
        if lineno == 1 and key.lower() == "name" and raw.lower() == "value":
            continue
        if key in rows:
            raise ValueError(f"values line {lineno}: duplicate entry for {key!r}")
        try:
            rows[key] = parse_value(raw)
        except ValueError:
            raise ValueError(f"values line {lineno}: bad value {raw!r} for {key!r}") from None
    names = tree.bas_names
    unknown = sorted(set(rows) - set(names))
    if unknown:
        raise ValueError(f"values given for unknown BASs: {', '.join(unknown)}")
    out = []
    for v, name in zip(tree.anchors, names):
        if name in rows:
            out.append(rows[name])
        elif allow_missing_opponent and tree.color(v) == "o":
            out.append(None)
        else:
            raise ValueError(f"no value for BAS {name!r}")
    return out
