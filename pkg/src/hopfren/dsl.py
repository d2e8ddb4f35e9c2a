"""Text format for theories and graphs, plus the JSON graph schema.

    theory phi3 { dimension 6; valence 3; }
    graph B1 : phi3 { vertices a b; edge a b; edge a b; leg a; leg b; }

Repeated ``edge`` lines give multi-edges; ``#`` starts a comment. Legs are
labelled l1, l2, ... in declaration order. The parser never raises: it
collects every problem it can find as a ``Diagnostic`` with a source
position.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .graphs import FeynmanGraph, GraphValidationError, TheoryConfig

_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<sym>[{};:])|(?P<bad>.)")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = {"theory", "graph", "dimension", "valence", "vertices", "edge", "leg"}


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.col}: {self.message}"


@dataclass
class ParseResult:
    theories: list[TheoryConfig] = field(default_factory=list)
    graphs: list[FeynmanGraph] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


class _Syntax(Exception):
    def __init__(self, tok: _Tok, message: str):
        self.tok = tok
        self.message = message


def _tokenize(text: str, diags: list[Diagnostic]) -> list[_Tok]:
    toks = []
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        col = m.start() - line_start + 1
        if kind == "bad":
            diags.append(Diagnostic(line, col, f"unexpected character {m.group()!r}"))
        elif kind:
            toks.append(_Tok(kind, m.group(), line, col))
        nl = m.group().count("\n")
        if nl:
            line += nl
            line_start = m.start() + m.group().rfind("\n") + 1
    toks.append(_Tok("eof", "", line, len(text) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, known: dict[str, TheoryConfig] | None):
        self.result = ParseResult()
        self.toks = _tokenize(text, self.result.diagnostics)
        self.i = 0
        self.theories: dict[str, TheoryConfig] = dict(known or {})
        self.graph_names: set[str] = set()

    def error(self, tok: _Tok, message: str):
        self.result.diagnostics.append(Diagnostic(tok.line, tok.col, message))

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text:
            raise _Syntax(self.tok, f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def ident(self, what: str) -> _Tok:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise _Syntax(t, f"expected {what}, found {t.text or 'end of input'!r}")
        return self.next()

    def integer(self, what: str) -> int:
        t = self.tok
        if t.kind != "int":
            raise _Syntax(t, f"expected integer {what}, found {t.text or 'end of input'!r}")
        self.next()
        return int(t.text)

    def recover(self):
        """Skip to the next top-level declaration."""
        depth = 0
        while self.tok.kind != "eof":
            if self.tok.text == "{":
                depth += 1
            elif self.tok.text == "}":
                depth -= 1
                if depth <= 0:
                    self.next()
                    return
            elif depth == 0 and self.tok.text in ("theory", "graph") and self.i > 0:
                return
            self.next()

    def run(self) -> ParseResult:
        while self.tok.kind != "eof":
            start = self.i
            try:
                if self.tok.text == "theory":
                    self.theory()
                elif self.tok.text == "graph":
                    self.graph()
                else:
                    raise _Syntax(self.tok, f"expected 'theory' or 'graph', found {self.tok.text!r}")
            except _Syntax as e:
                self.error(e.tok, e.message)
                if self.i == start:
                    self.next()
                self.recover()
        return self.result

    def theory(self):
        kw = self.expect("theory")
        name = self.ident("theory name")
        self.expect("{")
        self.expect("dimension")
        dim = self.integer("dimension")
        self.expect(";")
        self.expect("valence")
        val = self.integer("valence")
        self.expect(";")
        self.expect("}")
        if name.text in self.theories:
            self.error(name, f"theory {name.text!r} declared twice")
            return
        try:
            th = TheoryConfig(name.text, dim, val)
        except ValueError as e:
            self.error(kw, str(e))
            return
        self.theories[name.text] = th
        self.result.theories.append(th)

    def graph(self):
        self.expect("graph")
        name = self.ident("graph name")
        self.expect(":")
        theory = self.ident("theory name")
        self.expect("{")
        self.expect("vertices")
        vertices: dict[str, _Tok] = {}
        while self.tok.text != ";":
            v = self.ident("vertex name")
            if v.text in vertices:
                self.error(v, f"vertex {v.text!r} declared twice")
            vertices.setdefault(v.text, v)
        self.expect(";")
        edges, legs = [], []
        ok = True
        while self.tok.text == "edge":
            self.next()
            a, b = self.ident("vertex name"), self.ident("vertex name")
            self.expect(";")
            for t in (a, b):
                if t.text not in vertices:
                    self.error(t, f"edge uses undeclared vertex {t.text!r}")
                    ok = False
            edges.append((a.text, b.text))
        while self.tok.text == "leg":
            self.next()
            v = self.ident("vertex name")
            self.expect(";")
            if v.text not in vertices:
                self.error(v, f"leg attached to undeclared vertex {v.text!r}")
                ok = False
            legs.append((f"l{len(legs) + 1}", v.text))
        self.expect("}")
        if name.text in self.graph_names:
            self.error(name, f"graph {name.text!r} declared twice")
            ok = False
        self.graph_names.add(name.text)
        if theory.text not in self.theories:
            self.error(theory, f"unknown theory {theory.text!r}")
            ok = False
        if not ok:
            return
        try:
            g = FeynmanGraph(self.theories[theory.text], tuple(vertices), tuple(edges), tuple(legs), name.text)
        except GraphValidationError as e:
            for issue in e.issues:
                first = issue.subject.split()[0] if issue.subject else ""
                where = vertices.get(first, name)
                self.error(where, f"graph {name.text}: {issue}")
            return
        self.result.graphs.append(g)


def parse_graph_dsl(text: str, theories: dict[str, TheoryConfig] | None = None) -> ParseResult:
    """Parse ``text``; ``theories`` pre-declares theories usable by graphs."""
    try:
        return _Parser(text, theories).run()
    except Exception as e:  # parsing is total: report, never raise
        return ParseResult(diagnostics=[Diagnostic(0, 0, f"internal parser error: {e}")])


def _safe_names(names: list[str], prefix: str) -> dict[str, str]:
    if all(_IDENT.match(n) and n not in KEYWORDS for n in names):
        return {n: n for n in names}
    return {n: f"{prefix}{i + 1}" for i, n in enumerate(names)}


def serialize_graphs(graphs: list[FeynmanGraph]) -> str:
    """DSL text for ``graphs`` and their theories. Vertex names that are not
    identifiers are replaced; leg labels are not kept."""
    lines = []
    done = set()
    for g in graphs:
        th = g.theory
        if th.name not in done:
            done.add(th.name)
            lines.append(f"theory {th.name} {{ dimension {th.dimension}; valence {th.valence}; }}")
    for n, g in enumerate(graphs):
        rename = _safe_names(list(g.vertices), "v")
        name = g.name if _IDENT.match(g.name or "") and g.name not in KEYWORDS else f"G{n + 1}"
        body = ["vertices " + " ".join(rename[v] for v in g.vertices) + ";"]
        body += [f"edge {rename[a]} {rename[b]};" for a, b in g.edges]
        body += [f"leg {rename[v]};" for _, v in g.legs]
        lines.append(f"graph {name} : {g.theory.name} {{")
        lines += ["  " + b for b in body]
        lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: FeynmanGraph) -> dict:
    return {
        "theory": g.theory.name,
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.edges],
        "legs": [list(x) for x in g.legs],
    }


def graph_from_json(data: dict, theories: dict[str, TheoryConfig], name: str = "") -> FeynmanGraph:
    """Build a graph from the JSON schema; raises GraphValidationError or
    KeyError on bad input."""
    th = theories[data["theory"]]
    return FeynmanGraph(
        th, tuple(data["vertices"]), tuple(tuple(e) for e in data["edges"]),
        tuple(tuple(x) for x in data.get("legs", [])), data.get("name", name),
    )


def load_json_graphs(text: str, theories: dict[str, TheoryConfig]) -> ParseResult:
    """A JSON file holds one graph object, a list of them, or a mapping
    name -> graph object. Errors become diagnostics."""
    result = ParseResult()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        result.diagnostics.append(Diagnostic(e.lineno, e.colno, f"invalid JSON: {e.msg}"))
        return result
    if isinstance(data, dict) and "vertices" not in data:
        items = list(data.items())
    elif isinstance(data, dict):
        items = [(data.get("name", "G1"), data)]
    elif isinstance(data, list):
        items = [(d.get("name", f"G{i + 1}") if isinstance(d, dict) else f"G{i + 1}", d) for i, d in enumerate(data)]
    else:
        result.diagnostics.append(Diagnostic(1, 1, "expected a graph object or a list of them"))
        return result
    for name, d in items:
        try:
            result.graphs.append(graph_from_json(d, theories, name))
        except GraphValidationError as e:
            result.diagnostics += [Diagnostic(0, 0, f"graph {name}: {i}") for i in e.issues]
        except KeyError as e:
            result.diagnostics.append(Diagnostic(0, 0, f"graph {name}: missing or unknown {e}"))
        except (TypeError, ValueError, AttributeError) as e:
            result.diagnostics.append(Diagnostic(0, 0, f"graph {name}: malformed ({e})"))
    return result
