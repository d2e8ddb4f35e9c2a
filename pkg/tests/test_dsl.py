import json

from hypothesis import given, settings, strategies as st

from hopfren.corpus import corpus_text, corpus_theories, load_corpus
from hopfren.dsl import graph_to_json, load_json_graphs, parse_graph_dsl, serialize_graphs
from hopfren.graphs import contract

B1_TEXT = ("theory phi3 { dimension 6; valence 3; } "
           "graph B1 : phi3 { vertices v1 v2; edge v1 v2; edge v1 v2; leg v1; leg v2; }")


def test_basic_example():
    res = parse_graph_dsl(B1_TEXT)
    assert res.ok
    assert len(res.theories) == 1 and len(res.graphs) == 1
    g = res.graphs[0]
    assert g.loops == 1 and g.omega == 2
    assert g.legs == (("l1", "v1"), ("l2", "v2"))


def test_empty_input():
    res = parse_graph_dsl("")
    assert res.ok and res.theories == [] and res.graphs == []
    assert parse_graph_dsl("  # only a comment\n").ok


def test_valence_violation_names_vertex():
    text = ("theory phi3 { dimension 6; valence 3; }\n"
            "graph X : phi3 {\n  vertices a b c;\n  edge a b; edge a b; edge b c; edge a c;\n}\n")
    res = parse_graph_dsl(text)
    assert not res.graphs
    msgs = [str(d) for d in res.diagnostics]
    assert any("(c)" in m and "degree 2" in m for m in msgs)
    d = next(d for d in res.diagnostics if "(c)" in d.message)
    assert (d.line, d.col) == (3, 16)


def test_all_errors_reported():
    text = ("theory phi3 { dimension 6; valence 3; }\n"
            "graph A : phi5 { vertices a; }\n"
            "graph B : phi3 { vertices a b; edge a z; leg a; }\n"
            "graph C phi3 { vertices a; }\n"
            "graph D : phi3 { vertices a b; edge a b; leg a; leg b; }\n"
            "$\n")
    res = parse_graph_dsl(text)
    lines = sorted(d.line for d in res.diagnostics)
    assert lines == [2, 3, 4, 5, 5, 6]
    assert any("unknown theory 'phi5'" in d.message for d in res.diagnostics)
    assert any("undeclared vertex 'z'" in d.message for d in res.diagnostics)


def test_disconnected_graph():
    text = ("theory phi4 { dimension 4; valence 4; }\n"
            "graph D : phi4 { vertices a b c d; edge a b; edge a b; edge c d; edge c d;\n"
            "  leg a; leg a; leg b; leg b; leg c; leg c; leg d; leg d; }")
    res = parse_graph_dsl(text)
    assert any("disconnected" in d.message for d in res.diagnostics)


def test_duplicates():
    text = B1_TEXT + " theory phi3 { dimension 6; valence 3; } " + B1_TEXT.split("} ", 1)[1]
    res = parse_graph_dsl(text)
    msgs = " ".join(d.message for d in res.diagnostics)
    assert "declared twice" in msgs and len(res.graphs) == 1


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="theorygaphvrticsdmnlg{};:# 0123456789\nabxyz", max_size=120))
def test_parser_is_total(text):
    res = parse_graph_dsl(text)
    assert isinstance(res.diagnostics, list)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, len(B1_TEXT)), st.text(max_size=5))
def test_parser_total_on_mutations(pos, junk):
    res = parse_graph_dsl(B1_TEXT[:pos] + junk + B1_TEXT[pos:])
    assert res.ok or res.diagnostics


def test_round_trip_corpus():
    graphs = load_corpus()
    text = serialize_graphs(graphs)
    again = parse_graph_dsl(text)
    assert again.ok
    assert [g.key for g in again.graphs] == [g.key for g in graphs]
    assert [g.name for g in again.graphs] == [g.name for g in graphs]


def test_round_trip_contracted():
    o3 = next(g for g in load_corpus() if g.name == "O3")
    q = contract(o3, o3.wood.spinneys[0])
    text = serialize_graphs([q])
    res = parse_graph_dsl(text)
    assert res.ok, res.diagnostics
    assert res.graphs[0].key == q.key


def test_json_graphs():
    theories = corpus_theories()
    b1 = load_corpus()[0]
    data = graph_to_json(b1)
    assert set(data) == {"theory", "vertices", "edges", "legs"}
    res = load_json_graphs(json.dumps({"B1": data}), theories)
    assert res.ok and res.graphs[0] == b1 and res.graphs[0].name == "B1"
    res = load_json_graphs(json.dumps([data, data]), theories)
    assert len(res.graphs) == 2
    bad = dict(data, theory="phi9")
    assert not load_json_graphs(json.dumps(bad), theories).ok
    assert not load_json_graphs("{", theories).ok
    assert not load_json_graphs("3", theories).ok
    short = dict(data, legs=[["l1", "a"]])
    assert not load_json_graphs(json.dumps(short), theories).ok


def test_shipped_corpus_parses():
    res = parse_graph_dsl(corpus_text())
    assert res.ok
    assert [t.name for t in res.theories] == ["phi3", "phi4"]
    assert {g.name for g in res.graphs} >= {"B1", "N2", "N3", "O2", "O3", "T1", "F1", "F2", "SUN"}
