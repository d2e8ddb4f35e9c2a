"""The shipped corpus of example graphs."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .dsl import ParseResult, parse_graph_dsl
from .graphs import FeynmanGraph, TheoryConfig

CHAIN = ("B1", "N2", "N3")
THREE_POINT = ("T1", "T2A", "T2B")
FOUR_POINT = ("F1", "F2")


def corpus_text() -> str:
    return resources.files("hopfren").joinpath("data/corpus.fg").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def _parsed() -> ParseResult:
    res = parse_graph_dsl(corpus_text())
    if not res.ok:
        raise RuntimeError("shipped corpus does not parse: " + "; ".join(map(str, res.diagnostics)))
    return res


def load_corpus() -> list[FeynmanGraph]:
    return list(_parsed().graphs)


def corpus_theories() -> dict[str, TheoryConfig]:
    return {t.name: t for t in _parsed().theories}


def corpus_graph(name: str) -> FeynmanGraph:
    for g in _parsed().graphs:
        if g.name == name:
            return g
    raise KeyError(name)
