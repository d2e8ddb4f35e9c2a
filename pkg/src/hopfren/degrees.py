"""Subtraction degrees: minimal (a = omega), critical oversubtraction and
user tables, plus the validity check for a degree assignment."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .graphs import FeynmanGraph, GraphError, Spinney, SubgraphRef


class DegreeError(GraphError):
    pass


def critical_degree(g: FeynmanGraph) -> int:
    """omega(g) plus the degrees of divergence of all its proper divergent
    1PI subgraphs."""
    if g.omega < 0:
        raise DegreeError(f"graph {g.name!r} is convergent (omega={g.omega})")
    return g.omega + sum(s.omega for s in g.divergent_subgraphs)


@dataclass
class DegreeFunction:
    kind: str
    table: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("minimal", "critical", "custom"):
            raise ValueError(f"unknown degree function kind {self.kind!r}")

    @classmethod
    def minimal(cls) -> "DegreeFunction":
        return cls("minimal")

    @classmethod
    def critical(cls) -> "DegreeFunction":
        return cls("critical")

    @classmethod
    def custom(cls, table: Mapping[str, int]) -> "DegreeFunction":
        """``table`` maps canonical graph keys (``FeynmanGraph.key``) to degrees."""
        return cls("custom", dict(table))

    def __call__(self, g: FeynmanGraph) -> int:
        if self.kind == "minimal":
            return g.omega
        if self.kind == "critical":
            return critical_degree(g)
        try:
            return self.table[g.key]
        except KeyError:
            raise DegreeError(f"custom degree undefined on graph {g.name!r} ({g.key})") from None


@dataclass(frozen=True)
class DegreeViolation:
    subgraph: FeynmanGraph
    spinney: Spinney | None
    lhs: int
    rhs: int

    def describe(self) -> str:
        s = self.spinney.label() if self.spinney else "{}"
        return f"a({self.subgraph.name}) = {self.lhs} < {self.rhs} required by spinney {s}"


@dataclass(frozen=True)
class DegreeValidation:
    valid: bool
    witness: DegreeViolation | None
    # result when only proper subgraphs of the top graph are checked
    valid_proper: bool


def _violation(a: DegreeFunction, gamma: FeynmanGraph) -> DegreeViolation | None:
    base = a(gamma)
    if base < gamma.omega:
        return DegreeViolation(gamma, None, base, gamma.omega)
    for s in gamma.wood:
        rhs = gamma.omega + sum(a(p.graph) - p.omega for p in s.parts)
        if base < rhs:
            return DegreeViolation(gamma, s, base, rhs)
    return None


def validate_degree_function(a: DegreeFunction, g: FeynmanGraph) -> DegreeValidation:
    """Check a(gamma) >= omega(gamma) + sum_{gamma_i in S} (a(gamma_i) - omega(gamma_i))
    for every divergent 1PI subgraph gamma of ``g`` (``g`` included) and every
    spinney S of gamma, together with a(gamma) >= omega(gamma)."""
    proper_witness = None
    for sub in g.divergent_subgraphs:
        proper_witness = _violation(a, sub.graph)
        if proper_witness:
            break
    top = _violation(a, g) if g.omega >= 0 else None
    witness = proper_witness or top
    return DegreeValidation(witness is None, witness, proper_witness is None)


def nested_or_disjoint(a: SubgraphRef, b: SubgraphRef) -> bool:
    if a.edge_ids <= b.edge_ids or b.edge_ids <= a.edge_ids:
        return True
    return not set(a.vertices) & set(b.vertices)
