"""Feynman graphs: power counting, 1PI analysis, subgraphs, spinneys, woods
and contraction.

Graphs are scalar multigraphs with external legs. Subgraphs are identified by
subsets of the parent's internal edges; their external legs are the parent
half-edges sitting on their vertices that are not part of the subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple

from .canonical import canonical_order

MAX_EDGES = 12


class GraphError(ValueError):
    """Raised for operations applied to unsuitable graphs or subgraphs."""


@dataclass(frozen=True)
class Issue:
    kind: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind} ({self.subject}): {self.message}"


class GraphValidationError(GraphError):
    def __init__(self, graph: str, issues: list[Issue]):
        self.graph = graph
        self.issues = issues
        super().__init__(f"graph {graph!r} is invalid: " + "; ".join(map(str, issues)))


@dataclass(frozen=True)
class TheoryConfig:
    """Scalar theory with one monomial interaction of the given valence."""

    name: str
    dimension: int
    valence: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"theory {self.name}: dimension must be >= 1")
        if self.valence < 3:
            raise ValueError(f"theory {self.name}: valence must be >= 3")


PHI3_6 = TheoryConfig("phi3", 6, 3)
PHI4_4 = TheoryConfig("phi4", 4, 4)


class PowerCounting(NamedTuple):
    L: int
    l: int
    V: int
    omega: int


def _components(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[set[str]]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict[str, set[str]] = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def _is_bridge(edges: list[tuple[str, str]], i: int) -> bool:
    u, v = edges[i]
    if u == v:
        return False
    rest = edges[:i] + edges[i + 1:]
    verts = {x for e in edges for x in e}
    comps = _components(verts, rest)
    return next(c for c in comps if u in c) is not next(c for c in comps if v in c)


@dataclass(frozen=True, eq=False)
class FeynmanGraph:
    """Immutable scalar Feynman graph.

    ``edges`` may contain repeated pairs (multigraph) and self-loops. Equality
    is isomorphism preserving leg labels; ``key`` identifies the isomorphism
    class with leg labels forgotten, which is what the Hopf algebra uses.
    """

    theory: TheoryConfig
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    legs: tuple[tuple[str, str], ...]
    name: str = ""
    check_valence: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "legs", tuple(tuple(x) for x in self.legs))
        issues = self.validation_issues()
        if issues:
            raise GraphValidationError(self.name or "<anonymous>", issues)

    def validation_issues(self) -> list[Issue]:
        issues = []
        seen = set()
        for v in self.vertices:
            if v in seen:
                issues.append(Issue("duplicate-vertex", v, "vertex declared twice"))
            seen.add(v)
        for u, v in self.edges:
            for x in (u, v):
                if x not in seen:
                    issues.append(Issue("unknown-vertex", x, f"edge {u}-{v} uses undeclared vertex"))
        for label, v in self.legs:
            if v not in seen:
                issues.append(Issue("unknown-vertex", v, f"leg {label} attached to undeclared vertex"))
        if issues:
            return issues
        if not self.vertices:
            return [Issue("empty", self.name, "graph has no vertices")]
        if self.check_valence:
            for v in self.vertices:
                d = self.degree(v)
                if d != self.theory.valence:
                    issues.append(Issue(
                        "valence", v,
                        f"vertex has degree {d}, theory {self.theory.name} requires {self.theory.valence}",
                    ))
        comps = _components(self.vertices, self.edges)
        if len(comps) > 1:
            for comp in sorted(comps, key=lambda c: min(self.vertices.index(v) for v in c))[1:]:
                members = " ".join(v for v in self.vertices if v in comp)
                issues.append(Issue("disconnected", members, "component not connected to the rest"))
        return issues

    def degree(self, v: str) -> int:
        d = sum((u == v) + (w == v) for u, w in self.edges)
        return d + sum(1 for _, x in self.legs if x == v)

    @property
    def n_legs(self) -> int:
        return len(self.legs)

    @cached_property
    def power_counting(self) -> PowerCounting:
        l, V = len(self.edges), len(self.vertices)
        L = l - V + 1
        return PowerCounting(L, l, V, self.theory.dimension * L - 2 * l)

    @property
    def loops(self) -> int:
        return self.power_counting.L

    @property
    def omega(self) -> int:
        return self.power_counting.omega

    def _encoding(self, labelled: bool) -> str:
        index = {v: i for i, v in enumerate(self.vertices)}
        if labelled:
            colours = [tuple(sorted(lab for lab, x in self.legs if x == v)) for v in self.vertices]
        else:
            colours = [sum(1 for _, x in self.legs if x == v) for v in self.vertices]
        (cols, edges), _ = canonical_order(
            len(self.vertices), [(index[u], index[v]) for u, v in self.edges], colours
        )
        col_s = ",".join("+".join(c) if labelled else str(c) for c in cols)
        edge_s = ",".join(f"{u}-{v}" + (f"x{m}" if m > 1 else "") for u, v, m in edges)
        return f"{self.theory.name}|{col_s}|{edge_s}"

    @cached_property
    def key(self) -> str:
        """Canonical form of the isomorphism class, leg labels ignored."""
        return self._encoding(labelled=False)

    @cached_property
    def labelled_key(self) -> str:
        return self._encoding(labelled=True)

    def __eq__(self, other):
        if not isinstance(other, FeynmanGraph):
            return NotImplemented
        return self.theory == other.theory and self.labelled_key == other.labelled_key

    def __hash__(self):
        return hash(self.labelled_key)

    def __repr__(self):
        return f"FeynmanGraph({self.name or self.key!r}, L={self.loops}, omega={self.omega})"

    @cached_property
    def divergent_subgraphs(self) -> tuple["SubgraphRef", ...]:
        return _enumerate_divergent(self)

    @cached_property
    def wood(self) -> "Wood":
        return _build_wood(self)

    def relabel(self, mapping: dict[str, str], edge_order: list[int] | None = None) -> "FeynmanGraph":
        """Copy with vertices renamed (and optionally edges permuted)."""
        edges = list(self.edges)
        if edge_order is not None:
            edges = [edges[i] for i in edge_order]
        return FeynmanGraph(
            self.theory,
            tuple(mapping[v] for v in self.vertices),
            tuple((mapping[u], mapping[v]) for u, v in edges),
            tuple((lab, mapping[v]) for lab, v in self.legs),
            self.name,
            self.check_valence,
        )


def power_counting(g: FeynmanGraph) -> PowerCounting:
    return g.power_counting


def is_one_particle_irreducible(g: FeynmanGraph) -> bool:
    """True iff no internal edge is a bridge (a lone vertex counts as 1PI)."""
    edges = list(g.edges)
    return not any(_is_bridge(edges, i) for i in range(len(edges)))


@dataclass(frozen=True, eq=False)
class SubgraphRef:
    parent: FeynmanGraph
    edge_ids: frozenset[int]

    def __eq__(self, other):
        if not isinstance(other, SubgraphRef):
            return NotImplemented
        return self.parent is other.parent and self.edge_ids == other.edge_ids

    def __hash__(self):
        return hash(self.edge_ids)

    @property
    def edges(self) -> list[tuple[str, str]]:
        return [self.parent.edges[i] for i in sorted(self.edge_ids)]

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        ends = {x for e in self.edges for x in e}
        return tuple(v for v in self.parent.vertices if v in ends)

    @property
    def is_proper(self) -> bool:
        return len(self.edge_ids) < len(self.parent.edges)

    @property
    def loops(self) -> int:
        return len(self.edge_ids) - len(self.vertices) + 1

    @property
    def omega(self) -> int:
        return self.parent.theory.dimension * self.loops - 2 * len(self.edge_ids)

    def sort_key(self) -> tuple:
        return (len(self.edge_ids), tuple(sorted(self.edge_ids)))

    def label(self) -> str:
        """Vertex names; edge indices are appended when the subgraph is not
        the full induced subgraph on those vertices."""
        inside = set(self.vertices)
        induced = all(i in self.edge_ids for i, (a, b) in enumerate(self.parent.edges)
                      if a in inside and b in inside)
        base = ".".join(self.vertices)
        return base if induced else base + "#" + ",".join(map(str, sorted(self.edge_ids)))

    @cached_property
    def graph(self) -> FeynmanGraph:
        """The subgraph as a standalone graph; cut parent edges become legs."""
        inside = set(self.vertices)
        legs = []
        for v in self.vertices:
            legs.extend((lab, x) for lab, x in self.parent.legs if x == v)
            for i, (a, b) in enumerate(self.parent.edges):
                if i in self.edge_ids:
                    continue
                legs.extend((f"cut{i}", v) for x in (a, b) if x == v)
        assert all(x in inside for _, x in legs)
        return FeynmanGraph(
            self.parent.theory,
            self.vertices,
            tuple(self.edges),
            tuple(legs),
            f"{self.parent.name}[{self.label()}]",
            check_valence=False,
        )

    def __repr__(self):
        return f"SubgraphRef({self.parent.name}, {sorted(self.edge_ids)})"


def _enumerate_divergent(g: FeynmanGraph) -> tuple[SubgraphRef, ...]:
    m = len(g.edges)
    if m > MAX_EDGES:
        raise GraphError(f"graph {g.name!r} has {m} edges; subgraph enumeration is capped at {MAX_EDGES}")
    D = g.theory.dimension
    found = []
    for size in range(1, m):
        for ids in combinations(range(m), size):
            edges = [g.edges[i] for i in ids]
            verts = {x for e in edges for x in e}
            if D * (size - len(verts) + 1) - 2 * size < 0:
                continue
            if len(_components(verts, edges)) != 1:
                continue
            if any(_is_bridge(edges, i) for i in range(size)):
                continue
            found.append(SubgraphRef(g, frozenset(ids)))
    return tuple(found)


def divergent_subgraphs(g: FeynmanGraph) -> tuple[SubgraphRef, ...]:
    """Proper, connected, bridgeless, ``omega >= 0`` edge-subset subgraphs."""
    return g.divergent_subgraphs


def vertex_disjoint(a: SubgraphRef, b: SubgraphRef) -> bool:
    return not set(a.vertices) & set(b.vertices)


@dataclass(frozen=True)
class Spinney:
    parts: tuple[SubgraphRef, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(self.parts, key=SubgraphRef.sort_key)))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    @property
    def loops(self) -> int:
        return sum(p.loops for p in self.parts)

    def label(self) -> str:
        return "{" + ";".join(p.label() for p in self.parts) + "}"


@dataclass(frozen=True)
class Wood:
    spinneys: tuple[Spinney, ...]

    def __len__(self):
        return len(self.spinneys)

    def __iter__(self):
        return iter(self.spinneys)


def _build_wood(g: FeynmanGraph) -> Wood:
    parts = g.divergent_subgraphs
    out: list[Spinney] = []

    def extend(chosen: list[SubgraphRef], start: int):
        for i in range(start, len(parts)):
            cand = parts[i]
            if all(vertex_disjoint(cand, c) for c in chosen):
                out.append(Spinney(tuple(chosen + [cand])))
                extend(chosen + [cand], i + 1)

    extend([], 0)
    out.sort(key=lambda s: (len(s), [p.sort_key() for p in s.parts]))
    return Wood(tuple(out))


def wood(g: FeynmanGraph) -> Wood:
    """All spinneys of ``g``: nonempty sets of pairwise vertex-disjoint
    divergent proper subgraphs. The graph itself is never included."""
    return g.wood


def _check_spinney(g: FeynmanGraph, s: Spinney) -> None:
    valid = set(g.divergent_subgraphs)
    for p in s.parts:
        if p.parent is not g and p.parent != g:
            raise GraphError(f"spinney part {p!r} does not belong to graph {g.name!r}")
        if SubgraphRef(g, p.edge_ids) not in valid:
            raise GraphError(f"spinney part {p!r} is not a proper divergent 1PI subgraph of {g.name!r}")
    for a, b in combinations(s.parts, 2):
        if not vertex_disjoint(a, b):
            raise GraphError(f"spinney parts {a!r} and {b!r} share a vertex")


def contract(g: FeynmanGraph, s: Spinney | None) -> FeynmanGraph:
    """Shrink every part of ``s`` to a point.

    A pseudo-vertex produced by a two-point part is absorbed into a single
    propagator joining its two neighbours, so e.g. a bubble inserted on a
    line disappears into that line.
    """
    if s is None or len(s) == 0:
        return g
    _check_spinney(g, s)
    rep: dict[str, str] = {}
    pseudo = []
    removed: set[int] = set()
    for p in s.parts:
        name = "(" + ".".join(p.vertices) + ")"
        pseudo.append(name)
        removed |= p.edge_ids
        for v in p.vertices:
            rep[v] = name
    vertices: list[str] = []
    for v in g.vertices:
        w = rep.get(v, v)
        if w not in vertices:
            vertices.append(w)
    edges = [(rep.get(u, u), rep.get(v, v)) for i, (u, v) in enumerate(g.edges) if i not in removed]
    legs = [(lab, rep.get(v, v)) for lab, v in g.legs]
    for pv in pseudo:
        incident = [i for i, e in enumerate(edges) if pv in e]
        if any(x == pv for _, x in legs) or len(incident) != 2:
            continue
        i, j = incident
        if edges[i] == (pv, pv):
            continue
        a = edges[i][0] if edges[i][1] == pv else edges[i][1]
        b = edges[j][0] if edges[j][1] == pv else edges[j][1]
        edges[i] = (a, b)
        del edges[j]
        vertices.remove(pv)
    return FeynmanGraph(
        g.theory, tuple(vertices), tuple(edges), tuple(legs),
        f"{g.name}/{s.label()}", check_valence=False,
    )


def is_renormalisable_on(graphs: Iterable[FeynmanGraph]) -> bool:
    """Power-counting check: omega(G/S) == omega(G) for every spinney."""
    return all(contract(g, s).omega == g.omega for g in graphs for s in g.wood)
