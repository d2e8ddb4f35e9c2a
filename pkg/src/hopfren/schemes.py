"""Subtraction schemes on the target algebras and their CT/RT/ST
classification.

Model A: Laurent series in eps, P- keeps the strictly negative powers.
Model B: momentum polynomials; P-^G is the Taylor jet of order a(G) in the
total momentum degree (all symbols counted), P+^G = id - P-^G.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .degrees import DegreeFunction, validate_degree_function
from .graphs import FeynmanGraph, contract
from .hopf import HopfError, LinearForm, UNIT, short_name
from .laurent import LaurentSeries
from .polynomial import MomentumPolynomial
from .synth import momentum_symbols, random_element


class SchemeError(ValueError):
    pass


@dataclass
class SubtractionScheme:
    model: str
    degree: DegreeFunction | None = None
    dual: bool = False
    name: str = ""
    _degrees: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.model not in ("A", "B"):
            raise SchemeError(f"unknown model {self.model!r}")
        if self.model == "B" and self.degree is None:
            raise SchemeError("momentum subtraction needs a degree function")
        if not self.name:
            self.name = "pole" if self.model == "A" else self.degree.kind

    @classmethod
    def pole(cls) -> "SubtractionScheme":
        return cls("A")

    @classmethod
    def minimal(cls) -> "SubtractionScheme":
        return cls("B", DegreeFunction.minimal())

    @classmethod
    def critical(cls) -> "SubtractionScheme":
        return cls("B", DegreeFunction.critical())

    @classmethod
    def custom(cls, table) -> "SubtractionScheme":
        return cls("B", DegreeFunction.custom(table), name="custom")

    @classmethod
    def from_name(cls, name: str) -> "SubtractionScheme":
        try:
            return {"pole": cls.pole, "minimal": cls.minimal, "critical": cls.critical}[name]()
        except KeyError:
            raise SchemeError(f"unknown scheme {name!r}") from None

    @property
    def algebra(self) -> type:
        return LaurentSeries if self.model == "A" else MomentumPolynomial

    def dualised(self) -> "SubtractionScheme":
        """Same projectors with the roles of P+ and P- exchanged."""
        return SubtractionScheme(self.model, self.degree, not self.dual,
                                 self.name + ("" if self.dual else "~dual"))

    def degree_of(self, g: FeynmanGraph) -> int:
        if g.key not in self._degrees:
            self._degrees[g.key] = self.degree(g)
        return self._degrees[g.key]

    def _check(self, x):
        if not isinstance(x, self.algebra):
            raise SchemeError(
                f"scheme {self.name} acts on {self.algebra.__name__}, got {type(x).__name__}"
            )

    def _raw_minus(self, g: FeynmanGraph, x):
        if self.model == "A":
            return x.pole_part()
        return x.taylor_jet(self.degree_of(g))

    def minus(self, g: FeynmanGraph, x):
        self._check(x)
        return x - self._raw_minus(g, x) if self.dual else self._raw_minus(g, x)

    def plus(self, g: FeynmanGraph, x):
        self._check(x)
        return self._raw_minus(g, x) if self.dual else x - self._raw_minus(g, x)

    def validate_on(self, graphs: Iterable[FeynmanGraph]):
        """First failing degree validation on ``graphs`` (Model B), else None."""
        if self.model == "A":
            return None
        for g in graphs:
            res = validate_degree_function(self.degree, g)
            if not res.valid:
                return res
        return None


def lift_projector(scheme: SubtractionScheme, phi: LinearForm) -> tuple[LinearForm, LinearForm]:
    """The characters (P- phi, P+ phi), generator-wise P-^G / P+^G of phi(G)."""
    if phi.algebra is not scheme.algebra:
        raise SchemeError(
            f"scheme {scheme.name} acts on {scheme.algebra.__name__}, form takes values in {phi.algebra.__name__}"
        )
    if phi(UNIT) != phi.algebra.one():
        raise HopfError("projector lift needs a character")
    hopf = phi.hopf

    def lifted(proj):
        return LinearForm(hopf, phi.algebra, phi.grade, "character",
                          rule=lambda f: proj(hopf.graph(f[0]), phi(f)))

    return lifted(scheme.minus), lifted(scheme.plus)


def lift_plus(scheme: SubtractionScheme, phi: LinearForm) -> LinearForm:
    return lift_projector(scheme, phi)[1]


def lift_minus(scheme: SubtractionScheme, phi: LinearForm) -> LinearForm:
    return lift_projector(scheme, phi)[0]


def rota_baxter_holds(P, x, y) -> bool:
    """Weight minus one: P(x)P(y) = P(xP(y)) + P(P(x)y) - P(xy)."""
    return P(x) * P(y) == P(x * P(y)) + P(P(x) * y) - P(x * y)


def rb_family_check(k_i: int, k_j: int, f: MomentumPolynomial, g: MomentumPolynomial) -> bool:
    """M^(ki)(f) M^(kj)(g) == M^(ki+kj)(M^(ki)(f) g + f M^(kj)(g) - f g)
    for f, g in disjoint sets of momenta."""
    vf, vg = f.variables(), g.variables()
    if vf & vg:
        raise SchemeError(f"variable sets overlap: {sorted(vf & vg)}")
    mf, mg = f.taylor_jet(k_i), g.taylor_jet(k_j)
    return mf * mg == (mf * g + f * mg - f * g).taylor_jet(k_i + k_j)


@dataclass
class Witness:
    identity: str
    graph: str
    spinney: str
    seed: int
    sample: int
    lhs: object
    rhs: object

    def degrees(self) -> tuple[int, int] | None:
        if isinstance(self.lhs, MomentumPolynomial):
            return self.lhs.degree(), self.rhs.degree()
        return None

    def to_json(self) -> dict:
        out = {
            "identity": self.identity, "graph": self.graph, "spinney": self.spinney,
            "seed": self.seed, "sample": self.sample,
            "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(),
        }
        if self.degrees():
            out["lhs_degree"], out["rhs_degree"] = self.degrees()
        return out


@dataclass
class IdentityStatus:
    status: str
    checks: int
    witnesses: list[Witness]

    @property
    def confirmed(self) -> bool:
        return self.status == "confirmed-on-corpus"

    @property
    def witness(self) -> Witness | None:
        return self.witnesses[0] if self.witnesses else None


@dataclass
class SchemeClassification:
    scheme: str
    ct: IdentityStatus
    rt: IdentityStatus

    @property
    def st(self) -> str:
        return "confirmed-on-corpus" if self.ct.confirmed and self.rt.confirmed else "refuted"

    def to_json(self) -> dict:
        def status(s: IdentityStatus):
            return {"status": s.status, "checks": s.checks, "witnesses": [w.to_json() for w in s.witnesses]}
        return {"scheme": self.scheme, "CT": status(self.ct), "RT": status(self.rt), "ST": self.st}


def _extremal(scheme: SubtractionScheme, g: FeynmanGraph, name: str):
    """Element with exactly one top P- term and one lowest P+ term."""
    if scheme.model == "A":
        return LaurentSeries({-1: 1, 0: 1})
    a = scheme.degree_of(g)
    p = momentum_symbols(name, g)[0]
    return MomentumPolynomial.monomial({p: a}) + MomentumPolynomial.monomial({p: a + 1})


def classify_scheme(scheme: SubtractionScheme, corpus: Iterable[FeynmanGraph],
                    samples: int = 200, seed: int = 0) -> SchemeClassification:
    """Test the CT and RT identities on every (graph, spinney) of the corpus.

    Sample 0 is a deterministic extremal input; the rest are drawn from a
    generator seeded by (seed, graph, spinney), so every witness can be
    regenerated.
    """
    corpus = list(corpus)
    if not corpus:
        raise SchemeError("classification needs a nonempty corpus")
    names = {}
    for g in corpus:
        names.setdefault(g.key, g.name or short_name(g.key))

    def name(g):
        return names.get(g.key) or short_name(g.key)

    ct_w, rt_w = [], []
    checks = 0
    seen = set()
    for G in corpus:
        if G.key in seen:
            continue
        seen.add(G.key)
        for s in G.wood:
            quotient = contract(G, s)
            rng = random.Random(f"{seed}:{G.key}:{s.label()}")
            ct_bad = rt_bad = False
            for k in range(samples):
                if k == 0:
                    xs = [_extremal(scheme, p.graph, name(p.graph)) for p in s.parts]
                    xG = _extremal(scheme, quotient, name(G))
                else:
                    xs = [random_element(rng, scheme.model, p.graph, name(p.graph),
                                         scheme.degree_of(p.graph) if scheme.model == "B" else None)
                          for p in s.parts]
                    xG = random_element(rng, scheme.model, quotient, name(G),
                                        scheme.degree_of(quotient) if scheme.model == "B" else None)
                checks += 1
                for ident, proj, bad, store in (("CT", scheme.minus, ct_bad, ct_w),
                                                ("RT", scheme.plus, rt_bad, rt_w)):
                    if bad:
                        continue
                    prod = proj(quotient, xG)
                    for p, x in zip(s.parts, xs):
                        prod = prod * proj(p.graph, x)
                    lhs = proj(G, prod)
                    if lhs != prod:
                        store.append(Witness(ident, G.name, s.label(), seed, k, lhs, prod))
                        if ident == "CT":
                            ct_bad = True
                        else:
                            rt_bad = True
                if ct_bad and rt_bad:
                    break

    def status(ws):
        return IdentityStatus("refuted" if ws else "confirmed-on-corpus", checks, ws)

    return SchemeClassification(scheme.name, status(ct_w), status(rt_w))
