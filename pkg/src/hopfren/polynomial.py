"""Sparse polynomials in scalar momentum symbols with Laurent-series
coefficients, and Taylor jets (degree truncations) on them."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable

from .laurent import LaurentSeries

Monomial = tuple[tuple[str, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial, variables: frozenset[str] | None = None) -> int:
    if variables is None:
        return sum(e for _, e in m)
    return sum(e for v, e in m if v in variables)


class MomentumPolynomial:
    """Polynomial over momentum symbols; monomials are sorted
    ``((symbol, exponent), ...)`` tuples, the empty tuple is the constant.

    A coefficient that is zero only up to its truncation order (``O(eps^k)``)
    is kept: dropping it would turn "unknown beyond eps^k" into an exact
    zero. Such terms count as zero for degrees and ``is_zero``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for m, c in (terms or {}).items():
            if not isinstance(c, LaurentSeries):
                c = LaurentSeries.constant(c)
            if not c.is_zero() or c.trunc is not None:
                clean[tuple(sorted((v, e) for v, e in m if e))] = c
        self.terms: dict[Monomial, LaurentSeries] = clean

    @classmethod
    def zero(cls) -> "MomentumPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "MomentumPolynomial":
        return cls({(): LaurentSeries.one()})

    @classmethod
    def constant(cls, c) -> "MomentumPolynomial":
        return cls({(): c})

    @classmethod
    def monomial(cls, exps: dict[str, int], coef=1) -> "MomentumPolynomial":
        return cls({tuple(sorted(exps.items())): coef})

    @classmethod
    def var(cls, name: str) -> "MomentumPolynomial":
        return cls.monomial({name: 1})

    def _coerce(self, other):
        if isinstance(other, MomentumPolynomial):
            return other
        if isinstance(other, (int, Rational, LaurentSeries)):
            return MomentumPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return MomentumPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return MomentumPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return MomentumPolynomial({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, LaurentSeries] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                p = c1 * c2
                out[m] = out[m] + p if m in out else p
        return MomentumPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        zero = LaurentSeries.zero()
        return all(
            self.terms.get(m, zero) == other.terms.get(m, zero)
            for m in set(self.terms) | set(other.terms)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def _support(self):
        return [m for m, c in self.terms.items() if not c.is_zero()]

    def degree(self, variables: Iterable[str] | None = None) -> int:
        """Total degree (-1 for the zero polynomial)."""
        vs = None if variables is None else frozenset(variables)
        return max((mono_degree(m, vs) for m in self._support()), default=-1)

    def min_degree(self) -> int | None:
        return min((mono_degree(m) for m in self._support()), default=None)

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._support() for v, _ in m)

    def taylor_jet(self, k: int, variables: Iterable[str] | None = None) -> "MomentumPolynomial":
        """Keep the terms of degree <= k (degree counted in ``variables`` if
        given, otherwise in all symbols). ``k = -1`` is the zero map."""
        if k < -1:
            raise ValueError(f"jet order must be >= -1, got {k}")
        vs = None if variables is None else frozenset(variables)
        return MomentumPolynomial({m: c for m, c in self.terms.items() if mono_degree(m, vs) <= k})

    def __repr__(self):
        return f"MomentumPolynomial({str(self)!r})"

    def __str__(self):
        if self.is_zero() and not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (mono_degree(m), m)):
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in m)
            coef = str(self.terms[m])
            parts.append(f"({coef})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def to_json(self) -> list:
        return [
            {"mono": dict(m), "coef": self.terms[m].to_json()}
            for m in sorted(self.terms, key=lambda m: (mono_degree(m), m))
        ]

    @classmethod
    def from_json(cls, data: list) -> "MomentumPolynomial":
        return cls({tuple(sorted(t["mono"].items())): LaurentSeries.from_json(t["coef"]) for t in data})


def taylor_jet(x: MomentumPolynomial, k: int, variables: Iterable[str] | None = None) -> MomentumPolynomial:
    return x.taylor_jet(k, variables)
