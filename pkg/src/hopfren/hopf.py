"""The graded Hopf algebra of divergent 1PI graphs and its linear forms.

A forest (monomial of H) is a sorted tuple of generator keys; the empty tuple
is the unit. Linear forms are evaluated lazily and memoised per form; a
character is stored through its generator values only.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Union

from .graphs import FeynmanGraph, contract
from .laurent import LaurentSeries
from .polynomial import MomentumPolynomial

Forest = tuple[str, ...]
UNIT: Forest = ()

Element = Union[LaurentSeries, MomentumPolynomial]
ALGEBRAS = (LaurentSeries, MomentumPolynomial)


class HopfError(ValueError):
    pass


class GradeError(HopfError):
    pass


def short_name(key: str) -> str:
    return "g" + hashlib.sha1(key.encode()).hexdigest()[:6]


@dataclass(frozen=True)
class TensorSum:
    """Deduplicated sum of ``left (x) right`` terms with positive multiplicities."""

    terms: tuple[tuple[Forest, Forest, int], ...]

    @classmethod
    def from_counter(cls, counter: Counter) -> "TensorSum":
        return cls(tuple((l, r, m) for (l, r), m in sorted(counter.items()) if m))

    def as_dict(self) -> dict[tuple[Forest, Forest], int]:
        return {(l, r): m for l, r, m in self.terms}

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, _, m in self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


def forest_product(a: Forest, b: Forest) -> Forest:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


class GraphHopfAlgebra:
    """Session holding the generators reachable from a corpus, the forest
    universe up to ``max_grade`` and a coproduct cache."""

    def __init__(self, graphs: Iterable[FeynmanGraph], max_grade: int = 4):
        self.max_grade = max_grade
        self.generators: dict[str, FeynmanGraph] = {}
        self.names: dict[str, str] = {}
        self._coproducts: dict[Forest, TensorSum] = {}
        queue = []
        for g in graphs:
            if g.omega < 0:
                raise HopfError(f"graph {g.name!r} is not divergent (omega={g.omega})")
            if g.key not in self.generators:
                self.generators[g.key] = g
                self.names[g.key] = g.name or short_name(g.key)
                queue.append(g)
        while queue:
            g = queue.pop(0)
            found = [p.graph for p in g.divergent_subgraphs] + [contract(g, s) for s in g.wood]
            for h in found:
                if h.key not in self.generators:
                    self.generators[h.key] = h
                    self.names[h.key] = short_name(h.key)
                    queue.append(h)
        self._forests: list[Forest] | None = None

    # -- bookkeeping -------------------------------------------------------

    def key_of(self, item: Union[FeynmanGraph, str]) -> str:
        key = item.key if isinstance(item, FeynmanGraph) else item
        if key not in self.generators:
            by_name = {n: k for k, n in self.names.items()}
            if key in by_name:
                return by_name[key]
            raise HopfError(f"unknown generator {item!r}")
        return key

    def forest(self, *items) -> Forest:
        return tuple(sorted(self.key_of(i) for i in items))

    def as_forest(self, item) -> Forest:
        if isinstance(item, tuple):
            return item
        return (self.key_of(item),)

    def grade(self, forest: Forest) -> int:
        return sum(self.generators[k].loops for k in forest)

    def name(self, key: str) -> str:
        return self.names[key]

    def forest_name(self, forest: Forest) -> str:
        return "*".join(self.names[k] for k in forest) if forest else "1"

    def graph(self, key: str) -> FeynmanGraph:
        return self.generators[key]

    def generator_keys(self, grade: int | None = None) -> list[str]:
        keys = sorted(self.generators, key=lambda k: (self.generators[k].loops, self.names[k], k))
        if grade is None:
            return keys
        return [k for k in keys if self.generators[k].loops == grade]

    def forests(self, max_grade: int | None = None) -> list[Forest]:
        """Every forest of grade <= max_grade, ordered by grade."""
        if self._forests is None:
            gens = [k for k in self.generator_keys() if self.generators[k].loops <= self.max_grade]
            out: list[Forest] = []

            def grow(prefix: list[str], start: int, grade: int):
                out.append(tuple(prefix))
                for i in range(start, len(gens)):
                    g = grade + self.generators[gens[i]].loops
                    if g <= self.max_grade:
                        grow(prefix + [gens[i]], i, g)

            grow([], 0, 0)
            self._forests = sorted({tuple(sorted(f)) for f in out}, key=lambda f: (self.grade(f), f))
        top = self.max_grade if max_grade is None else max_grade
        return [f for f in self._forests if self.grade(f) <= top]

    # -- coproduct ---------------------------------------------------------

    def _generator_coproduct(self, key: str) -> TensorSum:
        g = self.generators[key]
        terms = Counter({((key,), UNIT): 1, (UNIT, (key,)): 1})
        for s in g.wood:
            left = tuple(sorted(p.graph.key for p in s.parts))
            right = (contract(g, s).key,)
            terms[(left, right)] += 1
        return TensorSum.from_counter(terms)

    def coproduct(self, forest) -> TensorSum:
        forest = self.as_forest(forest)
        if forest in self._coproducts:
            return self._coproducts[forest]
        if not forest:
            result = TensorSum(((UNIT, UNIT, 1),))
        elif len(forest) == 1:
            result = self._generator_coproduct(forest[0])
        else:
            head = self.coproduct(forest[:1])
            tail = self.coproduct(forest[1:])
            acc: Counter = Counter()
            for l1, r1, m1 in head:
                for l2, r2, m2 in tail:
                    acc[(forest_product(l1, l2), forest_product(r1, r2))] += m1 * m2
            result = TensorSum.from_counter(acc)
        self._coproducts[forest] = result
        return result

    def coproduct_left_iterated(self, forest) -> Counter:
        """(Delta (x) id) o Delta as a counter over triples."""
        out: Counter = Counter()
        for l, r, m in self.coproduct(forest):
            for ll, lr, mm in self.coproduct(l):
                out[(ll, lr, r)] += m * mm
        return out

    def coproduct_right_iterated(self, forest) -> Counter:
        """(id (x) Delta) o Delta as a counter over triples."""
        out: Counter = Counter()
        for l, r, m in self.coproduct(forest):
            for rl, rr, mm in self.coproduct(r):
                out[(l, rl, rr)] += m * mm
        return out

    # -- form constructors -------------------------------------------------

    def unit_form(self, algebra: type, grade: int | None = None) -> "LinearForm":
        """The counit e: 1 on the unit, 0 on every other forest."""
        return LinearForm(self, algebra, self.max_grade if grade is None else grade,
                          "character", rule=lambda f: algebra.zero())

    def character(self, algebra: type, values: dict, grade: int | None = None) -> "LinearForm":
        vals = {self.key_of(k): v for k, v in values.items()}

        def rule(forest):
            try:
                return vals[forest[0]]
            except KeyError:
                raise HopfError(f"character undefined on generator {self.forest_name(forest)}") from None

        return LinearForm(self, algebra, self.max_grade if grade is None else grade, "character", rule=rule)

    def infinitesimal(self, algebra: type, values: dict, grade: int | None = None) -> "LinearForm":
        vals = {self.key_of(k): v for k, v in values.items()}
        return LinearForm(self, algebra, self.max_grade if grade is None else grade, "infinitesimal",
                          rule=lambda f: vals.get(f[0], algebra.zero()))

    def general(self, algebra: type, rule: Callable[[Forest], Element], grade: int | None = None) -> "LinearForm":
        return LinearForm(self, algebra, self.max_grade if grade is None else grade, "general", rule=rule)


class LinearForm:
    """F-adapted linear form on H with values in one ambient algebra.

    For ``character`` and ``infinitesimal`` forms ``rule`` is only consulted
    on single generators; for ``general`` forms it is called on any forest.
    """

    KINDS = ("general", "character", "infinitesimal")

    def __init__(self, hopf: GraphHopfAlgebra, algebra: type, grade: int, kind: str,
                 rule: Callable[[Forest], Element]):
        if kind not in self.KINDS:
            raise HopfError(f"unknown form kind {kind!r}")
        if algebra not in ALGEBRAS:
            raise HopfError(f"unsupported target algebra {algebra!r}")
        self.hopf = hopf
        self.algebra = algebra
        self.grade = grade
        self.kind = kind
        self._rule = rule
        self._memo: dict[Forest, Element] = {}

    def __call__(self, item) -> Element:
        forest = self.hopf.as_forest(item)
        if forest in self._memo:
            return self._memo[forest]
        g = self.hopf.grade(forest)
        if g > self.grade:
            raise GradeError(f"form valid up to grade {self.grade}, asked for grade {g}")
        if self.kind == "general":
            value = self._rule(forest)
        elif not forest:
            value = self.algebra.one() if self.kind == "character" else self.algebra.zero()
        elif len(forest) == 1:
            value = self._rule(forest)
        elif self.kind == "infinitesimal":
            value = self.algebra.zero()
        else:
            value = self.algebra.one()
            for k in forest:
                value = value * self((k,))
        if not isinstance(value, self.algebra):
            raise HopfError(f"form produced {type(value).__name__}, expected {self.algebra.__name__}")
        self._memo[forest] = value
        return value

    def _check_compatible(self, other: "LinearForm"):
        if other.hopf is not self.hopf:
            raise HopfError("forms live on different Hopf algebra sessions")
        if other.algebra is not self.algebra:
            raise HopfError(
                f"mismatched target algebras: {self.algebra.__name__} vs {other.algebra.__name__}"
            )

    def _combine(self, other: "LinearForm", op) -> "LinearForm":
        self._check_compatible(other)
        kind = "infinitesimal" if self.kind == other.kind == "infinitesimal" else "general"
        return LinearForm(self.hopf, self.algebra, min(self.grade, other.grade), kind,
                          rule=lambda f: op(self(f), other(f)))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "LinearForm":
        c = Fraction(c)
        kind = "infinitesimal" if self.kind == "infinitesimal" else "general"
        return LinearForm(self.hopf, self.algebra, self.grade, kind, rule=lambda f: self(f) * c)

    def restrict_grade(self, n: int) -> "LinearForm":
        """phi o pi_(n): the form on grade-n forests, zero elsewhere."""
        zero = self.algebra.zero()
        return LinearForm(self.hopf, self.algebra, self.grade, "general",
                          rule=lambda f: self(f) if self.hopf.grade(f) == n else zero)

    def first_difference(self, other: "LinearForm", max_grade: int | None = None) -> Forest | None:
        """First forest (by grade) where the two forms differ, or None."""
        self._check_compatible(other)
        top = min(self.grade, other.grade) if max_grade is None else max_grade
        # characters are products of their generator values by construction
        both_chars = self.kind == other.kind == "character"
        for f in self.hopf.forests(top):
            if both_chars and len(f) > 1:
                continue
            if self(f) != other(f):
                return f
        return None

    def equals(self, other: "LinearForm", max_grade: int | None = None) -> bool:
        return self.first_difference(other, max_grade) is None

    def generator_values(self, max_grade: int | None = None) -> dict[str, Element]:
        top = self.grade if max_grade is None else max_grade
        return {k: self((k,)) for k in self.hopf.generator_keys() if self.hopf.generators[k].loops <= top}

    def is_infinitesimal(self, max_grade: int | None = None) -> Forest | None:
        """Return a forest violating the infinitesimal property, or None."""
        top = self.grade if max_grade is None else max_grade
        for f in self.hopf.forests(top):
            if len(f) != 1 and not self(f).is_zero():
                return f
        return None

    def is_multiplicative(self, max_grade: int | None = None) -> Forest | None:
        top = self.grade if max_grade is None else max_grade
        if self(UNIT) != self.algebra.one():
            return UNIT
        for f in self.hopf.forests(top):
            if len(f) < 2:
                continue
            prod = self.algebra.one()
            for k in f:
                prod = prod * self((k,))
            if self(f) != prod:
                return f
        return None

    def as_character(self) -> "LinearForm":
        """Reinterpret as a character through its generator values."""
        return LinearForm(self.hopf, self.algebra, self.grade, "character", rule=self)

    def as_infinitesimal(self) -> "LinearForm":
        return LinearForm(self.hopf, self.algebra, self.grade, "infinitesimal", rule=self)


def convolve(f: LinearForm, g: LinearForm, kind: str | None = None) -> LinearForm:
    """(f*g)(h) = sum f(h') g(h'') over the coproduct of h.

    The product of two characters is a character and is then evaluated on
    generators only; pass ``kind="general"`` to expand every forest through
    its own coproduct instead."""
    f._check_compatible(g)
    hopf = f.hopf
    zero = f.algebra.zero()

    def rule(forest):
        total = zero
        for left, right, m in hopf.coproduct(forest):
            a = f(left)
            if a.is_zero():
                continue
            b = g(right)
            if b.is_zero():
                continue
            term = a * b
            total = total + (term * m if m != 1 else term)
        return total

    if kind is None:
        kind = "character" if f.kind == g.kind == "character" else "general"
    return LinearForm(hopf, f.algebra, min(f.grade, g.grade), kind, rule=rule)


def convolution_power(f: LinearForm, k: int) -> LinearForm:
    if k < 0:
        raise ValueError("negative convolution power")
    out = f.hopf.unit_form(f.algebra, f.grade)
    for _ in range(k):
        out = convolve(out, f)
    return out


def _require_character(phi: LinearForm) -> None:
    if phi(UNIT) != phi.algebra.one():
        raise HopfError("form does not map the unit to 1")
    if phi.kind != "character":
        bad = phi.is_multiplicative()
        if bad is not None:
            raise HopfError(f"form is not multiplicative on {phi.hopf.forest_name(bad)}")


def char_inverse(phi: LinearForm) -> LinearForm:
    """Convolution inverse of a character through the graded recursion
    phi^-1(G) = -phi(G) - sum_S phi^-1(prod gamma) phi(G/S)."""
    _require_character(phi)
    hopf = phi.hopf

    def rule(forest):
        total = -phi(forest)
        for left, right, m in hopf.coproduct(forest):
            if left in (UNIT, forest):
                continue
            total = total - inverse(left) * phi(right) * m
        return total

    inverse = LinearForm(hopf, phi.algebra, phi.grade, "character", rule=rule)
    return inverse


def exp_star(mu: LinearForm) -> LinearForm:
    """Convolution exponential of an infinitesimal character."""
    if not mu(UNIT).is_zero():
        raise HopfError("exp*: form does not vanish on the unit")
    if mu.kind != "infinitesimal":
        bad = mu.is_infinitesimal()
        if bad is not None:
            raise HopfError(f"exp*: form is not infinitesimal, nonzero on {mu.hopf.forest_name(bad)}")
    hopf = mu.hopf
    powers = [None, mu]

    def power(k):
        while len(powers) <= k:
            powers.append(convolve(powers[-1], mu))
        return powers[k]

    def rule(forest):
        total = mu.algebra.zero()
        for k in range(1, hopf.grade(forest) + 1):
            total = total + power(k)(forest) * Fraction(1, factorial(k))
        return total

    return LinearForm(hopf, mu.algebra, mu.grade, "character", rule=rule)


def log_star(phi: LinearForm) -> LinearForm:
    """Convolution logarithm of a character (an infinitesimal character)."""
    _require_character(phi)
    hopf = phi.hopf
    delta = phi - hopf.unit_form(phi.algebra, phi.grade)
    powers = [None, delta]

    def power(k):
        while len(powers) <= k:
            powers.append(convolve(powers[-1], delta))
        return powers[k]

    def rule(forest):
        total = phi.algebra.zero()
        for k in range(1, hopf.grade(forest) + 1):
            total = total + power(k)(forest) * Fraction((-1) ** (k + 1), k)
        return total

    return LinearForm(hopf, phi.algebra, phi.grade, "infinitesimal", rule=rule)
