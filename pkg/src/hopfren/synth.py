"""Seeded synthetic Feynman rules: random Laurent series, momentum
polynomials and characters. Every function takes an explicit
``random.Random``; nothing touches the global generator."""

from __future__ import annotations

import random
from fractions import Fraction

from .graphs import FeynmanGraph
from .laurent import DEFAULT_TRUNC, LaurentSeries
from .polynomial import MomentumPolynomial


def momentum_symbols(name: str, g: FeynmanGraph) -> list[str]:
    """Independent external momenta of ``g``: one per leg minus conservation."""
    return [f"p_{name}_{i}" for i in range(1, max(1, g.n_legs - 1) + 1)]


def random_rational(rng: random.Random, size: int = 9) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-size, size)
    return Fraction(num, rng.randint(1, 4))


def random_laurent(rng: random.Random, pole_order: int, top: int = 1,
                   trunc: int | None = DEFAULT_TRUNC, lowest: int | None = None) -> LaurentSeries:
    """Random series with exponents in [-pole_order, top] (or [lowest, top])."""
    lo = -pole_order if lowest is None else lowest
    coeffs = {n: random_rational(rng) for n in range(lo, top + 1) if rng.random() < 0.8}
    if not coeffs:
        coeffs = {lo: random_rational(rng)}
    return LaurentSeries(coeffs, trunc)


def random_monomial(rng: random.Random, symbols: list[str], degree: int) -> dict[str, int]:
    exps = dict.fromkeys(symbols, 0)
    for _ in range(degree):
        exps[rng.choice(symbols)] += 1
    return exps


def random_polynomial(rng: random.Random, symbols: list[str], degrees: range,
                      pole_order: int = 1) -> MomentumPolynomial:
    """One or two random monomials for each degree in ``degrees``, with
    random Laurent coefficients of pole order up to ``pole_order``."""
    out = MomentumPolynomial()
    for d in degrees:
        for _ in range(rng.randint(1, 2)):
            coef = random_laurent(rng, rng.randint(0, pole_order))
            out = out + MomentumPolynomial.monomial(random_monomial(rng, symbols, d), coef)
    return out


def random_element(rng: random.Random, model: str, g: FeynmanGraph, name: str,
                   degree: int | None = None, part: str = "generic"):
    """Random value for graph ``g`` in the target algebra of ``model``.

    ``part`` selects the support: ``generic`` (everything), ``regular``
    (fixed by P+) or ``irregular`` (fixed by P-).
    """
    L = max(1, g.loops)
    if model == "A":
        if part == "regular":
            return random_laurent(rng, 0, top=2, lowest=0)
        if part == "irregular":
            return LaurentSeries(random_laurent(rng, L, top=-1).coeffs)
        return random_laurent(rng, rng.randint(1, L), top=2)
    if degree is None:
        raise ValueError("momentum model needs a subtraction degree")
    lo, hi = 0, degree + 2
    if part == "regular":
        lo = degree + 1
    elif part == "irregular":
        hi = degree
    return random_polynomial(rng, momentum_symbols(name, g), range(lo, hi + 1), L)


def random_character(hopf, scheme, rng: random.Random, part: str = "generic", max_grade: int | None = None):
    """Random character on every generator of ``hopf`` up to ``max_grade``."""
    top = hopf.max_grade if max_grade is None else max_grade
    values = {}
    for key in hopf.generator_keys():
        g = hopf.graph(key)
        if g.loops > top:
            continue
        deg = scheme.degree_of(g) if scheme.model == "B" else None
        values[key] = random_element(rng, scheme.model, g, hopf.name(key), deg, part)
    return hopf.character(scheme.algebra, values, grade=top)


def random_infinitesimal(hopf, scheme, rng: random.Random, part: str = "generic", max_grade: int | None = None):
    top = hopf.max_grade if max_grade is None else max_grade
    chi = random_character(hopf, scheme, rng, part, top)
    return hopf.infinitesimal(scheme.algebra, chi.generator_values(), grade=top)
