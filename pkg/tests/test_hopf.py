import random
from collections import Counter
from fractions import Fraction

import pytest

from hopfren.hopf import (
    UNIT, GradeError, HopfError, char_inverse, convolution_power, convolve, exp_star,
    forest_product, log_star,
)
from hopfren.laurent import LaurentSeries
from hopfren.polynomial import MomentumPolynomial
from hopfren.schemes import SubtractionScheme
from hopfren.synth import random_character, random_infinitesimal

POLE = SubtractionScheme.pole()
MIN = SubtractionScheme.minimal()


def chars(hopf, scheme, seed, n=1, grade=3):
    rng = random.Random(seed)
    return [random_character(hopf, scheme, rng, max_grade=grade) for _ in range(n)]


def keys(hopf, G, *names):
    return [hopf.key_of(G(n)) for n in names]


def test_coproduct_unit_and_primitive(hopf, G):
    assert list(hopf.coproduct(UNIT)) == [(UNIT, UNIT, 1)]
    b1 = hopf.forest(G("B1"))
    assert hopf.coproduct(b1).as_dict() == {(b1, UNIT): 1, (UNIT, b1): 1}


def test_coproduct_o3(hopf, G):
    o3, b1, n2 = (hopf.forest(G(n)) for n in ("O3", "B1", "N2"))
    terms = hopf.coproduct(o3)
    # the two inserted bubbles are isomorphic, so their terms merge
    assert terms.as_dict() == {
        (o3, UNIT): 1, (UNIT, o3): 1, (b1, n2): 2, (forest_product(b1, b1), b1): 1,
    }
    assert terms.total_multiplicity == 5


def test_coproduct_grading(hopf4):
    for f in hopf4.forests(4):
        for left, right, m in hopf4.coproduct(f):
            assert m > 0
            assert hopf4.grade(left) + hopf4.grade(right) == hopf4.grade(f)


def test_coassociativity_to_grade_4(hopf4):
    forests = hopf4.forests(4)
    assert len(forests) > 50
    for f in forests:
        assert hopf4.coproduct_left_iterated(f) == hopf4.coproduct_right_iterated(f)


def test_coproduct_multiplicative(hopf4):
    rng = random.Random(2)
    forests = hopf4.forests(2)
    for _ in range(40):
        a, b = rng.choice(forests), rng.choice(forests)
        expect = Counter()
        for l1, r1, m1 in hopf4.coproduct(a):
            for l2, r2, m2 in hopf4.coproduct(b):
                expect[(forest_product(l1, l2), forest_product(r1, r2))] += m1 * m2
        assert hopf4.coproduct(forest_product(a, b)).as_dict() == dict(expect)


def test_convolution_unit(hopf):
    for scheme in (POLE, MIN):
        (phi,) = chars(hopf, scheme, 1)
        e = hopf.unit_form(scheme.algebra)
        assert convolve(e, phi).equals(phi)
        assert convolve(phi, e).equals(phi)


def test_convolution_examples(hopf, G):
    phi, psi = chars(hopf, POLE, 4, 2)
    b1, o3, n2 = keys(hopf, G, "B1", "O3", "N2")
    conv = convolve(phi, psi)
    assert conv((b1,)) == phi((b1,)) + psi((b1,))
    expect = (phi((o3,)) + psi((o3,)) + phi((b1,)) * psi((n2,)) * 2
              + phi((b1,)) * phi((b1,)) * psi((b1,)))
    assert conv((o3,)) == expect


def test_convolution_associative_and_characters_close(hopf):
    for scheme in (POLE, MIN):
        f, g, h = chars(hopf, scheme, 9, 3)
        assert convolve(convolve(f, g), h).equals(convolve(f, convolve(g, h)))
        fg = convolve(f, g, kind="general")
        assert fg.is_multiplicative() is None
        assert fg.equals(convolve(f, g))


def test_mismatched_algebras(hopf):
    (a,) = chars(hopf, POLE, 1)
    (b,) = chars(hopf, MIN, 1)
    with pytest.raises(HopfError):
        convolve(a, b)


def test_grade_limit(hopf, G):
    (phi,) = chars(hopf, POLE, 1, grade=2)
    with pytest.raises(GradeError):
        phi((hopf.key_of(G("O3")),))


def test_inverse_examples(hopf, G):
    e = hopf.unit_form(LaurentSeries)
    assert char_inverse(e).equals(e)
    (phi,) = chars(hopf, POLE, 6)
    inv = char_inverse(phi)
    b1, n2 = keys(hopf, G, "B1", "N2")
    assert inv((b1,)) == -phi((b1,))
    assert inv((n2,)) == -phi((n2,)) + phi((b1,)) * phi((b1,))


def test_inverse_against_geometric_series(hopf):
    for scheme in (POLE, MIN):
        (phi,) = chars(hopf, scheme, 8)
        inv = char_inverse(phi)
        e = hopf.unit_form(scheme.algebra)
        assert convolve(inv, phi).equals(e)
        assert convolve(phi, inv).equals(e)
        delta = e - phi
        series = e
        for k in range(1, 4):
            series = series + convolution_power(delta, k)
        assert series.equals(inv)


def test_inverse_requires_unit(hopf):
    bad = hopf.general(LaurentSeries, lambda f: LaurentSeries.constant(2))
    with pytest.raises(HopfError):
        char_inverse(bad)


def test_exp_examples(hopf, G):
    zero = hopf.infinitesimal(MomentumPolynomial, {})
    assert exp_star(zero).equals(hopf.unit_form(MomentumPolynomial))
    mu = random_infinitesimal(hopf, MIN, random.Random(3))
    ex = exp_star(mu)
    b1, n2 = keys(hopf, G, "B1", "N2")
    assert ex((b1,)) == mu((b1,))
    # Delta(N2) has one B1 (x) B1 term
    assert ex((n2,)) == mu((n2,)) + mu((b1,)) * mu((b1,)) * Fraction(1, 2)
    assert ex.is_multiplicative() is None


def test_exp_rejects_non_infinitesimal(hopf):
    (phi,) = chars(hopf, POLE, 1)
    with pytest.raises(HopfError):
        exp_star(phi - hopf.unit_form(LaurentSeries))


def test_log_examples(hopf, G):
    e = hopf.unit_form(LaurentSeries)
    assert all(v.is_zero() for v in log_star(e).generator_values().values())
    (phi,) = chars(hopf, POLE, 12)
    b1 = hopf.key_of(G("B1"))
    assert log_star(phi)((b1,)) == phi((b1,))


def test_exp_log_round_trips(hopf):
    for scheme in (POLE, MIN):
        rng = random.Random(21)
        for _ in range(3):
            phi = random_character(hopf, scheme, rng)
            lg = log_star(phi)
            assert lg.is_infinitesimal() is None
            assert exp_star(lg).equals(phi)
            mu = random_infinitesimal(hopf, scheme, rng)
            assert log_star(exp_star(mu)).equals(mu)


def test_names_and_lookup(hopf, G):
    b1 = hopf.key_of("B1")
    assert b1 == G("B1").key
    assert hopf.name(b1) == "B1"
    assert hopf.forest_name(hopf.forest("B1", "B1")) == "B1*B1"
    with pytest.raises(HopfError):
        hopf.key_of("nope")
