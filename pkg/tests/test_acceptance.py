"""Acceptance criteria 1-10. Each test prints one PASS/FAIL line, visible
even under output capture, and then asserts the same verdict."""

import random

import pytest

from hopfren.corpus import CHAIN, FOUR_POINT, THREE_POINT, corpus_graph, load_corpus
from hopfren.degrees import DegreeFunction, critical_degree, validate_degree_function
from hopfren.graphs import contract
from hopfren.hopf import GraphHopfAlgebra, convolve, exp_star, log_star
from hopfren.laurent import pole_part
from hopfren.polynomial import MomentumPolynomial, taylor_jet
from hopfren.renorm import (
    bogoliubov, exponential_left, exponential_right, forest_expansion_oracle, regularity_check,
)
from hopfren.schemes import (
    SubtractionScheme, classify_scheme, lift_projector, rb_family_check, rota_baxter_holds,
)
from hopfren.synth import random_character, random_infinitesimal, random_laurent, random_polynomial

MAX_GRADE = 3


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def session():
    return GraphHopfAlgebra(load_corpus(), max_grade=MAX_GRADE)


def test_1_power_counting(report, session):
    graphs = load_corpus() + [session.graph(k) for k in session.generator_keys()]
    bad = []
    for g in graphs:
        n = g.n_legs
        closed = {(4, 4): 4 - n, (6, 3): 6 - 2 * n}[(g.theory.dimension, g.theory.valence)]
        if g.omega != closed:
            bad.append(g.name)
    report(1, not bad, f"omega closed forms on {len(graphs)} graphs (corpus and generated)"
           + (f", mismatches {bad}" if bad else ""))


def test_2_critical_degree_table(report):
    expected = {"B1": 2, "N2": 4, "N3": 6, "T1": 0, "T2A": 0, "T2B": 2, "F1": 0, "F2": 0}
    assert set(expected) == set(CHAIN + THREE_POINT + FOUR_POINT)
    got = {n: critical_degree(corpus_graph(n)) for n in expected}
    report(2, got == expected, f"abar = {got}")


def test_3_wood_of_o3(report):
    o3 = corpus_graph("O3")
    labels = [s.label() for s in o3.wood]
    s1, s2, s12 = o3.wood
    loops = (contract(o3, s2).loops, contract(o3, s12).loops)
    ok = labels == ["{c.d}", "{e.f}", "{c.d;e.f}"] and loops == (2, 1)
    report(3, ok, f"wood {labels}, contraction loops by S2, S12 = {loops}")


def test_4_jet_identities(report):
    rng = random.Random(4)
    comp = 0
    for _ in range(500):
        m = rng.randint(1, 3)
        ks = [rng.randint(0, 3) for _ in range(m)]
        fs = [random_polynomial(rng, [f"p{i}_1", f"p{i}_2"], range(0, 5)) for i in range(m)]
        rem, low = MomentumPolynomial.one(), MomentumPolynomial.one()
        for f, k in zip(fs, ks):
            rem = rem * (f - taylor_jet(f, k))
            low = low * taylor_jet(f, k)
        comp += (taylor_jet(rem, rng.randint(-1, sum(k + 1 for k in ks) - 1)).is_zero()
                 and taylor_jet(low, sum(ks) + rng.randint(0, 2)) == low)
    fam = 0
    for _ in range(500):
        f = random_polynomial(rng, ["p_1", "p_2"], range(0, 5))
        g = random_polynomial(rng, ["q_1"], range(0, 5))
        fam += rb_family_check(rng.randint(0, 4), rng.randint(0, 4), f, g)
    report(4, comp == 500 and fam == 500,
           f"jet composition {comp}/500, Rota-Baxter family {fam}/500")


def test_5_scheme_classification(report):
    corpus = load_corpus()
    rng = random.Random(5)
    rb = sum(
        rota_baxter_holds(pole_part, random_laurent(rng, rng.randint(0, 3), 3),
                          random_laurent(rng, rng.randint(0, 3), 3))
        for _ in range(500)
    )
    pole = classify_scheme(SubtractionScheme.pole(), corpus, samples=200, seed=5)
    minimal = classify_scheme(SubtractionScheme.minimal(), corpus, samples=200, seed=5)
    critical = classify_scheme(SubtractionScheme.critical(), corpus, samples=200, seed=5)
    o3_witness = [w for w in minimal.ct.witnesses if w.graph == "O3" and w.spinney == "{c.d;e.f}"]
    ok = (rb == 500 and pole.st == "confirmed-on-corpus" and minimal.rt.confirmed
          and minimal.ct.status == "refuted" and bool(o3_witness) and critical.ct.confirmed)
    w = o3_witness[0] if o3_witness else None
    detail = (f"pole ST {pole.st} (RB {rb}/500); minimal RT {minimal.rt.status}, "
              f"CT {minimal.ct.status}"
              + (f" (witness O3 {w.spinney}, seed {w.seed}, sample {w.sample}, degrees {w.degrees()})" if w else "")
              + f"; critical CT {critical.ct.status}; critical RT reported: {critical.rt.status}")
    report(5, ok, detail)


def test_6_lemmas(report, session):
    scheme = SubtractionScheme.minimal()
    rng = random.Random(6)
    failures = {"RT closure": 0, "regular closure": 0, "exp regular": 0, "log regular": 0}
    pairs = 100
    for _ in range(pairs):
        phi = random_character(session, scheme, rng)
        psi = random_character(session, scheme, rng)
        p_phi, p_psi = lift_projector(scheme, phi)[1], lift_projector(scheme, psi)[1]
        prod = convolve(p_phi, p_psi)
        failures["RT closure"] += not lift_projector(scheme, prod)[1].equals(prod)
        r1 = random_character(session, scheme, rng, part="regular")
        r2 = random_character(session, scheme, rng, part="regular")
        failures["regular closure"] += not regularity_check(convolve(r1, r2), scheme, MAX_GRADE).holds
        mu = random_infinitesimal(session, scheme, rng, part="regular")
        failures["exp regular"] += not regularity_check(exp_star(mu), scheme, MAX_GRADE).holds
        lg = log_star(r1)
        failures["log regular"] += not (
            lg.is_infinitesimal() is None
            and all(scheme.plus(session.graph(k), v) == v for k, v in lg.generator_values().items())
        )
    report(6, not any(failures.values()), f"{pairs} character pairs, failures {failures}")


def test_7_main_theorem(report, session):
    scheme = SubtractionScheme.minimal()
    rng = random.Random(7)
    corpus = [g for g in load_corpus() if g.loops <= MAX_GRADE]
    n = 50
    agree = factor = oracle = 0
    for _ in range(n):
        phi = random_character(session, scheme, rng)
        res = bogoliubov(phi, scheme, MAX_GRADE)
        pair, _ = exponential_left(phi, scheme, MAX_GRADE)
        agree += pair.irregular.equals(res.C) and pair.regular.equals(res.R)
        factor += convolve(res.C, phi).equals(res.R)
        oracle += all(forest_expansion_oracle(phi, scheme, g) == res.C((g.key,)) for g in corpus)
    report(7, agree == factor == oracle == n,
           f"{n} characters: C = phi- and R = Upsilon {agree}/{n}, C*phi = R {factor}/{n}, "
           f"oracle {oracle}/{n} on {len(session.forests())} forests up to grade {MAX_GRADE}")


def test_8_st_uniqueness(report, session):
    scheme = SubtractionScheme.pole()
    rng = random.Random(8)
    n = 50
    same = 0
    for _ in range(n):
        phi = random_character(session, scheme, rng)
        ref = bogoliubov(phi, scheme, MAX_GRADE).as_pair()
        left = exponential_left(phi, scheme, MAX_GRADE)[0]
        right = exponential_right(phi, scheme, MAX_GRADE)[0].normalised()
        same += all(p.irregular.equals(ref.irregular) and p.regular.equals(ref.regular)
                    for p in (left, right))
    report(8, same == n, f"Model A: bogoliubov, exp-left, exp-right identical for {same}/{n} characters")


def test_9_degree_annihilation(report, session):
    bad = []
    for name in ("minimal", "critical"):
        scheme = SubtractionScheme.from_name(name)
        phi = random_character(session, scheme, random.Random(9))
        res = bogoliubov(phi, scheme, MAX_GRADE)
        for key in res.rbar:
            a = scheme.degree_of(session.graph(key))
            if not taylor_jet(res.R((key,)), a).is_zero():
                bad.append((name, session.name(key)))
    report(9, not bad, f"taylor_jet(R, a) = 0 on {len(session.generator_keys())} generators, both schemes"
           + (f", failures {bad}" if bad else ""))


def test_10_degree_validator_substitute(report):
    corpus = load_corpus()
    results = {name: all(validate_degree_function(getattr(DegreeFunction, name)(), g).valid for g in corpus)
               for name in ("minimal", "critical")}
    report(10, all(results.values()),
           f"finiteness not reproducible at desk scale; substitute: degree validator {results}")
