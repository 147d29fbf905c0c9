import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from simpkit.fixtures import MOVIE_FIXTURES
from simpkit.forms import (DarbouxChart, FormError, PolyDForm, PolyVectorField, check_exact_pullback,
                           check_strict_pullback, compose_maps, d, d_M, d_S, liouville_field, movie_chart,
                           movie_form, parse_form, partial_derivative, pullback, verify_movie_field_formula)
from simpkit.poly import Poly, PolyParseError, parse_poly

NAMES = ["q", "p", "s", "sigma", "q1", "s1"]
CHART = DarbouxChart((("q", "p"), ("q1", "p1")), (("s", "sigma"), ("s1", "sigma1")))


def random_poly(rng, names=NAMES, max_deg=4, max_terms=5):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        deg = rng.randint(0, max_deg)
        exps = {}
        for _ in range(deg):
            v = rng.choice(names)
            exps[v] = exps.get(v, 0) + 1
        terms[tuple(sorted(exps.items()))] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return Poly(terms)


def five_point(f, v, point):
    """Exact derivative of a polynomial of degree <= 4 in ``v`` by the five-point stencil."""
    h = Fraction(1, 3)

    def at(shift):
        return f.evaluate({**point, v: point[v] + shift})
    return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h)


P = parse_poly


def test_parse_and_print():
    assert str(P("q*s")) == "q*s"
    assert P("q^2*s^3") == P("q**2 * s**3")
    assert P("-s^5/3") == Poly({(("s", 5),): Fraction(-1, 3)})
    assert str(P("3/2*s - 1")) == "3/2*s - 1"
    assert P("(q + s)^2") == P("q^2 + 2*q*s + s^2")
    for bad in ["q/s", "q +", "2^q", "q^(1/2)", "f(q)"]:
        with pytest.raises(PolyParseError):
            parse_poly(bad)


def test_d_examples():
    assert d(PolyDForm.function(P("q*s"))) == PolyDForm.one_form({"q": P("s"), "s": P("q")})
    assert d(parse_form("p dq")) == PolyDForm.basis("p", "q")
    assert d(parse_form("p dq")).coefficient("q", "p") == P("-1")
    with pytest.raises(FormError):
        d(PolyDForm.basis("p", "q"))


def test_d_of_d_vanishes_on_random_polynomials():
    rng = random.Random(11)
    for _ in range(1000):
        f = random_poly(rng)
        assert d(d(PolyDForm.function(f))).is_zero()


def test_partial_derivatives_match_stencil():
    rng = random.Random(5)
    for _ in range(200):
        f = random_poly(rng)
        point = {v: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for v in NAMES}
        v = rng.choice(NAMES)
        assert f.diff(v).evaluate(point) == five_point(f, v, point)


def test_splitting_examples_and_identity():
    chart = DarbouxChart()
    assert d_S(P("q*s"), chart) == parse_form("q ds")
    assert d_M(P("q*s"), chart) == parse_form("s dq")
    rng = random.Random(2)
    for _ in range(200):
        h = random_poly(rng, ["q", "p", "q1", "p1", "s", "sigma", "s1", "sigma1"])
        assert d(PolyDForm.function(h)) == d_M(h, CHART) + d_S(h, CHART)
        assert {k[0] for k in d_S(h, CHART).coeffs} <= set(CHART.s_coordinates)
    with pytest.raises(FormError):
        partial_derivative(P("q"), "x", chart)


def test_form_algebra():
    a, b = parse_form("p dq"), parse_form("q ds")
    assert a + b == parse_form("p dq + q ds")
    assert a.wedge(b) == -(b.wedge(a))
    assert a.wedge(a).is_zero()
    assert (a - a).is_zero()


def test_movie_form_examples():
    chart = DarbouxChart()
    assert movie_form(parse_form("p dq"), P("0"), chart) == parse_form("p dq + sigma ds")
    lam = movie_form(parse_form("p dq"), P("q*s"), chart)
    assert lam == parse_form("(p + s) dq + (sigma + q) ds")
    assert lam.human() == "(p + s) dq + (q + sigma) ds"
    with pytest.raises(FormError):
        movie_form(parse_form("s dq"), P("0"), chart)


def test_liouville_examples():
    chart = DarbouxChart()
    v = liouville_field(parse_form("p dq + sigma ds"), chart)
    assert v == PolyVectorField({"p": P("p"), "sigma": P("sigma")})
    v = liouville_field(parse_form("(p + s) dq + (sigma + q) ds"), chart)
    assert v == PolyVectorField({"p": P("p + s"), "sigma": P("sigma + q")})
    assert v.human(chart) == "(p + s) d/dp + (q + sigma) d/dsigma"
    only_m = DarbouxChart(s_pairs=())
    assert liouville_field(parse_form("p dq"), only_m) == PolyVectorField({"p": P("p")})
    with pytest.raises(FormError, match="non-Darboux primitive"):
        liouville_field(parse_form("2*p dq + sigma ds"), chart)


@pytest.mark.parametrize("h,lam", MOVIE_FIXTURES)
def test_movie_fixtures(h, lam):
    lam_M = parse_form(lam)
    assert verify_movie_field_formula(h, lam_M)
    chart = movie_chart(lam_M, h)
    form = movie_form(lam_M, h, chart)
    v = liouville_field(form, chart)
    # oracle: contracting the symplectic form with v gives back the primitive
    assert v.contract(chart.symplectic_form()) == form


def test_movie_formula_spot_values():
    chart = DarbouxChart()
    v = liouville_field(movie_form(parse_form("p dq"), P("q^2*s^3"), chart), chart)
    assert v["sigma"] == P("sigma + 3*q^2*s^2")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_liouville_contract_property(seed):
    rng = random.Random(seed)
    h = random_poly(rng, ["q", "p", "s", "sigma"])
    chart = DarbouxChart()
    lam = parse_form("p dq") + parse_form("sigma ds") + d(PolyDForm.function(h))
    v = liouville_field(lam, chart)
    assert v.contract(chart.symplectic_form()) == lam


def test_pullback_examples():
    lam = parse_form("p dq")
    assert check_strict_pullback({}, lam, lam)
    assert check_strict_pullback({"q": P("q + 1"), "p": P("p")}, lam, lam)
    assert not check_strict_pullback({"q": P("2*q")}, lam, lam)
    assert pullback({"q": P("2*q")}, lam) == parse_form("2*p dq")


def test_pullback_respects_composition():
    rng = random.Random(9)
    for _ in range(50):
        f = {"q": random_poly(rng, ["q", "p"], 2, 3), "p": random_poly(rng, ["q", "p"], 2, 3)}
        g = {"q": random_poly(rng, ["q", "p"], 2, 3), "p": random_poly(rng, ["q", "p"], 2, 3)}
        lam = PolyDForm.one_form({"q": random_poly(rng, ["q", "p"], 2, 3), "p": random_poly(rng, ["q", "p"], 2, 3)})
        assert pullback(compose_maps(g, f), lam) == pullback(f, pullback(g, lam))
        assert d(pullback(f, lam)) == pullback(f, d(lam))


def test_exact_pullback_examples():
    lam = parse_form("p dq")
    r = check_exact_pullback({}, lam, lam)
    assert r.exact and r.h.is_zero()
    r = check_exact_pullback({"p": P("p + 1")}, lam, lam)
    assert r.exact and r.h == P("q")
    r = check_exact_pullback({"q": P("2*q")}, lam, lam)
    assert not r.exact
    assert "not closed" in r.report()


def test_exactness_on_random_symplectomorphisms():
    # shears (q, p) -> (q, p + f'(q)) preserve dp∧dq, so the difference is exact
    rng = random.Random(4)
    lam = parse_form("p dq")
    for _ in range(50):
        f = random_poly(rng, ["q"], 4, 4)
        r = check_exact_pullback({"p": P("p") + f.diff("q")}, lam, lam)
        assert r.exact
        assert d(PolyDForm.function(r.h)) == r.difference


def test_form_parsing_roundtrip():
    rng = random.Random(1)
    for _ in range(100):
        form = PolyDForm.one_form({v: random_poly(rng, ["q", "p", "s"], 3, 3) for v in ("q", "p", "s", "sigma")})
        assert parse_form(form.sexpr()) == form
        if not form.is_zero():
            assert parse_form(form.human()) == form
    two = parse_form("(form2 ((1) dp dq))")
    assert two == PolyDForm.basis("p", "q")


def test_chart_inference():
    chart = DarbouxChart.infer({"q1", "p2", "s", "sigma3"})
    assert chart.m_pairs == (("q1", "p1"), ("q2", "p2"))
    assert chart.s_pairs == (("s", "sigma"), ("s3", "sigma3"))
