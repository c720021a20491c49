from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bihydro.symkern import (
    ONE,
    ZERO,
    EvalPoint,
    InconclusiveError,
    NotPolynomialError,
    ParseError,
    SingularEvaluation,
    ZeroTestConfig,
    ZeroTester,
    add,
    atanh,
    const,
    differentiate,
    evaluate,
    evaluate_tracked,
    exp,
    expand,
    is_identically_zero,
    log,
    mul,
    parse,
    polynomial_coefficients,
    power,
    render,
    simplify,
    sqrt,
    substitute,
    sym,
)

from conftest import num, to_sympy

x, y = sym("x"), sym("y")


# expression strategy over a domain where everything is analytic: x, y in [1/2, 3/2]

atoms = st.one_of(
    st.sampled_from([x, y]),
    st.fractions(min_value=-5, max_value=5, max_denominator=7).map(const),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: add(*t)),
        st.tuples(children, children).map(lambda t: mul(*t)),
        st.tuples(children, st.sampled_from([2, 3, Fraction(1, 2), Fraction(-1, 3)])).map(
            lambda t: power(add(t[0], mul(t[0], t[0]), const(3)), t[1]) if t[1].__class__ is Fraction else power(t[0], t[1])
        ),
        children.map(lambda c: exp(power(add(const(2), mul(c, c)), -1))),
        children.map(lambda c: log(add(const(2), mul(c, c)))),
    )


exprs = st.recursive(atoms, _extend, max_leaves=8)


# parser and renderer


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1 + 2*3", "7"),
        ("2^3^2", "512"),
        ("-2^2", "-4"),
        ("(1/2)^2", "1/4"),
        ("x - -x", "2*x"),
        ("x*y/x", "y"),
        ("e^x", "exp(x)"),
        ("exp(0)", "1"),
        ("log(1)", "0"),
        ("sqrt(x)^2", "x"),
        ("x^(1/2)", "sqrt(x)"),
    ],
)
def test_parse_precedence(text, expected):
    assert render(parse(text)) == expected


@pytest.mark.parametrize(
    "text",
    ["(x + 1", "x +", "x ** 2", "foo(x)", "x^y", "1/0", "x $ y", "", "0^(-1)", "sqrt(x"],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_offset_points_at_token():
    with pytest.raises(ParseError) as info:
        parse("x + foo(1)")
    assert info.value.offset == 4


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_render_parse_round_trip(e):
    assert parse(render(e)) == e


@settings(max_examples=100, deadline=None)
@given(exprs)
def test_render_agrees_with_sympy_numerically(e):
    pt = {"x": Fraction(4, 5), "y": Fraction(6, 5)}
    ours = num(e, **pt)
    theirs = complex(to_sympy(e).subs({sp.Symbol("x"): sp.Rational(4, 5), sp.Symbol("y"): sp.Rational(6, 5)}).evalf(40))
    assert abs(ours - theirs) <= 1e-25 * (1 + abs(theirs))


# normalization


def test_constructors_normalize():
    assert add(x, ZERO) == x
    assert mul(x, ONE) == x
    assert mul(x, ZERO) == ZERO
    assert add(x, mul(const(-1), x)) == ZERO
    assert mul(x, power(x, -1)) == ONE
    assert power(power(x, Fraction(1, 2)), 2) == x
    assert power(power(x, 2), Fraction(1, 2)) != x  # principal branch: sqrt(x^2) is not x
    assert exp(log(x)) == x
    assert add(x, y) == add(y, x)
    assert mul(x, y) == mul(y, x)


def test_exp_products_merge():
    assert mul(exp(x), exp(mul(const(-1), x))) == ONE
    assert simplify(parse("exp(u)*exp(-u) + 1")) == parse("2")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("(x^2 - 1)/(x - 1)", "x + 1"),
        ("x^(3/2)/x^(1/2)", "x"),
        ("(exp(2*u) - 1)/(exp(u) + 1)", "exp(u) - 1"),
        ("1/x + 1/y", "(x + y)/(x*y)"),
    ],
)
def test_simplify_cases(text, expected):
    got = simplify(parse(text))
    assert is_identically_zero(add(got, mul(const(-1), parse(expected)))).is_zero
    assert len(render(got)) <= len(render(parse(text))) + 8


@settings(max_examples=80, deadline=None)
@given(exprs)
def test_simplify_and_expand_preserve_value(e):
    pt = {"x": Fraction(7, 10), "y": Fraction(13, 10)}
    v = num(e, **pt)
    for f in (simplify(e), expand(e)):
        assert abs(num(f, **pt) - v) <= 1e-25 * (1 + abs(v))


def test_polynomial_coefficients():
    lam = sym("lambda_")
    e = parse("(x - lambda_)^2*y + 3")
    cs = polynomial_coefficients(e, "lambda_")
    assert [render(simplify(c)) for c in cs] == [render(simplify(parse("x^2*y + 3"))), render(simplify(parse("-2*x*y"))), "y"]
    with pytest.raises(NotPolynomialError):
        polynomial_coefficients(parse("exp(lambda_)"), "lambda_")
    assert lam.name == "lambda_"


# calculus


@settings(max_examples=150, deadline=None)
@given(exprs)
def test_derivative_matches_sympy(e):
    d = differentiate(e, "x")
    oracle = sp.diff(to_sympy(e), sp.Symbol("x"))
    pt = {"x": Fraction(9, 10), "y": Fraction(11, 10)}
    theirs = complex(oracle.subs({sp.Symbol("x"): sp.Rational(9, 10), sp.Symbol("y"): sp.Rational(11, 10)}).evalf(40))
    ours = num(d, **pt)
    assert abs(ours - theirs) <= 1e-24 * (1 + abs(theirs))


def test_derivative_rules():
    assert differentiate(parse("x^3"), "x") == parse("3*x^2")
    assert differentiate(parse("log(x)"), "x") == parse("1/x")
    assert differentiate(parse("exp(2*x)"), "x") == parse("2*exp(2*x)")
    assert differentiate(parse("x*y"), "y") == x
    d = differentiate(atanh(x), "x")
    assert is_identically_zero(add(d, mul(const(-1), parse("1/(1 - x^2)"))), ZeroTestConfig(default_interval=(Fraction(-1, 2), Fraction(1, 2)))).is_zero


@settings(max_examples=60, deadline=None)
@given(exprs, exprs)
def test_mixed_partials_commute(e, f):
    g = add(e, mul(f, x, y))
    dxy = differentiate(differentiate(g, "x"), "y")
    dyx = differentiate(differentiate(g, "y"), "x")
    assert is_identically_zero(add(dxy, mul(const(-1), dyx))).is_zero


def test_substitute():
    e = parse("x^2 + y")
    assert substitute(e, {"x": parse("y + 1")}) == parse("(y + 1)^2 + y")
    # log(exp(u)) is kept as is (principal branch); it equals u on real samples
    e = substitute(parse("log(wb)"), {"wb": parse("exp(u)")})
    assert is_identically_zero(add(e, mul(const(-1), sym("u")))).is_zero


# numerics and zero testing


def test_arctanh_uses_log_form():
    v = evaluate(atanh(const(Fraction(1, 3))), EvalPoint({}, 200))
    ctx = mpmath.MPContext()
    ctx.prec = 200
    assert abs(v - ctx.atanh(ctx.mpf(1) / 3)) < ctx.mpf(2) ** -190


def test_evaluate_tracks_magnitude():
    r = evaluate_tracked(parse("(x + 10^20)^2 - x^2 - 2*10^20*x - 10^40"), EvalPoint({"x": Fraction(1)}, 256))
    assert abs(r.value) < 1e-30
    assert r.max_magnitude >= 10**40


def test_singular_evaluation_raises():
    with pytest.raises(SingularEvaluation):
        evaluate(parse("1/(x - 1)"), EvalPoint({"x": Fraction(1)}, 128))
    with pytest.raises(SingularEvaluation):
        evaluate(parse("log(x)"), EvalPoint({"x": Fraction(0)}, 128))


@pytest.mark.parametrize(
    "text",
    [
        "sin2 - sin2",
        "(x + y)^2 - x^2 - 2*x*y - y^2",
        "exp(x + y) - exp(x)*exp(y)",
        "log(x*y) - log(x) - log(y)",
        "sqrt(x)*sqrt(x) - x",
        "ArcTanh(x/2) - log((2 + x)/(2 - x))/2",
    ],
)
def test_zero_identities(text):
    assert is_identically_zero(parse(text)).is_zero


def test_nonzero_has_reproducible_witness():
    e = parse("(x + y)^2 - x^2 - y^2")
    v1 = is_identically_zero(e)
    v2 = is_identically_zero(e)
    assert not v1.is_zero
    assert v1.witness == v2.witness
    assert set(v1.witness) == {"x", "y"}
    assert all(isinstance(q, Fraction) for q in v1.witness.values())
    assert abs(num(e, **v1.witness)) > 0.1


def test_tiny_but_nonzero_is_caught_at_256_bits():
    e = parse("x^40 * 2^(-100)")
    assert not is_identically_zero(e).is_zero


def test_seed_changes_points_not_verdicts():
    e = parse("x^3 - x*x*x + y")
    a = is_identically_zero(e, ZeroTestConfig(seed=1))
    b = is_identically_zero(e, ZeroTestConfig(seed=2))
    assert not a.is_zero and not b.is_zero
    assert a.witness != b.witness


def test_inconclusive_when_every_point_is_singular():
    tester = ZeroTester(ZeroTestConfig())
    with pytest.raises(InconclusiveError):
        tester.test(parse("1/(sqrt(x^2) - x)"))


def test_config_validation():
    with pytest.raises(ValueError):
        ZeroTestConfig(samples=2)
    with pytest.raises(ValueError):
        ZeroTestConfig(precision=32)
    assert ZeroTestConfig(precision=256).tol == Fraction(1, 2**128)


def test_sqrt_and_powers():
    assert sqrt(power(x, 4)) in (power(x, 2), power(power(x, 4), Fraction(1, 2)))
    assert render(parse("x^(-2/3)")) == "1/x^(2/3)"
