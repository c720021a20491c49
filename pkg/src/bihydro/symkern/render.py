"""Render expressions back into the input grammar (``parse(render(e)) == e``)."""

from __future__ import annotations

from fractions import Fraction

from .expr import Add, Atanh, Const, Exp, Expr, Func, Log, Mul, Pow, Sym

_FUNC_NAMES = {Exp: "exp", Log: "log", Atanh: "ArcTanh"}


def _fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _exponent(r: Fraction) -> str:
    if r.denominator == 1 and r > 0:
        return str(r.numerator)
    return f"({_fraction(r)})"


def _atom(e: Expr) -> str:
    """Render e so it can stand as a power base or a product factor."""
    if isinstance(e, (Sym, Func)):
        return render(e)
    if isinstance(e, Const) and e.value.denominator == 1 and e.value >= 0:
        return render(e)
    if isinstance(e, Pow) and e.exp == Fraction(1, 2):
        return render(e)
    return f"({render(e)})"


def _power(base: Expr, r: Fraction) -> str:
    if r == Fraction(1, 2):
        return f"sqrt({render(base)})"
    if r == 1:
        return _factor(base)
    return f"{_atom(base)}^{_exponent(r)}"


def _factor(e: Expr) -> str:
    if isinstance(e, Pow):
        return _power(e.base, e.exp)
    if isinstance(e, Add):
        return f"({render(e)})"
    return _atom(e)


def _product(coeff: Fraction, factors: tuple) -> str:
    num: list[str] = []
    den: list[str] = []
    if abs(coeff.numerator) != 1:
        num.append(str(abs(coeff.numerator)))
    if coeff.denominator != 1:
        den.append(str(coeff.denominator))
    for f in factors:
        if isinstance(f, Pow) and f.exp < 0:
            den.append(_power(f.base, -f.exp))
        else:
            num.append(_factor(f))
    text = "*".join(num) if num else "1"
    if den:
        text += "/" + (den[0] if len(den) == 1 else "(" + "*".join(den) + ")")
    return ("-" if coeff < 0 else "") + text


def render(e: Expr) -> str:
    if isinstance(e, Const):
        return _fraction(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Func):
        return f"{_FUNC_NAMES[type(e)]}({render(e.arg)})"
    if isinstance(e, Pow):
        if e.exp < 0:
            return _product(Fraction(1), (e,))
        return _power(e.base, e.exp)
    if isinstance(e, Mul):
        return _product(e.coeff, e.factors)
    if isinstance(e, Add):
        parts = []
        for t in e.args:
            s = render(t)
            if parts:
                if s.startswith("-"):
                    parts.append(" - " + s[1:])
                else:
                    parts.append(" + " + s)
            else:
                parts.append(s)
        return "".join(parts)
    raise TypeError(f"unknown node {type(e).__name__}")
