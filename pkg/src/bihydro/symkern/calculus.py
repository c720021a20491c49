"""Differentiation, substitution and polynomial-coefficient extraction."""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

from .expr import (
    ONE,
    ZERO,
    Add,
    Atanh,
    Const,
    Exp,
    Expr,
    Log,
    Mul,
    Pow,
    Sym,
    add,
    as_expr,
    atanh,
    const,
    exp,
    log,
    mul,
    power,
)


def _name(s) -> str:
    return s.name if isinstance(s, Sym) else s


def differentiate(e: Expr, s) -> Expr:
    """Exact partial derivative of ``e`` with respect to symbol ``s``."""
    return _diff(e, _name(s))


@lru_cache(maxsize=200_000)
def _diff(e: Expr, s: str) -> Expr:
    if s not in e.free_symbols:
        return ZERO
    if isinstance(e, Sym):
        return ONE
    if isinstance(e, Add):
        return add(*(_diff(t, s) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        terms = []
        for i, f in enumerate(fs):
            df = _diff(f, s)
            if df != ZERO:
                terms.append(mul(const(e.coeff), df, *fs[:i], *fs[i + 1 :]))
        return add(*terms)
    if isinstance(e, Pow):
        db = _diff(e.base, s)
        return mul(const(e.exp), power(e.base, e.exp - 1), db)
    if isinstance(e, Exp):
        return mul(e, _diff(e.arg, s))
    if isinstance(e, Log):
        return mul(_diff(e.arg, s), power(e.arg, -1))
    if isinstance(e, Atanh):
        x = e.arg
        return mul(_diff(x, s), power(add(ONE, mul(const(-1), power(x, 2))), -1))
    raise TypeError(f"cannot differentiate {type(e).__name__}")


def substitute(e: Expr, mapping: Mapping) -> Expr:
    """Simultaneous substitution of symbols, renormalizing on the way up."""
    m = {_name(k): as_expr(v) for k, v in mapping.items()}
    if not m:
        return e
    keys = frozenset(m)
    memo: dict = {}

    def go(x: Expr) -> Expr:
        if not (x.free_symbols & keys):
            return x
        hit = memo.get(x)
        if hit is not None:
            return hit
        if isinstance(x, Sym):
            out = m[x.name]
        elif isinstance(x, Add):
            out = add(const(x.const), *(go(t) for t in x.terms))
        elif isinstance(x, Mul):
            out = mul(const(x.coeff), *(go(f) for f in x.factors))
        elif isinstance(x, Pow):
            out = power(go(x.base), x.exp)
        elif isinstance(x, Exp):
            out = exp(go(x.arg))
        elif isinstance(x, Log):
            out = log(go(x.arg))
        elif isinstance(x, Atanh):
            out = atanh(go(x.arg))
        else:
            raise TypeError(type(x).__name__)
        memo[x] = out
        return out

    return go(e)


def gradient(e: Expr, coords: Sequence) -> tuple:
    return tuple(differentiate(e, c) for c in coords)


def derivative_tensors(e: Expr, coords: Sequence):
    """Gradient vector and Hessian matrix of ``e`` in the given coordinates."""
    from .matrix import SymMatrix

    names = [_name(c) for c in coords]
    if len(set(names)) != len(names):
        raise ValueError("coordinates must be pairwise distinct")
    grad = gradient(e, names)
    n = len(names)
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = differentiate(grad[i], names[j])
    return grad, SymMatrix(rows)


class NotPolynomialError(ValueError):
    pass


def polynomial_coefficients(e: Expr, s) -> list:
    """Coefficients ``[c0, c1, ...]`` of ``e`` as a polynomial in ``s``.

    The coefficients are free of ``s``.  Products and non-negative integer
    powers are distributed only where ``s`` occurs.
    """
    s = _name(s)

    def go(x: Expr) -> list:
        if s not in x.free_symbols:
            return [x]
        if isinstance(x, Sym):
            return [ZERO, ONE]
        if isinstance(x, Add):
            out = [const(x.const)]
            for t in x.terms:
                out = _padd(out, go(t))
            return out
        if isinstance(x, Mul):
            out = [const(x.coeff)]
            for f in x.factors:
                out = _pmul(out, go(f))
            return out
        if isinstance(x, Pow) and x.exp.denominator == 1 and x.exp > 0:
            base = go(x.base)
            out = [ONE]
            for _ in range(x.exp.numerator):
                out = _pmul(out, base)
            return out
        raise NotPolynomialError(f"expression is not polynomial in {s}")

    coeffs = go(e)
    while len(coeffs) > 1 and coeffs[-1] == ZERO:
        coeffs.pop()
    return coeffs


def _padd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [add(a[i] if i < len(a) else ZERO, b[i] if i < len(b) else ZERO) for i in range(n)]


def _pmul(a: list, b: list) -> list:
    out = [[] for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x == ZERO:
            continue
        for j, y in enumerate(b):
            if y != ZERO:
                out[i + j].append(mul(x, y))
    return [add(*terms) if terms else ZERO for terms in out]


__all__ = [
    "NotPolynomialError",
    "derivative_tensors",
    "differentiate",
    "gradient",
    "polynomial_coefficients",
    "substitute",
]
