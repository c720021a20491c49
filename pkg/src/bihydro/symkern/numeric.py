"""Arbitrary-precision complex evaluation with principal branches."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

import mpmath

from .expr import Add, Atanh, Const, Exp, Expr, Log, Mul, Pow, Sym
from .render import render

Scalar = Union[int, Fraction, complex, "mpmath.mpc", "mpmath.mpf"]


class SingularEvaluation(ArithmeticError):
    """Raised when a subterm hits a pole or a logarithmic singularity."""

    def __init__(self, subterm: Expr, reason: str):
        super().__init__(f"{reason} in {render(subterm)}")
        self.subterm = subterm
        self.reason = reason


@dataclass(frozen=True)
class EvalPoint:
    values: Mapping[str, Scalar]
    precision: int = 256

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")


@dataclass
class Evaluation:
    value: "mpmath.mpc"
    max_magnitude: "mpmath.mpf"
    ctx: object = field(repr=False, default=None)


@lru_cache(maxsize=None)
def context(precision: int):
    ctx = mpmath.MPContext()
    ctx.prec = precision
    return ctx


def _to_number(ctx, v):
    if isinstance(v, Fraction):
        return ctx.mpc(ctx.mpf(v.numerator) / v.denominator)
    if isinstance(v, int):
        return ctx.mpc(v)
    if isinstance(v, complex):
        return ctx.mpc(v.real, v.imag)
    return ctx.mpc(v)


class _Evaluator:
    """Evaluates many expressions at one point, sharing subterm values.

    The memo stores, per node, its value and the largest magnitude met
    anywhere in its subtree.
    """

    def __init__(self, point: EvalPoint, resolver=None):
        self.ctx = ctx = context(point.precision)
        self.values = {k: _to_number(ctx, v) for k, v in point.values.items()}
        self.resolver = resolver
        self.memo: dict = {}

    def run(self, e: Expr):
        hit = self.memo.get(e)
        if hit is not None:
            return hit
        ctx = self.ctx
        mag = ctx.mpf(0)
        if isinstance(e, Const):
            z = ctx.mpc(ctx.mpf(e.value.numerator) / e.value.denominator)
        elif isinstance(e, Sym):
            z = self.values.get(e.name)
            if z is None:
                if self.resolver is None:
                    raise KeyError(f"symbol {e.name!r} has no value at this point")
                z = self.values[e.name] = _to_number(ctx, self.resolver(e.name))
        elif isinstance(e, Add):
            z = ctx.mpc(ctx.mpf(e.const.numerator) / e.const.denominator)
            for t in e.terms:
                zt, mt = self.run(t)
                z += zt
                mag = max(mag, mt)
        elif isinstance(e, Mul):
            z = ctx.mpc(ctx.mpf(e.coeff.numerator) / e.coeff.denominator)
            for f in e.factors:
                zf, mf = self.run(f)
                z *= zf
                mag = max(mag, mf)
        else:
            x, mag = self.run(e.arg if not isinstance(e, Pow) else e.base)
            if isinstance(e, Pow):
                z = self.power(e, x)
            elif isinstance(e, Exp):
                z = ctx.exp(x)
            elif isinstance(e, Log):
                if x == 0:
                    raise SingularEvaluation(e, "log of zero")
                z = ctx.log(x)
            elif isinstance(e, Atanh):
                if x == 1 or x == -1:
                    raise SingularEvaluation(e, "ArcTanh at +-1")
                # 1/2 log((1+x)/(1-x)); on the real cut |x| > 1 this picks
                # Im = +pi/2 sign(x), the convention of common CAS systems
                z = ctx.log((1 + x) / (1 - x)) / 2
            else:
                raise TypeError(type(e).__name__)
        out = (z, max(mag, abs(z)))
        self.memo[e] = out
        return out

    def power(self, e: Pow, x):
        ctx = self.ctx
        r = e.exp
        if x == 0:
            if r < 0:
                raise SingularEvaluation(e, "zero raised to a negative power")
            return ctx.mpc(0)
        if r.denominator == 1:
            return x ** int(r)
        if r.denominator == 2:
            return ctx.sqrt(x) ** int(r.numerator)
        return ctx.exp(ctx.mpf(r.numerator) / r.denominator * ctx.log(x))


def evaluate_tracked(e: Expr, point: EvalPoint) -> Evaluation:
    ev = _Evaluator(point)
    z, mag = ev.run(e)
    return Evaluation(z, mag, ev.ctx)


class PointEvaluator(_Evaluator):
    """Public handle for evaluating several expressions at one point."""

    def evaluate(self, e: Expr) -> Evaluation:
        z, mag = self.run(e)
        return Evaluation(z, mag, self.ctx)


def evaluate(e: Expr, point: EvalPoint):
    """Value of ``e`` at ``point`` as an mpmath complex number."""
    return evaluate_tracked(e, point).value
