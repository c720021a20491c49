"""Expansion and rational-function normalization.

Non-rational subterms (exp, log, ArcTanh, fractional powers) are treated as
independent indeterminates, so the normalization is sound but may miss
relations between them.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

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
    atanh,
    const,
    exp,
    log,
    mul,
    power,
)

# sparse multivariate polynomials: {exponent tuple: Fraction}


def _padd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + sign * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, 0) + va * vb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _pscale(a: dict, c: Fraction, shift: tuple | None = None) -> dict:
    if shift is None:
        return {k: v * c for k, v in a.items()}
    return {tuple(x + y for x, y in zip(k, shift)): v * c for k, v in a.items()}


def _div_exact(a: dict, b: dict):
    """Quotient a/b when b divides a exactly, else None."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q: dict = {}
    ltb = max(b)
    cb = b[ltb]
    a = dict(a)
    while a:
        lta = max(a)
        diff = tuple(x - y for x, y in zip(lta, ltb))
        if any(d < 0 for d in diff):
            return None
        c = a[lta] / cb
        q[diff] = q.get(diff, 0) + c
        a = _padd(a, _pscale(b, c, diff), -1)
    return q


def _deg(a: dict, i: int) -> int:
    return max((k[i] for k in a), default=0)


def _coeff(a: dict, i: int, d: int) -> dict:
    return {k[:i] + (0,) + k[i + 1 :]: v for k, v in a.items() if k[i] == d}


def _monic(a: dict) -> dict:
    if not a:
        return a
    c = a[max(a)]
    return {k: v / c for k, v in a.items()}


def _one(nvars: int) -> dict:
    return {(0,) * nvars: Fraction(1)}


def _content(a: dict, i: int, nvars: int) -> dict:
    g: dict = {}
    for d in sorted({k[i] for k in a}):
        g = _gcd(g, _coeff(a, i, d), nvars)
        if len(g) == 1 and not any(next(iter(g))):
            break
    return g


def _prem(a: dict, b: dict, i: int) -> dict:
    db = _deg(b, i)
    lcb = _coeff(b, i, db)
    r = a
    while r and _deg(r, i) >= db:
        dr = _deg(r, i)
        shift = tuple(dr - db if j == i else 0 for j in range(len(next(iter(r)))))
        term = {tuple(x + y for x, y in zip(k, shift)): v for k, v in _coeff(r, i, dr).items()}
        r = _padd(_pmul(lcb, r), _pmul(term, b), -1)
    return r


def _gcd(a: dict, b: dict, nvars: int) -> dict:
    if not a:
        return _monic(b)
    if not b:
        return _monic(a)
    present = [i for i in range(nvars) if _deg(a, i) or _deg(b, i)]
    if not present:
        return _one(nvars)
    i = present[0]
    if _deg(a, i) == 0:
        return _gcd(a, _content(b, i, nvars), nvars)
    if _deg(b, i) == 0:
        return _gcd(_content(a, i, nvars), b, nvars)
    ca, cb = _content(a, i, nvars), _content(b, i, nvars)
    c = _gcd(ca, cb, nvars)
    pa, pb = _div_exact(a, ca), _div_exact(b, cb)
    if _deg(pa, i) < _deg(pb, i):
        pa, pb = pb, pa
    while pb:
        r = _prem(pa, pb, i)
        pa = pb
        pb = _div_exact(r, _content(r, i, nvars)) if r else {}
    pa = _div_exact(pa, _content(pa, i, nvars))
    return _monic(_pmul(c, pa))


class _Ring:
    """Maps atoms to polynomial variables.

    Fractional powers of a common base share one variable ``b^(1/L)`` with
    ``L`` the lcm of the exponent denominators, and ``exp(c*t)`` for rational
    ``c`` becomes a power of ``exp(t/L)``.  Both rewrites hold on principal
    branches, so the normalization stays sound.
    """

    def __init__(self):
        self.atoms: list = []
        self.index: dict = {}
        self.denoms: dict = {}

    def var(self, key, atom: Expr) -> int:
        i = self.index.get(key)
        if i is None:
            i = self.index[key] = len(self.atoms)
            self.atoms.append(atom)
        return i

    def _note(self, key, den: int) -> None:
        old = self.denoms.get(key, 1)
        self.denoms[key] = old * den // gcd(old, den)

    def scan(self, e: Expr) -> None:
        if isinstance(e, Const):
            return
        if isinstance(e, Add):
            for t in e.terms:
                self.scan(t)
        elif isinstance(e, Mul):
            for f in e.factors:
                self.scan(f)
        elif isinstance(e, Pow):
            if e.exp.denominator == 1:
                self.scan(e.base)
            else:
                self._note(e.base, e.exp.denominator)
        elif isinstance(e, Exp):
            c, t = _split_exp(e.arg)
            self._note(("exp", t), c.denominator)

    def collect(self, e: Expr) -> None:
        self.scan(e)
        self._collect(e)

    def _collect(self, e: Expr) -> None:
        if isinstance(e, Const):
            return
        if isinstance(e, Add):
            for t in e.terms:
                self._collect(t)
        elif isinstance(e, Mul):
            for f in e.factors:
                self._collect(f)
        elif isinstance(e, Pow) and e.exp.denominator == 1:
            self._collect(e.base)
        else:
            self._monomial(e)

    def _monomial(self, e: Expr) -> tuple:
        """(variable index, integer exponent) representing the atom ``e``."""
        if isinstance(e, Pow):
            L = self.denoms[e.base]
            i = self.var(e.base, power(e.base, Fraction(1, L)))
            return i, int(e.exp * L)
        if isinstance(e, Exp):
            c, t = _split_exp(e.arg)
            L = self.denoms[("exp", t)]
            i = self.var(("exp", t), exp(mul(const(Fraction(1, L)), t)))
            return i, int(c * L)
        L = self.denoms.get(e, 1)
        i = self.var(e, power(e, Fraction(1, L)) if L > 1 else e)
        return i, L

    def to_rat(self, e: Expr, n: int) -> tuple:
        if isinstance(e, Const):
            return ({(0,) * n: e.value} if e.value else {}), _one(n)
        if isinstance(e, Add):
            num, den = self.to_rat(const(e.const), n)
            for t in e.terms:
                tn, td = self.to_rat(t, n)
                num, den = _padd(_pmul(num, td), _pmul(tn, den)), _pmul(den, td)
                num, den = _reduce(num, den, n)
            return num, den
        if isinstance(e, Mul):
            num, den = {(0,) * n: e.coeff}, _one(n)
            for f in e.factors:
                fn, fd = self.to_rat(f, n)
                num, den = _pmul(num, fn), _pmul(den, fd)
            return _reduce(num, den, n)
        if isinstance(e, Pow) and e.exp.denominator == 1:
            bn, bd = self.to_rat(e.base, n)
            k = e.exp.numerator
            if k < 0:
                bn, bd, k = bd, bn, -k
                if not bd:
                    raise ZeroDivisionError("division by an identically zero polynomial")
            num, den = _one(n), _one(n)
            for _ in range(k):
                num, den = _pmul(num, bn), _pmul(den, bd)
            return num, den
        i, k = self._monomial(e)
        mono = {tuple(abs(k) if j == i else 0 for j in range(n)): Fraction(1)}
        return (mono, _one(n)) if k >= 0 else (_one(n), mono)

    def to_expr(self, p: dict) -> Expr:
        terms = []
        for k, c in sorted(p.items()):
            factors = [power(self.atoms[i], d) for i, d in enumerate(k) if d]
            terms.append(mul(const(c), *factors))
        return add(*terms)


def _split_exp(arg: Expr) -> tuple:
    """Write ``arg = c * t`` with rational ``c``."""
    if isinstance(arg, Const):
        return arg.value, ONE
    if isinstance(arg, Mul):
        c = arg.coeff
        return c, mul(const(1 / c), arg)
    return Fraction(1), arg


def _reduce(num: dict, den: dict, n: int) -> tuple:
    if not num:
        return {}, _one(n)
    g = _gcd(num, den, n)
    if not (len(g) == 1 and not any(next(iter(g)))):
        num, den = _div_exact(num, g), _div_exact(den, g)
    c = den[max(den)]
    return {k: v / c for k, v in num.items()}, {k: v / c for k, v in den.items()}


def _inner(e: Expr) -> Expr:
    """Simplify the arguments of non-rational nodes."""
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Add):
        return add(const(e.const), *(_inner(t) for t in e.terms))
    if isinstance(e, Mul):
        return mul(const(e.coeff), *(_inner(f) for f in e.factors))
    if isinstance(e, Pow):
        base = _inner(e.base) if e.exp.denominator == 1 else simplify(e.base)
        return power(base, e.exp)
    if isinstance(e, Exp):
        return exp(simplify(e.arg))
    if isinstance(e, Log):
        return log(simplify(e.arg))
    if isinstance(e, Atanh):
        return atanh(simplify(e.arg))
    raise TypeError(type(e).__name__)


def simplify(e: Expr) -> Expr:
    """Constant folding, like-term collection and rational normalization."""
    if isinstance(e, (Const, Sym)):
        return e
    e = _inner(e)
    ring = _Ring()
    ring.collect(e)
    n = len(ring.atoms)
    if n == 0:
        return e
    num, den = ring.to_rat(e, n)
    if not num:
        return ZERO
    out_num = ring.to_expr(num)
    if den == _one(n):
        return out_num
    return mul(out_num, power(ring.to_expr(den), -1))


def expand(e: Expr) -> Expr:
    """Fully distribute products and positive integer powers of sums."""
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Add):
        return add(const(e.const), *(expand(t) for t in e.terms))
    if isinstance(e, Mul):
        out = [const(e.coeff)]
        for f in e.factors:
            f = expand(f)
            parts = f.args if isinstance(f, Add) else (f,)
            out = [mul(a, b) for a in out for b in parts]
        return add(*out)
    if isinstance(e, Pow):
        base = expand(e.base)
        if isinstance(base, Add) and e.exp.denominator == 1 and e.exp > 0:
            # distribute term by term; mul(base, base) would just rebuild the power
            out = [ONE]
            for _ in range(e.exp.numerator):
                out = [expand(mul(a, b)) for a in out for b in base.args]
            return add(*out)
        return power(base, e.exp)
    if isinstance(e, Exp):
        return exp(expand(e.arg))
    if isinstance(e, Log):
        return log(expand(e.arg))
    if isinstance(e, Atanh):
        return atanh(expand(e.arg))
    raise TypeError(type(e).__name__)


__all__ = ["expand", "simplify"]
