"""Immutable expression trees with normalizing constructors.

Every node is hashable and carries a precomputed structural key, so equal
trees compare equal and sort deterministically.  The constructors
(:func:`add`, :func:`mul`, :func:`power`, :func:`exp`, :func:`log`,
:func:`atanh`) only apply rewrites that are valid for complex arguments
under principal branches.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Number = Union[int, Fraction]


class Expr:
    __slots__ = ("_key", "_hash", "_free")

    def _init(self, key: tuple, free: frozenset) -> None:
        self._key = key
        self._hash = hash(key)
        self._free = free

    @property
    def free_symbols(self) -> frozenset:
        return self._free

    @property
    def sort_key(self) -> tuple:
        return self._key

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Expr):
            if isinstance(other, (int, Fraction)):
                return isinstance(self, Const) and self.value == other
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __lt__(self, other: Expr) -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        from .render import render

        return f"Expr({render(self)!r})"

    def __str__(self) -> str:
        from .render import render

        return render(self)

    # arithmetic sugar
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, mul(MINUS_ONE, as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), mul(MINUS_ONE, self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return mul(self, power(as_expr(other), -1))

    def __rtruediv__(self, other):
        return mul(as_expr(other), power(self, -1))

    def __neg__(self):
        return mul(MINUS_ONE, self)

    def __pow__(self, exponent):
        if isinstance(exponent, Const):
            exponent = exponent.value
        if not isinstance(exponent, (int, Fraction)):
            raise TypeError("exponents must be exact rationals")
        return power(self, exponent)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: Fraction):
        self.value = value
        self._init((0, value), frozenset())


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._init((1, name), frozenset((name,)))


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: Fraction):
        self.base = base
        self.exp = exp
        self._init((2, base._key, exp), base._free)


class Func(Expr):
    """Unary elementary function node; ``kind`` names the function."""

    __slots__ = ("arg",)
    kind = ""

    def __init__(self, arg: Expr):
        self.arg = arg
        self._init((3, self.kind, arg._key), arg._free)


class Exp(Func):
    __slots__ = ()
    kind = "exp"


class Log(Func):
    __slots__ = ()
    kind = "log"


class Atanh(Func):
    __slots__ = ()
    kind = "atanh"


class Mul(Expr):
    """Product ``coeff * factors[0] * factors[1] * ...``."""

    __slots__ = ("coeff", "factors")

    def __init__(self, coeff: Fraction, factors: tuple):
        self.coeff = coeff
        self.factors = factors
        self._init(
            (4, tuple(f._key for f in factors), coeff),
            frozenset().union(*(f._free for f in factors)),
        )

    @property
    def args(self) -> tuple:
        if self.coeff == 1:
            return self.factors
        return (Const(self.coeff),) + self.factors


class Add(Expr):
    """Sum ``const + terms[0] + terms[1] + ...``."""

    __slots__ = ("const", "terms")

    def __init__(self, const: Fraction, terms: tuple):
        self.const = const
        self.terms = terms
        self._init(
            (5, tuple(t._key for t in terms), const),
            frozenset().union(*(t._free for t in terms)),
        )

    @property
    def args(self) -> tuple:
        if self.const == 0:
            return self.terms
        return self.terms + (Const(self.const),)


_SMALL = {i: Const(Fraction(i)) for i in range(-4, 17)}
ZERO = _SMALL[0]
ONE = _SMALL[1]
MINUS_ONE = _SMALL[-1]


def const(value: Number | str) -> Const:
    value = Fraction(value)
    if value.denominator == 1 and -4 <= value.numerator <= 16:
        return _SMALL[value.numerator]
    return Const(value)


def sym(name: str) -> Sym:
    return Sym(name)


def symbols(names: str | Iterable[str]) -> tuple:
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    return tuple(Sym(n) for n in names)


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return const(x)
    if isinstance(x, str):
        from .parse import parse

        return parse(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def _split_coeff(x: Expr) -> tuple:
    if isinstance(x, Mul):
        if len(x.factors) == 1:
            return x.coeff, x.factors[0]
        if x.coeff == 1:
            return Fraction(1), x
        return x.coeff, Mul(Fraction(1), x.factors)
    return Fraction(1), x


def _scale(rest: Expr, c: Fraction) -> Expr:
    if c == 1:
        return rest
    if isinstance(rest, Mul):
        return Mul(c, rest.factors)
    return Mul(c, (rest,))


def add(*xs: Expr) -> Expr:
    total = Fraction(0)
    coeffs: dict = {}
    stack = list(reversed(xs))
    while stack:
        x = stack.pop()
        if isinstance(x, Const):
            total += x.value
        elif isinstance(x, Add):
            total += x.const
            stack.extend(reversed(x.terms))
        else:
            c, rest = _split_coeff(x)
            coeffs[rest] = coeffs.get(rest, 0) + c
    terms = [_scale(rest, c) for rest, c in coeffs.items() if c != 0]
    if not terms:
        return const(total)
    if len(terms) == 1 and total == 0:
        return terms[0]
    terms.sort(key=_key_of)
    return Add(total, tuple(terms))


def _key_of(x: Expr) -> tuple:
    return x._key


def mul(*xs: Expr) -> Expr:
    coeff = Fraction(1)
    powers: dict = {}
    exp_args: list = []
    stack = list(reversed(xs))
    while stack:
        x = stack.pop()
        if isinstance(x, Const):
            coeff *= x.value
            if coeff == 0:
                return ZERO
        elif isinstance(x, Mul):
            coeff *= x.coeff
            stack.extend(reversed(x.factors))
        elif isinstance(x, Pow):
            powers[x.base] = powers.get(x.base, 0) + x.exp
        elif isinstance(x, Exp):
            exp_args.append(x.arg)
        else:
            powers[x] = powers.get(x, 0) + 1
    factors = []
    redo = False
    for base, r in powers.items():
        if r == 0:
            continue
        p = power(base, r)
        if isinstance(p, (Const, Mul, Exp)):
            redo = True
        factors.append(p)
    if exp_args:
        e = exp(add(*exp_args))
        if not isinstance(e, Exp):
            redo = True
        factors.append(e)
    if redo:
        return mul(const(coeff), *factors)
    if not factors:
        return const(coeff)
    if len(factors) == 1:
        f = factors[0]
        if coeff == 1:
            return f
        if isinstance(f, Add):
            # distribute a bare coefficient over a sum so like terms can meet
            return add(*(mul(const(coeff), t) for t in f.args))
        return Mul(coeff, (f,))
    factors.sort(key=_key_of)
    return Mul(coeff, tuple(factors))


def _iroot(n: int, k: int):
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # float estimate can be off for huge n; fall back to bisection
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**k
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def power(base: Expr, r: Number) -> Expr:
    r = Fraction(r)
    if r == 0:
        return ONE
    if r == 1:
        return base
    integral = r.denominator == 1
    if isinstance(base, Const):
        c = base.value
        if c == 0:
            if r < 0:
                raise ZeroDivisionError("zero raised to a negative power")
            return ZERO
        if c == 1:
            return ONE
        if integral:
            return const(c ** r.numerator)
        if c > 0:
            rn = _iroot(c.numerator, r.denominator)
            rd = _iroot(c.denominator, r.denominator)
            if rn is not None and rd is not None:
                return const(Fraction(rn, rd) ** r.numerator)
        return Pow(base, r)
    if isinstance(base, Pow):
        if integral:
            return power(base.base, base.exp * r)
        return Pow(base, r)
    if isinstance(base, Mul):
        if integral:
            return mul(const(base.coeff**r.numerator), *(power(f, r) for f in base.factors))
        if base.coeff > 0 and base.coeff != 1:
            rest = base.factors[0] if len(base.factors) == 1 else Mul(Fraction(1), base.factors)
            return mul(power(const(base.coeff), r), power(rest, r))
        return Pow(base, r)
    if isinstance(base, Exp) and integral:
        return exp(mul(const(r), base.arg))
    return Pow(base, r)


def _log_term(t: Expr):
    """Return (c, y) when t == c*log(y), else None."""
    if isinstance(t, Log):
        return Fraction(1), t.arg
    if isinstance(t, Mul) and len(t.factors) == 1 and isinstance(t.factors[0], Log):
        return t.coeff, t.factors[0].arg
    return None


def exp(x: Expr) -> Expr:
    x = as_expr(x)
    if isinstance(x, Const) and x.value == 0:
        return ONE
    lt = _log_term(x)
    if lt is not None:
        return power(lt[1], lt[0])
    if isinstance(x, Add):
        pulled = []
        rest = []
        for t in x.terms:
            lt = _log_term(t)
            if lt is None:
                rest.append(t)
            else:
                pulled.append(power(lt[1], lt[0]))
        if pulled:
            return mul(*pulled, exp(add(const(x.const), *rest)))
    return Exp(x)


def log(x: Expr) -> Expr:
    x = as_expr(x)
    if isinstance(x, Const):
        if x.value == 1:
            return ZERO
        if x.value == 0:
            raise ZeroDivisionError("log(0)")
    return Log(x)


def atanh(x: Expr) -> Expr:
    x = as_expr(x)
    if isinstance(x, Const) and x.value == 0:
        return ZERO
    return Atanh(x)


def sqrt(x: Expr) -> Expr:
    return power(as_expr(x), Fraction(1, 2))


def is_constant(e: Expr) -> bool:
    return not e.free_symbols
