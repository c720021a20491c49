"""Check verdicts, grouping and zero-test driven identity families."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .symkern import Expr, InconclusiveError, ZeroTestConfig, ZeroTester, render

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
SKIPPED = "skipped"

_DETAIL_LIMIT = 240


@dataclass
class Check:
    """Verdict for one named identity or a group of them."""

    name: str
    status: str
    identity: str = ""
    witness: Optional[dict] = None
    millis: float = 0.0
    detail: str = ""
    parts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status in (PASS, SKIPPED)

    def failures(self) -> list:
        """Leaf checks that failed, in report order."""
        if not self.parts:
            return [self] if self.status == FAIL else []
        out = []
        for p in self.parts:
            out.extend(p.failures())
        return out


def combine(name: str, parts: Iterable[Check], identity: str = "") -> Check:
    """Group ``parts``; the group fails if any part fails."""
    parts = list(parts)
    statuses = [p.status for p in parts]
    if FAIL in statuses:
        status = FAIL
    elif INCONCLUSIVE in statuses:
        status = INCONCLUSIVE
    elif statuses and all(s == SKIPPED for s in statuses):
        status = SKIPPED
    else:
        status = PASS
    witness = None
    detail = ""
    bad = next((p for p in parts if p.status in (FAIL, INCONCLUSIVE)), None)
    if bad is not None:
        witness = bad.witness
        identity = f"{bad.name}: {bad.identity}"
        detail = bad.detail
    elif not identity:
        identity = ", ".join(p.name for p in parts)
    return Check(
        name,
        status,
        identity=identity,
        witness=witness,
        millis=sum(p.millis for p in parts),
        detail=detail,
        parts=parts,
    )


def skipped(name: str, reason: str) -> Check:
    return Check(name, SKIPPED, identity=reason)


def failed(name: str, reason: str, detail: str = "") -> Check:
    return Check(name, FAIL, identity=reason, detail=detail)


def _short(e: Expr) -> str:
    s = render(e)
    return s if len(s) <= _DETAIL_LIMIT else s[: _DETAIL_LIMIT - 3] + "..."


def _fmt_index(idx) -> str:
    if isinstance(idx, tuple):
        return "[" + ",".join(str(i) for i in idx) + "]"
    return f"[{idx}]"


class Verifier:
    """Zero-test front end that turns residual families into checks.

    One instance shares point evaluations across all checks it runs.
    """

    def __init__(self, config: Optional[ZeroTestConfig] = None, tester: Optional[ZeroTester] = None):
        self.tester = tester or ZeroTester(config or ZeroTestConfig())
        self.config = self.tester.config

    def zero(self, e: Expr):
        return self.tester.test(e)

    def family(self, name: str, identity: str, residuals) -> Check:
        """Pass iff every residual vanishes; residuals are tested in index order."""
        items = residuals.items() if isinstance(residuals, Mapping) else residuals
        items = sorted(items, key=lambda kv: kv[0])
        start = time.perf_counter()
        for idx, e in items:
            try:
                verdict = self.tester.test(e)
            except InconclusiveError as exc:
                return Check(
                    name,
                    INCONCLUSIVE,
                    identity=f"{identity} at {_fmt_index(idx)}",
                    millis=_ms(start),
                    detail=str(exc),
                )
            if not verdict.is_zero:
                return Check(
                    name,
                    FAIL,
                    identity=f"{identity} at {_fmt_index(idx)}",
                    witness=verdict.witness,
                    millis=_ms(start),
                    detail=f"residual {_short(e)} = {_fmt_value(verdict.value)}",
                )
        return Check(name, PASS, identity=identity, millis=_ms(start))

    def single(self, name: str, identity: str, e: Expr) -> Check:
        return self.family(name, identity, [((), e)])

    def nonzero(self, name: str, identity: str, e: Expr) -> Check:
        """Pass iff ``e`` is shown NOT to vanish identically."""
        start = time.perf_counter()
        try:
            verdict = self.tester.test(e)
        except InconclusiveError as exc:
            return Check(name, INCONCLUSIVE, identity=identity, millis=_ms(start), detail=str(exc))
        if verdict.is_zero:
            return Check(
                name,
                FAIL,
                identity=identity,
                millis=_ms(start),
                detail=f"{_short(e)} vanishes at all {verdict.points_used} sample points",
            )
        return Check(name, PASS, identity=identity, millis=_ms(start))


def _ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def _fmt_value(v) -> str:
    if v is None:
        return "?"
    try:
        import mpmath

        return mpmath.nstr(v, 12)
    except Exception:  # pragma: no cover - defensive
        return str(v)


def witness_strings(witness: Mapping[str, object], digits: int = 32) -> dict:
    """Witness coordinates as ``re+imi`` decimal strings."""
    import mpmath

    ctx = mpmath.MPContext()
    ctx.dps = digits + 10
    out = {}
    for name in sorted(witness):
        v = witness[name]
        if isinstance(v, Fraction):
            z = ctx.mpc(ctx.mpf(v.numerator) / v.denominator)
        else:
            z = ctx.mpc(v)
        re = ctx.nstr(z.real, digits, strip_zeros=False, min_fixed=-6, max_fixed=6)
        im = ctx.nstr(abs(z.imag), digits, strip_zeros=False, min_fixed=-6, max_fixed=6)
        sign = "-" if z.imag < 0 else "+"
        out[name] = f"{re}{sign}{im}i"
    return out
