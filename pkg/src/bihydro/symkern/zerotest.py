"""Probabilistic identity testing by seeded high-precision sampling."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .expr import Const, Expr
from .numeric import EvalPoint, PointEvaluator, SingularEvaluation

DEFAULT_SEED = 0xB1A5
DEFAULT_INTERVAL = (Fraction(1, 2), Fraction(3, 2))


class InconclusiveError(RuntimeError):
    """Every sample point was singular, so no verdict is possible."""

    def __init__(self, expr: Expr, reasons: Sequence[str]):
        super().__init__(f"all {len(reasons)} sample points singular ({reasons[0] if reasons else ''})")
        self.expr = expr
        self.reasons = list(reasons)


def _interval(v) -> tuple:
    lo, hi = (Fraction(x) for x in v)
    if not lo < hi:
        raise ValueError(f"empty sampling interval [{lo}, {hi}]")
    return lo, hi


@dataclass(frozen=True)
class ZeroTestConfig:
    samples: int = 16
    precision: int = 256
    tolerance: Optional[Fraction] = None
    intervals: Mapping[str, tuple] = field(default_factory=dict)
    default_interval: tuple = DEFAULT_INTERVAL
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.samples < 4:
            raise ValueError("at least 4 sample points are required")
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        object.__setattr__(
            self, "intervals", {k: _interval(v) for k, v in dict(self.intervals).items()}
        )
        object.__setattr__(self, "default_interval", _interval(self.default_interval))

    @property
    def tol(self) -> Fraction:
        if self.tolerance is not None:
            return Fraction(self.tolerance)
        return Fraction(1, 2 ** (self.precision // 2))

    def with_intervals(self, intervals: Mapping[str, tuple]) -> "ZeroTestConfig":
        merged = dict(self.intervals)
        merged.update(intervals)
        return replace(self, intervals=merged)

    def sample_value(self, name: str, k: int) -> Fraction:
        """Deterministic k-th sample of symbol ``name``.

        Depends only on (seed, name, k), so every expression sees the same
        value for the same symbol and results do not depend on call order.
        """
        lo, hi = self.intervals.get(name, self.default_interval)
        digest = hashlib.sha256(f"{self.seed:x}:{name}:{k}".encode()).digest()
        frac = Fraction(int.from_bytes(digest[:8], "big"), 1 << 64)
        return lo + (hi - lo) * frac

    def point(self, names: Iterable[str], k: int) -> dict:
        return {n: self.sample_value(n, k) for n in sorted(names)}


@dataclass(frozen=True)
class ZeroVerdict:
    is_zero: bool
    points_used: int = 0
    witness: Optional[dict] = None
    value: object = None
    exact: bool = False

    @property
    def confidence(self) -> int:
        """Number of non-singular sample points that agreed with zero."""
        return self.points_used


class ZeroTester:
    """Runs zero tests for many expressions, sharing point evaluations."""

    def __init__(self, config: ZeroTestConfig):
        self.config = config
        self._evaluators: dict = {}

    def _evaluator(self, k: int) -> PointEvaluator:
        ev = self._evaluators.get(k)
        if ev is None:
            cfg = self.config
            ev = PointEvaluator(
                EvalPoint({}, cfg.precision), resolver=lambda name: cfg.sample_value(name, k)
            )
            self._evaluators[k] = ev
        return ev

    def test(self, e: Expr) -> ZeroVerdict:
        if isinstance(e, Const):
            if e.value == 0:
                return ZeroVerdict(True, 0, exact=True)
            return ZeroVerdict(False, 0, witness={}, value=complex(e.value), exact=True)
        names = e.free_symbols
        tol = self.config.tol
        used = 0
        reasons = []
        for k in range(self.config.samples):
            ev = self._evaluator(k)
            try:
                res = ev.evaluate(e)
            except SingularEvaluation as exc:
                reasons.append(str(exc))
                continue
            except ZeroDivisionError as exc:
                reasons.append(str(exc))
                continue
            used += 1
            ctx = res.ctx
            bound = ctx.mpf(tol.numerator) / tol.denominator * (1 + res.max_magnitude)
            if abs(res.value) > bound:
                return ZeroVerdict(False, used, witness=self.config.point(names, k), value=res.value)
        if used == 0:
            raise InconclusiveError(e, reasons)
        return ZeroVerdict(True, used)


def is_identically_zero(e: Expr, config: Optional[ZeroTestConfig] = None) -> ZeroVerdict:
    """Decide whether ``e`` vanishes identically on the sampling box.

    A NONZERO verdict carries an exact rational witness point.  A
    ZERO verdict means ``|e| <= tol * (1 + max intermediate magnitude)`` at
    every non-singular sample point.
    """
    return ZeroTester(config or ZeroTestConfig()).test(e)
