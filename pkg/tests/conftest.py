from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
import sympy as sp

from bihydro.report import Verifier
from bihydro.symkern import EvalPoint, SymMatrix, ZeroTestConfig, evaluate, parse, render

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

SYMPY_NAMES = {"ArcTanh": sp.atanh, "exp": sp.exp, "log": sp.log, "sqrt": sp.sqrt, "e": sp.E}


def to_sympy(e):
    """Independent oracle: re-read the rendered text with sympy."""
    text = render(e) if not isinstance(e, str) else e
    return sp.sympify(text.replace("^", "**"), locals=dict(SYMPY_NAMES))


def sympy_matrix(m: SymMatrix) -> sp.Matrix:
    return sp.Matrix([[to_sympy(x) for x in row] for row in m.rows])


def M(rows) -> SymMatrix:
    return SymMatrix([[parse(x) if isinstance(x, str) else x for x in r] for r in rows])


def num(e, **values) -> complex:
    vals = {k: Fraction(v) for k, v in values.items()}
    return complex(evaluate(e, EvalPoint(vals, 128)))


@pytest.fixture
def ver() -> Verifier:
    return Verifier()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


TODA_INTERVALS = {
    "wb": (Fraction(1, 10), Fraction(3, 10)),
    "ub": (Fraction(3, 2), Fraction(2)),
    "u": (Fraction(-9, 4), Fraction(-5, 4)),
    "w": (Fraction(3, 2), Fraction(2)),
}


@pytest.fixture
def toda_ver() -> Verifier:
    return Verifier(ZeroTestConfig(intervals=TODA_INTERVALS))


# acceptance criteria register one line each; the lines are printed in the summary

ACCEPTANCE: dict = {}


def record_criterion(number: int, ok: bool, text: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
