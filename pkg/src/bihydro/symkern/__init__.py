"""Self-contained expression kernel.

Parsing, rendering, exact differentiation and substitution, arbitrary
precision complex evaluation, probabilistic zero testing and small symbolic
matrices.
"""

from .calculus import (
    NotPolynomialError,
    derivative_tensors,
    differentiate,
    gradient,
    polynomial_coefficients,
    substitute,
)
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
    sqrt,
    sym,
    symbols,
)
from .matrix import SingularMatrixError, SymMatrix, adjugate, mat_det, mat_inverse, mat_mul
from .numeric import EvalPoint, SingularEvaluation, evaluate, evaluate_tracked
from .parse import ParseError, parse
from .render import render
from .simplify import expand, simplify
from .zerotest import InconclusiveError, ZeroTestConfig, ZeroTester, ZeroVerdict, is_identically_zero

__all__ = [
    "Add",
    "Atanh",
    "Const",
    "EvalPoint",
    "Exp",
    "Expr",
    "InconclusiveError",
    "Log",
    "Mul",
    "NotPolynomialError",
    "ONE",
    "ParseError",
    "Pow",
    "SingularEvaluation",
    "SingularMatrixError",
    "Sym",
    "SymMatrix",
    "ZERO",
    "ZeroTestConfig",
    "ZeroTester",
    "ZeroVerdict",
    "add",
    "adjugate",
    "as_expr",
    "atanh",
    "const",
    "derivative_tensors",
    "differentiate",
    "evaluate",
    "evaluate_tracked",
    "exp",
    "expand",
    "gradient",
    "is_identically_zero",
    "log",
    "mat_det",
    "mat_inverse",
    "mat_mul",
    "mul",
    "parse",
    "polynomial_coefficients",
    "power",
    "render",
    "simplify",
    "sqrt",
    "substitute",
    "sym",
    "symbols",
]
