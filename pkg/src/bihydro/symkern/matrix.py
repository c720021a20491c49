"""Small dense matrices of expressions."""

from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence

from .expr import ONE, ZERO, Expr, add, as_expr, mul, power
from .render import render
from .zerotest import ZeroTestConfig, ZeroTester

MAX_DIM = 8
MAX_INVERSE_DIM = 4


class SingularMatrixError(ArithmeticError):
    def __init__(self, det: Expr):
        super().__init__(f"matrix is singular: det = {render(det)} vanishes identically")
        self.det = det


class SymMatrix:
    """Immutable row-major grid of expressions."""

    __slots__ = ("rows", "shape")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(as_expr(x) for x in r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        m = len(rows[0])
        if any(len(r) != m for r in rows):
            raise ValueError("matrix rows must have equal length")
        if len(rows) > MAX_DIM or m > MAX_DIM:
            raise ValueError(f"matrix dimensions are capped at {MAX_DIM}")
        self.rows = rows
        self.shape = (len(rows), m)

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: Optional[int] = None) -> "SymMatrix":
        return cls([[ZERO] * (m or n) for _ in range(n)])

    @classmethod
    def build(cls, n: int, m: int, fn: Callable[[int, int], Expr]) -> "SymMatrix":
        return cls([[fn(i, j) for j in range(m)] for i in range(n)])

    @property
    def n(self) -> int:
        return self.shape[0]

    def __getitem__(self, ij) -> Expr:
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"SymMatrix({self.tolist_str()!r})"

    def tolist_str(self) -> list:
        return [[render(x) for x in r] for r in self.rows]

    @property
    def T(self) -> "SymMatrix":
        return SymMatrix(zip(*self.rows))

    def map(self, fn: Callable[[Expr], Expr]) -> "SymMatrix":
        return SymMatrix([[fn(x) for x in r] for r in self.rows])

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        _same_shape(self, other)
        return SymMatrix([[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        _same_shape(self, other)
        return SymMatrix(
            [[add(a, mul(as_expr(-1), b)) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def scale(self, c) -> "SymMatrix":
        c = as_expr(c)
        return self.map(lambda x: mul(c, x))

    def __matmul__(self, other: "SymMatrix") -> "SymMatrix":
        return mat_mul(self, other)

    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def entries(self):
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                yield (i, j), x


def _same_shape(a: SymMatrix, b: SymMatrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def mat_mul(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    cols = list(zip(*b.rows))
    return SymMatrix(
        [[add(*(mul(x, y) for x, y in zip(r, c) if x != ZERO and y != ZERO)) for c in cols] for r in a.rows]
    )


def mat_det(a: SymMatrix) -> Expr:
    """Determinant by Laplace expansion with memoized column-subset minors."""
    if not a.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = a.n
    memo: dict = {}

    def minor(row: int, cols: tuple) -> Expr:
        if row == n:
            return ONE
        hit = memo.get(cols)
        if hit is not None:
            return hit
        terms = []
        for pos, c in enumerate(cols):
            x = a.rows[row][c]
            if x == ZERO:
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            if sub == ZERO:
                continue
            terms.append(mul(as_expr(-1 if pos % 2 else 1), x, sub))
        out = add(*terms)
        memo[cols] = out
        return out

    return minor(0, tuple(range(n)))


def adjugate(a: SymMatrix) -> SymMatrix:
    """Classical adjoint, so that ``a @ adjugate(a) == det(a) * I``."""
    n = a.n
    if n == 1:
        return SymMatrix([[ONE]])

    def cofactor(i: int, j: int) -> Expr:
        sub = SymMatrix([[a.rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i])
        return mul(as_expr(-1 if (i + j) % 2 else 1), mat_det(sub))

    return SymMatrix.build(n, n, lambda i, j: cofactor(j, i))


def mat_inverse(a: SymMatrix, config: Optional[ZeroTestConfig] = None, tester: Optional[ZeroTester] = None) -> SymMatrix:
    """Gauss-Jordan inverse with zero-tested symbolic pivots."""
    from .simplify import simplify

    if not a.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = a.n
    if n > MAX_INVERSE_DIM:
        raise ValueError(f"symbolic inversion is capped at {MAX_INVERSE_DIM}x{MAX_INVERSE_DIM}")
    tester = tester or ZeroTester(config or ZeroTestConfig())
    aug = [list(a.rows[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            x = aug[r][col]
            if x != ZERO and not tester.test(x).is_zero:
                pivot = r
                break
        if pivot is None:
            raise SingularMatrixError(mat_det(a))
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = power(aug[col][col], -1)
        aug[col] = [simplify(mul(inv_p, x)) for x in aug[col]]
        aug[col][col] = ONE
        for r in range(n):
            if r == col or aug[r][col] == ZERO:
                continue
            factor = aug[r][col]
            aug[r] = [simplify(add(x, mul(as_expr(-1), factor, y))) for x, y in zip(aug[r], aug[col])]
            aug[r][col] = ZERO
    return SymMatrix([row[n:] for row in aug])


def vector(xs: Sequence) -> tuple:
    return tuple(as_expr(x) for x in xs)
