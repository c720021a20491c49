"""Systems of hydrodynamic type and their bihamiltonian representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import (
    PENCIL_SYMBOL,
    Chart,
    ContravariantMetric,
    check_flat_pencil,
    christoffel_from_metric,
    contravariant_christoffel,
    covariant,
)
from .report import Check, Verifier, combine, failed
from .symkern import (
    ONE,
    ZERO,
    Expr,
    SymMatrix,
    add,
    as_expr,
    const,
    mat_det,
    mat_inverse,
    mul,
    polynomial_coefficients,
    power,
    sym,
)

NEG = const(-1)


def _sub(a: Expr, b: Expr) -> Expr:
    return add(a, mul(NEG, b))


def _matrix_residuals(a: SymMatrix, b: SymMatrix) -> dict:
    return {(i, j): _sub(a[i, j], b[i, j]) for (i, j), _ in a.entries()}


@dataclass
class BihamiltonianStructure:
    """Constant ``eta`` and a metric ``g`` on the same chart, in eta-flat coordinates."""

    chart: Chart
    eta: SymMatrix
    g: SymMatrix
    verifier: Verifier = field(repr=False, default_factory=Verifier)

    def __post_init__(self):
        n = self.chart.n
        if self.eta.shape != (n, n) or self.g.shape != (n, n):
            raise ValueError(f"eta and g must be {n}x{n}")
        if any(x.free_symbols for _, x in self.eta.entries()):
            raise ValueError("eta must have constant entries")
        if any(self.eta[i, j] != self.eta[j, i] for i in range(n) for j in range(n)):
            raise ValueError("eta must be symmetric")
        self._cache: dict = {}

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def coords(self) -> tuple:
        return self.chart.coords

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def eta_metric(self) -> ContravariantMetric:
        return ContravariantMetric(self.chart, self.eta)

    @property
    def metric(self) -> ContravariantMetric:
        return ContravariantMetric(self.chart, self.g)

    @property
    def eta_lower(self) -> SymMatrix:
        return self._get("eta_lower", lambda: mat_inverse(self.eta, tester=self.verifier.tester))

    @property
    def g_lower(self) -> SymMatrix:
        return self._get("g_lower", lambda: covariant(self.metric, self.verifier))

    @property
    def gamma(self) -> tuple:
        """Levi-Civita symbols of g, ``gamma[k][i][j] = Gamma^k_{ij}``."""
        return self._get("gamma", lambda: christoffel_from_metric(self.metric, self.verifier, self.g_lower))

    @property
    def contra(self) -> tuple:
        """``contra[i][j][k] = Gamma^{ij}_k``."""
        return self._get("contra", lambda: contravariant_christoffel(self.metric, self.gamma))


# flows


def flow_from_eta(eta: SymMatrix, chart: Chart, h: Optional[Expr] = None, grad: Optional[Sequence[Expr]] = None) -> SymMatrix:
    """``V^i_j = eta^{ik} d_j d_k h``; pass ``grad`` to use a given gradient instead of ``h``."""
    n = chart.n
    if grad is None:
        grad = chart.grad(as_expr(h))
    H = [[chart.d(grad[k], j) for j in range(n)] for k in range(n)]
    return SymMatrix.build(
        n, n, lambda i, j: add(*(mul(eta[i, k], H[k][j]) for k in range(n) if eta[i, k] != ZERO))
    )


def flow_from_g(
    g: SymMatrix,
    gamma,
    contra,
    chart: Chart,
    f: Optional[Expr] = None,
    grad: Optional[Sequence[Expr]] = None,
) -> tuple:
    """Both forms of the second-structure flow.

    Returns ``(hessian_form, contraction_form)`` where the first is
    ``g^{ik}(f_{kj} - Gamma^m_{kj} f_m)`` and the second is
    ``g^{ik} f_{kj} + Gamma^{ik}_j f_k``.  ``gamma`` may be None when only the
    contraction form is wanted; the first entry is then None too.
    """
    n = chart.n
    if grad is None:
        grad = chart.grad(as_expr(f))
    H = [[chart.d(grad[k], j) for j in range(n)] for k in range(n)]

    def gh(i, j):
        return add(*(mul(g[i, k], H[k][j]) for k in range(n) if g[i, k] != ZERO))

    contraction = SymMatrix.build(
        n, n, lambda i, j: add(gh(i, j), *(mul(contra[i][k][j], grad[k]) for k in range(n)))
    )
    if gamma is None:
        return None, contraction

    def cov(i, j):
        terms = []
        for k in range(n):
            if g[i, k] == ZERO:
                continue
            inner = add(H[k][j], *(mul(NEG, gamma[m][k][j], grad[m]) for m in range(n)))
            terms.append(mul(g[i, k], inner))
        return add(*terms)

    return SymMatrix.build(n, n, cov), contraction


def flow_eta(B: BihamiltonianStructure, h) -> SymMatrix:
    return flow_from_eta(B.eta, B.chart, h=as_expr(h))


def flow_g(B: BihamiltonianStructure, f) -> tuple:
    return flow_from_g(B.g, B.gamma, B.contra, B.chart, f=as_expr(f))


def check_flow_forms(name: str, forms: tuple, verifier: Verifier) -> Check:
    a, b = forms
    return verifier.family(
        name,
        "g^{ik}(f_{kj} - Gamma^m_{kj} f_m) == g^{ik} f_{kj} + Gamma^{ik}_j f_k",
        _matrix_residuals(a, b),
    )


def check_bihamiltonian(B: BihamiltonianStructure, h, f, verifier: Optional[Verifier] = None, name: str = "biham-consistency") -> Check:
    """``J1 grad h == J2 grad f`` plus the symmetry identities of the flow."""
    v = verifier or B.verifier
    ch, n = B.chart, B.n
    V = flow_eta(B, h)
    forms = flow_g(B, f)
    parts = [
        v.family("flow-match", "eta^{ik} h_{kj} == g^{ik} f_{kj} + Gamma^{ik}_j f_k", _matrix_residuals(V, forms[1])),
        check_flow_forms("flow-forms", forms, v),
    ]
    parts.extend(flow_identities(B, V, v))
    return combine(name, parts)


def flow_identities(B: BihamiltonianStructure, V: SymMatrix, verifier: Verifier) -> list:
    """Symmetry identities every flow of a bihamiltonian system satisfies."""
    ch, n = B.chart, B.n
    G = B.gamma
    eta, g = B.eta, B.g
    out = [
        verifier.family("eta-symmetry", "eta V^T == V eta", _matrix_residuals(eta @ V.T, V @ eta)),
        verifier.family("g-symmetry", "g V^T == V g", _matrix_residuals(g @ V.T, V @ g)),
    ]
    dV = [[[ch.d(V[i, j], k) for k in range(n)] for j in range(n)] for i in range(n)]
    out.append(
        verifier.family(
            "gradient-symmetry",
            "d_k V^i_j == d_j V^i_k",
            {(i, j, k): _sub(dV[i][j][k], dV[i][k][j]) for i in range(n) for j in range(n) for k in range(j + 1, n)},
        )
    )

    def cov(i, j, k):
        # nabla_k V^i_j
        terms = [dV[i][j][k]]
        for m in range(n):
            terms.append(mul(G[i][k][m], V[m, j]))
            terms.append(mul(NEG, G[m][k][j], V[i, m]))
        return add(*terms)

    out.append(
        verifier.family(
            "covariant-symmetry",
            "nabla_k V^i_j == nabla_j V^i_k",
            {(i, j, k): _sub(cov(i, j, k), cov(i, k, j)) for i in range(n) for j in range(n) for k in range(j + 1, n)},
        )
    )

    def gv(i, j, k):
        return add(*(mul(G[i][j][l], V[l, k]) for l in range(n)))

    out.append(
        verifier.family(
            "connection-symmetry",
            "Gamma^i_{jl} V^l_k == Gamma^i_{kl} V^l_j",
            {(i, j, k): _sub(gv(i, j, k), gv(i, k, j)) for i in range(n) for j in range(n) for k in range(j + 1, n)},
        )
    )
    return out


def check_commuting(V: SymMatrix, A: SymMatrix, verifier: Verifier, name: str = "commuting") -> Check:
    if V.shape != A.shape:
        return failed(name, f"shape mismatch {V.shape} vs {A.shape}")
    return verifier.family(name, "A V == V A", _matrix_residuals(A @ V, V @ A))


def check_conservation_law(V: SymMatrix, a, b, chart: Chart, verifier: Verifier, name: str = "conservation-law") -> Check:
    """``(da/du^i) V^i_j == db/du^j`` for every j."""
    n = chart.n
    da, db = chart.grad(as_expr(a)), chart.grad(as_expr(b))
    res = {(j,): _sub(add(*(mul(da[i], V[i, j]) for i in range(n))), db[j]) for j in range(n)}
    return verifier.family(name, "(da/du^i) V^i_j == db/du^j", res)


# translation flow


def translation_density(eta_lower: SymMatrix, coords: Sequence[str]) -> Expr:
    """``h0 = 1/2 eta_{ij} u^i u^j``."""
    n = len(coords)
    u = [sym(c) for c in coords]
    return mul(
        const(Fraction(1, 2)),
        add(*(mul(eta_lower[i, j], u[i], u[j]) for i in range(n) for j in range(n) if eta_lower[i, j] != ZERO)),
    )


@dataclass(frozen=True)
class TranslationData:
    """Flat coordinates ``hat_u^i(u)`` of g and the constant ``hat_g^{ij}`` there."""

    hat_coords: tuple
    hat_g: SymMatrix


def translation_hamiltonians(B: BihamiltonianStructure, td: Optional[TranslationData], verifier: Optional[Verifier] = None, name: str = "translation") -> tuple:
    """Return ``(h0, f0, check)``; ``f0`` is None when no flat coordinates are given."""
    v = verifier or B.verifier
    n, ch = B.n, B.chart
    h0 = translation_density(B.eta_lower, B.coords)
    ident = SymMatrix.identity(n)
    parts = [v.family("h0-flow", "eta^{ik} (h0)_{kj} == delta^i_j", _matrix_residuals(flow_eta(B, h0), ident))]
    f0 = None
    if td is not None:
        hat = tuple(as_expr(x) for x in td.hat_coords)
        if len(hat) != n or td.hat_g.shape != (n, n):
            parts.append(failed("flat-coordinates", "flat coordinate data has the wrong dimension"))
            return h0, None, combine(name, parts)
        if any(x.free_symbols for _, x in td.hat_g.entries()):
            parts.append(failed("flat-coordinates", "hat g must be constant"))
            return h0, None, combine(name, parts)
        J = SymMatrix.build(n, n, lambda i, a: ch.d(hat[i], a))
        push = J @ B.g @ J.T
        parts.append(
            v.family("flat-coordinates", "(d hat_u^i/du^a) g^{ab} (d hat_u^j/du^b) == hat_g^{ij}", _matrix_residuals(push, td.hat_g))
        )
        hat_low = mat_inverse(td.hat_g, tester=v.tester)
        f0 = mul(
            const(Fraction(1, 2)),
            add(*(mul(hat_low[i, j], hat[i], hat[j]) for i in range(n) for j in range(n) if hat_low[i, j] != ZERO)),
        )
        forms = flow_g(B, f0)
        parts.append(v.family("f0-flow", "g^{ik}(f0)_{kj} + Gamma^{ik}_j (f0)_k == delta^i_j", _matrix_residuals(forms[1], ident)))
        parts.append(check_flow_forms("f0-flow-forms", forms, v))
    return h0, f0, combine(name, parts)


# semisimplicity


def characteristic_coefficients(B: BihamiltonianStructure) -> list:
    """Coefficients of ``det(g - lambda*eta)`` in ascending powers of lambda."""
    L = sym(PENCIL_SYMBOL)
    n = B.n
    G = SymMatrix.build(n, n, lambda i, j: add(B.g[i, j], mul(NEG, L, B.eta[i, j])))
    return polynomial_coefficients(mat_det(G), PENCIL_SYMBOL)


def discriminant(coeffs: Sequence[Expr]) -> Expr:
    """Discriminant of ``sum c_k x^k`` via the Sylvester resultant with its derivative.

    Uses ``disc = (-1)^(d(d-1)/2) Res(P, P') / c_d``.
    """
    d = len(coeffs) - 1
    if d < 1:
        raise ValueError("discriminant needs degree at least 1")
    if d == 1:
        return ONE
    p = list(reversed(coeffs))  # leading first
    dp = [mul(const(d - k), p[k]) for k in range(d)]
    size = 2 * d - 1
    rows = []
    for r in range(d - 1):
        rows.append([ZERO] * r + p + [ZERO] * (size - r - len(p)))
    for r in range(d):
        rows.append([ZERO] * r + dp + [ZERO] * (size - r - len(dp)))
    res = mat_det(SymMatrix(rows))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return mul(const(sign), res, power(p[0], -1))


def check_semisimple(B: BihamiltonianStructure, verifier: Optional[Verifier] = None, name: str = "semisimple") -> Check:
    v = verifier or B.verifier
    coeffs = characteristic_coefficients(B)
    deg = len(coeffs) - 1
    if deg < B.n:
        return failed(name, f"characteristic polynomial has degree {deg} < {B.n}")
    if deg == 1:
        return Check(name, "pass", identity="single characteristic root (n = 1)")
    return v.nonzero(name, "discriminant of det(g - lambda*eta) not identically zero", discriminant(coeffs))


def check_pencil(B: BihamiltonianStructure, verifier: Optional[Verifier] = None, name: str = "flat-pencil") -> Check:
    return check_flat_pencil(B.eta_metric, B.metric, verifier or B.verifier, name=name)


__all__ = [
    "BihamiltonianStructure",
    "TranslationData",
    "characteristic_coefficients",
    "check_bihamiltonian",
    "check_commuting",
    "check_conservation_law",
    "check_flow_forms",
    "check_pencil",
    "check_semisimple",
    "discriminant",
    "flow_eta",
    "flow_from_eta",
    "flow_from_g",
    "flow_g",
    "flow_identities",
    "translation_density",
    "translation_hamiltonians",
]
