"""Contravariant metrics, Levi-Civita connections, curvature and flat pencils.

Every routine works on a :class:`Chart`, which pairs coordinate labels with
the partial derivative operators along them.  In the plain chart the
operators are ordinary partial derivatives in the coordinate symbols.  In a
pulled-back chart expressions stay written in the old symbols ``u`` while
``d/dv^m = W^a_m d/du^a``, so geometry in ``v`` can be computed without
inverting ``v(u)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .report import Check, Verifier, combine, failed
from .symkern import (
    ONE,
    ZERO,
    Expr,
    NotPolynomialError,
    SymMatrix,
    add,
    adjugate,
    as_expr,
    const,
    differentiate,
    mat_det,
    mat_inverse,
    mul,
    polynomial_coefficients,
    simplify,
    sym,
)

MAX_COORDS = 4
PENCIL_SYMBOL = "lambda_"


class Chart:
    """Coordinate labels together with derivative operators along them."""

    def __init__(self, coords: Sequence[str], symbols: Optional[Sequence[str]] = None, jacobian: Optional[SymMatrix] = None):
        coords = tuple(coords)
        if not coords:
            raise ValueError("at least one coordinate is required")
        if len(set(coords)) != len(coords):
            raise ValueError("coordinate names must be pairwise distinct")
        if len(coords) > MAX_COORDS:
            raise ValueError(f"at most {MAX_COORDS} coordinates are supported")
        self.coords = coords
        self.symbols = tuple(symbols) if symbols is not None else coords
        if len(self.symbols) != len(coords):
            raise ValueError("symbol list and coordinate list differ in length")
        if jacobian is not None and jacobian.shape != (len(coords), len(coords)):
            raise ValueError("jacobian shape does not match the coordinates")
        self.jacobian = jacobian
        self._memo: dict = {}

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def is_plain(self) -> bool:
        return self.jacobian is None

    def d(self, e: Expr, m: int) -> Expr:
        """Derivative of ``e`` along the m-th chart coordinate."""
        key = (e, m)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if self.jacobian is None:
            out = differentiate(e, self.symbols[m])
        else:
            terms = []
            for a, s in enumerate(self.symbols):
                w = self.jacobian[a, m]
                if w == ZERO:
                    continue
                da = differentiate(e, s)
                if da != ZERO:
                    terms.append(mul(w, da))
            out = add(*terms)
        self._memo[key] = out
        return out

    def grad(self, e: Expr) -> tuple:
        return tuple(self.d(e, m) for m in range(self.n))

    def hessian(self, e: Expr) -> SymMatrix:
        """``H[k, j] = d_j d_k e``."""
        g = self.grad(e)
        return SymMatrix.build(self.n, self.n, lambda k, j: self.d(g[k], j))

    def __repr__(self) -> str:
        if self.is_plain:
            return f"Chart({list(self.coords)})"
        return f"Chart({list(self.coords)} over {list(self.symbols)})"


def plain_chart(coords: Sequence[str]) -> Chart:
    return Chart(coords)


@dataclass(frozen=True)
class ContravariantMetric:
    """Symmetric ``g^{ij}`` on a chart."""

    chart: Chart
    g: SymMatrix

    def __post_init__(self):
        n = self.chart.n
        if self.g.shape != (n, n):
            raise ValueError(f"metric must be {n}x{n}, got {self.g.shape}")

    @property
    def n(self) -> int:
        return self.chart.n

    def is_constant(self) -> bool:
        return all(not x.free_symbols for _, x in self.g.entries())


def _zeros3(n: int) -> list:
    return [[[ZERO] * n for _ in range(n)] for _ in range(n)]


def _freeze(t):
    if isinstance(t, list):
        return tuple(_freeze(x) for x in t)
    return t


def covariant(metric: ContravariantMetric, verifier: Verifier) -> SymMatrix:
    return mat_inverse(metric.g, tester=verifier.tester)


def christoffel_from_metric(metric: ContravariantMetric, verifier: Verifier, lower: Optional[SymMatrix] = None) -> tuple:
    """Levi-Civita symbols ``G[k][i][j] = Gamma^k_{ij}``."""
    n, ch, g = metric.n, metric.chart, metric.g
    if metric.is_constant():
        return _freeze(_zeros3(n))
    gl = lower if lower is not None else covariant(metric, verifier)
    dg = [[[ch.d(gl[s, i], j) for j in range(n)] for i in range(n)] for s in range(n)]
    out = _zeros3(n)
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                terms = []
                for s in range(n):
                    if g[k, s] == ZERO:
                        continue
                    inner = add(dg[s][i][j], dg[s][j][i], mul(const(-1), dg[i][j][s]))
                    if inner != ZERO:
                        terms.append(mul(g[k, s], inner))
                val = simplify(mul(const(Fraction(1, 2)), add(*terms))) if terms else ZERO
                out[k][i][j] = out[k][j][i] = val
    return _freeze(out)


def contravariant_christoffel(metric: ContravariantMetric, gamma) -> tuple:
    """``C[i][j][k] = Gamma^{ij}_k = -g^{is} Gamma^j_{sk}``."""
    n, g = metric.n, metric.g
    out = _zeros3(n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                terms = [mul(g[i, s], gamma[j][s][k]) for s in range(n) if g[i, s] != ZERO and gamma[j][s][k] != ZERO]
                out[i][j][k] = simplify(mul(const(-1), add(*terms))) if terms else ZERO
    return _freeze(out)


def curvature(chart: Chart, gamma) -> tuple:
    """``R[i][j][k][s] = R_{ijk}^s`` with
    ``R_{ijk}^s = d_i G^s_{jk} - d_j G^s_{ik} + G^s_{im} G^m_{jk} - G^s_{jm} G^m_{ik}``."""
    n = chart.n
    R = [[[[ZERO] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if j < i:
                for k in range(n):
                    for s in range(n):
                        R[i][j][k][s] = mul(const(-1), R[j][i][k][s])
                continue
            for k in range(n):
                for s in range(n):
                    terms = [chart.d(gamma[s][j][k], i), mul(const(-1), chart.d(gamma[s][i][k], j))]
                    for m in range(n):
                        terms.append(mul(gamma[s][i][m], gamma[m][j][k]))
                        terms.append(mul(const(-1), gamma[s][j][m], gamma[m][i][k]))
                    R[i][j][k][s] = add(*terms)
    return _freeze(R)


def metricity_residuals(metric: ContravariantMetric, gamma, lower: SymMatrix) -> dict:
    """``d_k g_{ij} - g_{sj} G^s_{ki} - g_{is} G^s_{kj}`` keyed by (k, i, j)."""
    n, ch = metric.n, metric.chart
    out = {}
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                terms = [ch.d(lower[i, j], k)]
                for s in range(n):
                    terms.append(mul(const(-1), lower[s, j], gamma[s][k][i]))
                    terms.append(mul(const(-1), lower[i, s], gamma[s][k][j]))
                out[(k, i, j)] = add(*terms)
    return out


def curvature_components(R) -> dict:
    n = len(R)
    return {
        (i, j, k, s): R[i][j][k][s]
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(n)
        for s in range(n)
    }


def is_flat(metric: ContravariantMetric, verifier: Verifier, name: str = "flat") -> Check:
    """All curvature components vanish identically."""
    if metric.is_constant():
        return Check(name, "pass", identity="R_{ijk}^s == 0 (constant metric)")
    if metric.n == 1:
        return Check(name, "pass", identity="R_{ijk}^s == 0 (one dimension)")
    gamma = christoffel_from_metric(metric, verifier)
    R = curvature(metric.chart, gamma)
    return verifier.family(name, "R_{ijk}^s == 0", curvature_components(R))


# contravariant Christoffel numerators, used for the pencil and other
# settings where inverting g is unwelcome


def contra_christoffel_numerators(chart: Chart, G: SymMatrix):
    """Return ``(D, M)`` with ``D = det G`` and ``M[i][j][k] = D * Gamma^{ij}_k``.

    ``Gamma^{ij}_k = 1/2 d_k G^{ij} + 1/2 (G^{is} d_s G^{jq} - G^{js} d_s G^{iq}) G_{qk}``
    and ``D G_{qk}`` is the adjugate entry ``adj(G)[q, k]``.
    """
    n = chart.n
    D = mat_det(G)
    adj = adjugate(G)
    dG = [[[chart.d(G[i, j], s) for s in range(n)] for j in range(n)] for i in range(n)]
    half = const(Fraction(1, 2))
    # B[i][j][q] = G^{is} d_s G^{jq} - G^{js} d_s G^{iq}
    B = _zeros3(n)
    for i in range(n):
        for j in range(n):
            for q in range(n):
                terms = []
                for s in range(n):
                    terms.append(mul(G[i, s], dG[j][q][s]))
                    terms.append(mul(const(-1), G[j, s], dG[i][q][s]))
                B[i][j][q] = add(*terms)
    M = _zeros3(n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                terms = [mul(half, D, dG[i][j][k])]
                for q in range(n):
                    terms.append(mul(half, B[i][j][q], adj[q, k]))
                M[i][j][k] = add(*terms)
    return D, _freeze(M)


def contra_curvature_numerator(chart: Chart, G: SymMatrix, D: Expr, M) -> dict:
    """``D^2 R^{ijk}_l`` keyed by (i, j, k, l), where
    ``R^{ijk}_l = G^{is}(d_s Gamma^{jk}_l - d_l Gamma^{jk}_s) + Gamma^{ij}_s Gamma^{sk}_l - Gamma^{ik}_s Gamma^{sj}_l``.
    """
    n = chart.n
    dD = [chart.d(D, s) for s in range(n)]
    dM = [[[[chart.d(M[j][k][l], s) for s in range(n)] for l in range(n)] for k in range(n)] for j in range(n)]
    neg = const(-1)
    out = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    terms = []
                    for s in range(n):
                        if G[i, s] != ZERO:
                            inner = add(
                                mul(D, dM[j][k][l][s]),
                                mul(neg, M[j][k][l], dD[s]),
                                mul(neg, D, dM[j][k][s][l]),
                                mul(M[j][k][s], dD[l]),
                            )
                            terms.append(mul(G[i, s], inner))
                        terms.append(mul(M[i][j][s], M[s][k][l]))
                        terms.append(mul(neg, M[i][k][s], M[s][j][l]))
                    out[(i, j, k, l)] = add(*terms)
    return out


def _lambda_coefficients(e: Expr, lam: str) -> list:
    return polynomial_coefficients(e, lam)


def check_flat_pencil(
    eta: ContravariantMetric,
    g: ContravariantMetric,
    verifier: Verifier,
    name: str = "flat-pencil",
) -> Check:
    """Curvature of ``g - lambda*eta`` vanishes for every lambda and the
    contravariant Christoffel symbols do not depend on lambda."""
    chart, n = g.chart, g.n
    if not eta.is_constant():
        return failed(name, "eta must be constant in the chosen coordinates")
    lam = PENCIL_SYMBOL
    if lam in chart.symbols:
        raise ValueError(f"coordinate name {lam!r} is reserved for the pencil parameter")
    L = sym(lam)
    G = SymMatrix.build(n, n, lambda i, j: add(g.g[i, j], mul(const(-1), L, eta.g[i, j])))
    D, M = contra_christoffel_numerators(chart, G)
    parts = []

    dcoeffs = _lambda_coefficients(D, lam)
    nondeg = None
    for c in reversed(dcoeffs):
        res = verifier.nonzero("nondegenerate", "det(g - lambda*eta) not identically zero in lambda", c)
        if res.status != "fail":
            nondeg = res
            break
    if nondeg is None:
        nondeg = failed("nondegenerate", "det(g - lambda*eta) vanishes identically in lambda")
    parts.append(nondeg)
    if nondeg.status == "fail":
        return combine(name, parts)

    bound = 3 * n
    num = contra_curvature_numerator(chart, G, D, M)
    residuals = {}
    max_deg = 0
    for idx, e in num.items():
        try:
            cs = _lambda_coefficients(e, lam)
        except NotPolynomialError as exc:  # pragma: no cover - construction is polynomial
            parts.append(failed("curvature", str(exc)))
            return combine(name, parts)
        max_deg = max(max_deg, len(cs) - 1)
        for p, c in enumerate(cs):
            residuals[idx + (p,)] = c
    if max_deg > bound:
        parts.append(failed("degree-bound", f"lambda degree {max_deg} exceeds {bound}"))
    else:
        parts.append(Check("degree-bound", "pass", identity=f"lambda degree {max_deg} <= {bound}"))
    parts.append(
        verifier.family(
            "curvature",
            "lambda^p coefficient of det(G)^2 R^{ijk}_l(g - lambda*eta) == 0",
            residuals,
        )
    )

    # M(lambda) D(0) - D(lambda) M(0) == 0 as a polynomial in lambda
    D0 = dcoeffs[0]
    indep = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                m = M[i][j][k]
                m0 = _lambda_coefficients(m, lam)[0]
                e = add(mul(m, D0), mul(const(-1), D, m0))
                for p, c in enumerate(_lambda_coefficients(e, lam)):
                    indep[(i, j, k, p)] = c
    parts.append(
        verifier.family(
            "lambda-independence",
            "Gamma^{ij}_k(g - lambda*eta) == Gamma^{ij}_k(g)",
            indep,
        )
    )
    out = combine(name, parts)
    out.detail = out.detail or f"max lambda degree {max_deg}"
    return out


@dataclass(frozen=True)
class DubrovinCertificate:
    xi: tuple
    c: SymMatrix


def check_dubrovin_conditions(
    eta: ContravariantMetric,
    g: ContravariantMetric,
    cert: DubrovinCertificate,
    verifier: Verifier,
    name: str = "dubrovin",
) -> Check:
    """Verify a user supplied vector field ``xi`` and constant tensor ``c``."""
    chart, n = g.chart, g.n
    if len(cert.xi) != n or cert.c.shape != (n, n):
        return failed(name, "certificate dimensions do not match the metric")
    E = eta.g
    eta_low = mat_inverse(E, tester=verifier.tester)
    gamma = christoffel_from_metric(g, verifier)
    C = contravariant_christoffel(g, gamma)

    def up(e: Expr, i: int) -> Expr:
        """Raised derivative ``d^i = eta^{ik} d_k``."""
        return add(*(mul(E[i, k], chart.d(e, k)) for k in range(n) if E[i, k] != ZERO))

    xi = tuple(as_expr(x) for x in cert.xi)
    Delta = [[[add(*(mul(E[i, s], C[j][k][s]) for s in range(n))) for k in range(n)] for j in range(n)] for i in range(n)]
    low = [[[add(*(mul(eta_low[k, s], Delta[s][i][j]) for s in range(n))) for k in range(n)] for j in range(n)] for i in range(n)]
    parts = []
    parts.append(
        verifier.family(
            "c-constant",
            "d_m c^{ij} == 0",
            {(m, i, j): chart.d(cert.c[i, j], m) for m in range(n) for i in range(n) for j in range(n)},
        )
    )
    r1 = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                r1[(i, j, k)] = add(Delta[i][j][k], mul(const(-1), up(up(xi[k], j), i)))
    parts.append(verifier.family("delta-hessian", "Delta^{ijk} == d^i d^j xi^k", r1))
    r2 = {}
    for i in range(n):
        for j in range(n):
            r2[(i, j)] = add(g.g[i, j], mul(const(-1), up(xi[j], i)), mul(const(-1), up(xi[i], j)), mul(const(-1), cert.c[i, j]))
    parts.append(verifier.family("metric-potential", "g^{ij} == d^i xi^j + d^j xi^i + c^{ij}", r2))
    r3 = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    terms = []
                    for s in range(n):
                        terms.append(mul(low[i][j][s], low[s][k][l]))
                        terms.append(mul(const(-1), low[i][k][s], low[s][j][l]))
                    r3[(i, j, k, l)] = add(*terms)
    parts.append(verifier.family("delta-commute", "Delta^{ij}_s Delta^{sk}_l == Delta^{ik}_s Delta^{sj}_l", r3))
    r4 = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                terms = []
                for m in range(n):
                    for l in range(n):
                        coef = add(mul(g.g[i, m], E[j, l]), mul(const(-1), E[i, m], g.g[j, l]))
                        if coef == ZERO:
                            continue
                        terms.append(mul(coef, chart.d(chart.d(xi[k], l), m)))
                r4[(i, j, k)] = add(*terms)
    parts.append(verifier.family("xi-pencil", "(g^{im} eta^{jl} - eta^{im} g^{jl}) d_m d_l xi^k == 0", r4))
    return combine(name, parts)


__all__ = [
    "Chart",
    "ContravariantMetric",
    "DubrovinCertificate",
    "PENCIL_SYMBOL",
    "check_dubrovin_conditions",
    "check_flat_pencil",
    "christoffel_from_metric",
    "contra_christoffel_numerators",
    "contra_curvature_numerator",
    "contravariant_christoffel",
    "covariant",
    "curvature",
    "curvature_components",
    "is_flat",
    "metricity_residuals",
    "plain_chart",
]
