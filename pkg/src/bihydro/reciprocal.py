"""Linear reciprocal transformations of bihamiltonian systems of hydrodynamic type.

The transformation ``y = a x + b t, s = p x + q t`` with new dependent
variables ``v = eta grad(q h0 - p h)`` is applied to flows, metrics and
connections.  Every identity is checked in the ``u`` parametrization through
a pulled-back :class:`~bihydro.geometry.Chart`; when an explicit inverse map
``u(v)`` is supplied the checks are repeated directly in ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .geometry import (
    Chart,
    ContravariantMetric,
    check_flat_pencil,
    christoffel_from_metric,
    contravariant_christoffel,
    curvature,
    curvature_components,
    is_flat,
)
from .hydro import (
    BihamiltonianStructure,
    check_conservation_law,
    flow_from_eta,
    flow_from_g,
)
from .report import Check, Verifier, combine, failed, skipped
from .symkern import (
    ZERO,
    Expr,
    SingularMatrixError,
    SymMatrix,
    add,
    as_expr,
    const,
    differentiate,
    mat_inverse,
    mul,
    simplify,
    substitute,
    sym,
)

NEG = const(-1)
ROLES = ("hbar", "fbar", "h1bar", "f1bar")


def _sub(a: Expr, b: Expr) -> Expr:
    return add(a, mul(NEG, b))


def _residuals(a: SymMatrix, b: SymMatrix) -> dict:
    return {(i, j): _sub(a[i, j], b[i, j]) for (i, j), _ in a.entries()}


@dataclass(frozen=True)
class LinearReciprocalTransform:
    """``y = a x + b t, s = p x + q t`` with rational constants."""

    a: Fraction
    b: Fraction
    p: Fraction
    q: Fraction

    def __post_init__(self):
        for k in "abpq":
            object.__setattr__(self, k, Fraction(getattr(self, k)))
        if self.det == 0:
            raise ValueError("aq - bp must be nonzero")

    @property
    def det(self) -> Fraction:
        return self.a * self.q - self.b * self.p

    def inverse(self) -> "LinearReciprocalTransform":
        d = self.det
        return LinearReciprocalTransform(self.q / d, -self.b / d, -self.p / d, self.a / d)

    @classmethod
    def identity(cls) -> "LinearReciprocalTransform":
        return cls(1, 0, 0, 1)


@dataclass
class VariableChange:
    """New dependent variables ``v^i(u)``, their Jacobian and its inverse."""

    coords: tuple
    vcoords: tuple
    v: tuple
    Q: SymMatrix
    W: SymMatrix
    inverse: Optional[dict] = None
    check: Optional[Check] = None
    _chart: Optional[Chart] = field(default=None, repr=False)

    @property
    def chart(self) -> Chart:
        """Chart whose derivatives are ``d/dv^m = W^a_m d/du^a`` on functions of u."""
        if self._chart is None:
            self._chart = Chart(self.vcoords, symbols=self.coords, jacobian=self.W)
        return self._chart

    @property
    def has_inverse(self) -> bool:
        return self.inverse is not None

    def to_u(self, e) -> Expr:
        """Compose an expression in the v symbols with ``v(u)``."""
        return substitute(as_expr(e), dict(zip(self.vcoords, self.v)))

    def to_v(self, e) -> Expr:
        """Compose an expression in the u symbols with ``u(v)``."""
        if self.inverse is None:
            raise ValueError("no inverse map u(v) was supplied")
        return simplify(substitute(as_expr(e), self.inverse))

    def matrix_to_v(self, m: SymMatrix) -> SymMatrix:
        return m.map(self.to_v)

    def v_chart(self) -> Chart:
        return Chart(self.vcoords)


def new_dependent_variables(
    B: BihamiltonianStructure,
    h,
    lr: LinearReciprocalTransform,
    vcoords: Sequence[str],
    inverse: Optional[Mapping[str, Expr]] = None,
    verifier: Optional[Verifier] = None,
) -> VariableChange:
    """``v = eta grad(q h0 - p h) = q u - p eta grad h``; raises SingularMatrixError if Q is."""
    ver = verifier or B.verifier
    ch, n = B.chart, B.n
    vcoords = tuple(vcoords)
    if len(vcoords) != n or len(set(vcoords)) != n:
        raise ValueError("need one distinct name per new dependent variable")
    h = as_expr(h)
    gh = ch.grad(h)
    u = [sym(c) for c in ch.symbols]
    v = tuple(
        simplify(
            add(
                mul(const(lr.q), u[i]),
                *(mul(const(-lr.p), B.eta[i, k], gh[k]) for k in range(n) if B.eta[i, k] != ZERO),
            )
        )
        for i in range(n)
    )
    Q = SymMatrix.build(n, n, lambda i, j: ch.d(v[i], j))
    V = flow_from_eta(B.eta, ch, grad=gh)
    expected = SymMatrix.build(
        n, n, lambda i, j: add(const(lr.q if i == j else 0), mul(const(-lr.p), V[i, j]))
    )
    parts = [ver.family("jacobian", "dv^i/du^j == (q I - p V)^i_j", _residuals(Q, expected))]
    W = mat_inverse(Q, tester=ver.tester)
    inv = None
    if inverse is not None:
        inv = {k: as_expr(x) for k, x in inverse.items()}
        if set(inv) != set(ch.symbols):
            raise ValueError("inverse map must give every u coordinate")
        stray = set().union(*(x.free_symbols for x in inv.values())) - set(vcoords)
        if stray:
            raise ValueError(f"inverse map uses unknown symbols {sorted(stray)}")
        parts.append(
            ver.family(
                "inverse-map",
                "v^i(u(v)) == v^i",
                {(i,): _sub(substitute(v[i], inv), sym(vcoords[i])) for i in range(n)},
            )
        )
    return VariableChange(ch.symbols, vcoords, v, Q, W, inv, combine("variable-change", parts))


# flows


def transform_flows(
    V: SymMatrix,
    A: Optional[SymMatrix],
    lr: LinearReciprocalTransform,
    W: SymMatrix,
    verifier: Optional[Verifier] = None,
) -> tuple:
    """Transformed flow matrices in the u parametrization.

    Returns ``(flows, check)`` with ``flows`` keyed by ``s``, ``t0``, ``t``
    (the original flow seen as a commuting flow) and ``t1`` when ``A`` is given.
    """
    n = V.n
    d = const(lr.det)
    aV_bI = SymMatrix.build(n, n, lambda i, j: add(mul(const(lr.a), V[i, j]), const(-lr.b if i == j else 0)))
    flows = {
        "s": (aV_bI @ W).map(simplify),
        "t0": W.scale(d).map(simplify),
        "t": (V @ W).scale(d).map(simplify),
    }
    if A is not None:
        flows["t1"] = (A @ W).scale(d).map(simplify)
    check = None
    if verifier is not None:
        combo = SymMatrix.build(
            n,
            n,
            lambda i, j: mul(
                const(1 / lr.det),
                add(mul(const(lr.a), flows["t"][i, j]), mul(const(-lr.b), flows["t0"][i, j])),
            ),
        )
        check = verifier.family("s-flow-identity", "s-flow == (a t-flow - b t0-flow)/(aq - bp)", _residuals(flows["s"], combo))
    return flows, check


def general_reciprocal_flow(
    V: SymMatrix,
    a,
    b,
    p,
    q,
    chart: Chart,
    verifier: Verifier,
    name: str = "reciprocal-flow",
) -> tuple:
    """``(a V - b I)(q I - p V)^{-1}`` for conservation-law pairs ``(a, b)`` and ``(p, q)``.

    Returns ``(matrix or None, check)``.
    """
    a, b, p, q = (as_expr(x) for x in (a, b, p, q))
    n = chart.n
    parts = [
        check_conservation_law(V, a, b, chart, verifier, name="conservation-ab"),
        check_conservation_law(V, p, q, chart, verifier, name="conservation-pq"),
        verifier.nonzero("nondegenerate", "a q - p b not identically zero", _sub(mul(a, q), mul(p, b))),
    ]
    if any(not c.ok for c in parts):
        return None, combine(name, parts)
    Qm = SymMatrix.build(n, n, lambda i, j: add(q if i == j else ZERO, mul(NEG, p, V[i, j])))
    try:
        W = mat_inverse(Qm, tester=verifier.tester)
    except SingularMatrixError as exc:
        parts.append(failed("invertible", "q I - p V is singular", detail=str(exc)))
        return None, combine(name, parts)
    N = SymMatrix.build(n, n, lambda i, j: add(mul(a, V[i, j]), mul(NEG, b) if i == j else ZERO))
    return (N @ W).map(simplify), combine(name, parts)


# pulled-back geometry


@dataclass
class PulledBackStructure:
    chart: Chart
    g: SymMatrix
    gamma: tuple
    contra: tuple
    curvature: tuple
    check: Check
    explicit_g: Optional[SymMatrix] = None
    explicit_contra: Optional[tuple] = None


def pullback_structure(B: BihamiltonianStructure, vc: VariableChange, verifier: Optional[Verifier] = None) -> PulledBackStructure:
    """Levi-Civita data of ``g_bar^{ij}(v) = g^{ij}(u)`` computed in the pulled-back chart."""
    ver = verifier or B.verifier
    n = B.n
    chart = vc.chart
    gbar = ContravariantMetric(chart, B.g)
    gamma_bar = christoffel_from_metric(gbar, ver, B.g_lower)
    contra_bar = contravariant_christoffel(gbar, gamma_bar)
    G, Q = B.gamma, vc.Q
    lemma1 = {}
    for k in range(n):
        for i in range(n):
            for j in range(n):
                rhs = add(*(mul(gamma_bar[k][i][l], Q[l, j]) for l in range(n)))
                lemma1[(k, i, j)] = _sub(G[k][i][j], rhs)
    parts = [ver.family("lemma1", "Gamma^k_{ij} == Gamma_bar^k_{il} Q^l_j", lemma1)]
    Rbar = curvature(chart, gamma_bar)
    parts.append(ver.family("lemma2", "R_bar_{ijk}^s == 0", curvature_components(Rbar)))
    R = curvature(B.chart, G)
    transport = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                for s in range(n):
                    rhs = add(
                        *(
                            mul(Rbar[m][l][k][s], Q[m, i], Q[l, j])
                            for m in range(n)
                            for l in range(n)
                            if m != l
                        )
                    )
                    transport[(i, j, k, s)] = _sub(R[i][j][k][s], rhs)
    parts.append(ver.family("curvature-transport", "R_{ijk}^s == R_bar_{mlk}^s Q^m_i Q^l_j", transport))
    explicit_g = explicit_contra = None
    if vc.has_inverse:
        explicit_g = vc.matrix_to_v(B.g)
        em = ContravariantMetric(vc.v_chart(), explicit_g)
        parts.append(is_flat(em, ver, name="explicit-flat"))
        explicit_contra = contravariant_christoffel(em, christoffel_from_metric(em, ver))
        agree = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    agree[(i, j, k)] = _sub(vc.to_v(contra_bar[i][j][k]), explicit_contra[i][j][k])
        parts.append(ver.family("explicit-connection", "Gamma_bar^{ij}_k(u(v)) == Gamma_bar^{ij}_k computed in v", agree))
    return PulledBackStructure(chart, B.g, gamma_bar, contra_bar, Rbar, combine("pullback", parts), explicit_g, explicit_contra)


# Hamiltonians and potentials


def pavlov_transformed_hamiltonian(
    B: BihamiltonianStructure,
    h,
    h0: Expr,
    lr: LinearReciprocalTransform,
    vc: Optional[VariableChange] = None,
    verifier: Optional[Verifier] = None,
) -> tuple:
    """``h_bar = a(q h - p/2 eta^{ij} h_i h_j) - b(q h0 - p(u^i h_i - h))`` as a function of u.

    Returns ``(h_bar, check)``; the check compares ``d_j h_bar`` with
    ``d_i(a h - b h0) Q^i_j`` when ``vc`` is given.
    """
    ch, n = B.chart, B.n
    h = as_expr(h)
    gh = ch.grad(h)
    u = [sym(c) for c in ch.symbols]
    quad = add(*(mul(B.eta[i, j], gh[i], gh[j]) for i in range(n) for j in range(n) if B.eta[i, j] != ZERO))
    euler = add(*(mul(u[i], gh[i]) for i in range(n)))
    a, b, p, q = (const(x) for x in (lr.a, lr.b, lr.p, lr.q))
    hbar = add(
        mul(a, add(mul(q, h), mul(const(Fraction(-1, 2)), p, quad))),
        mul(NEG, b, add(mul(q, h0), mul(NEG, p, _sub(euler, h)))),
    )
    hbar = simplify(hbar)
    if vc is None or verifier is None:
        return hbar, None
    target = ch.grad(add(mul(a, h), mul(NEG, b, h0)))
    res = {}
    dh = ch.grad(hbar)
    for j in range(n):
        res[(j,)] = _sub(dh[j], add(*(mul(target[i], vc.Q[i, j]) for i in range(n))))
    return hbar, verifier.family("pavlov-consistency", "d_j h_bar == d_i(a h - b h0) Q^i_j", res)


@dataclass
class Densities:
    h: Expr
    f: Expr
    h0: Expr
    f0: Optional[Expr] = None
    h1: Optional[Expr] = None
    f1: Optional[Expr] = None


def target_gradient(role: str, dens: Densities, lr: LinearReciprocalTransform, chart: Chart):
    """Gradient ``d(bar)/dv^i`` as functions of u, or a string saying why it is unavailable."""
    a, b, d = const(lr.a), const(lr.b), const(lr.det)
    if role == "hbar":
        return chart.grad(add(mul(a, dens.h), mul(NEG, b, dens.h0)))
    if role == "fbar":
        if lr.b != 0 and dens.f0 is None:
            return "f0 unavailable (no flat coordinates of g supplied) and b != 0"
        f0 = dens.f0 if dens.f0 is not None else ZERO
        return chart.grad(add(mul(a, dens.f), mul(NEG, b, f0)))
    if role == "h1bar":
        if dens.h1 is None:
            return "no h1 supplied"
        return tuple(mul(d, x) for x in chart.grad(dens.h1))
    if role == "f1bar":
        if dens.f1 is None:
            return "no f1 supplied"
        return tuple(mul(d, x) for x in chart.grad(dens.f1))
    raise ValueError(f"unknown potential role {role!r}")


def candidate_gradient(cand: Expr, vc: VariableChange) -> tuple:
    """``(d cand/dv^k)(v(u))``."""
    cand = as_expr(cand)
    return tuple(vc.to_u(differentiate(cand, c)) for c in vc.vcoords)


def verify_potential(
    cand,
    role: str,
    vc: VariableChange,
    lr: LinearReciprocalTransform,
    dens: Densities,
    base_chart: Chart,
    verifier: Verifier,
    name: Optional[str] = None,
) -> Check:
    """``d_{u^j}[cand(v(u))] == T_i Q^i_j`` with ``T`` the role's target gradient."""
    name = name or f"potential-{role}"
    cand = as_expr(cand)
    stray = cand.free_symbols - set(vc.vcoords)
    if stray:
        return failed(name, f"candidate uses symbols outside the v coordinates: {sorted(stray)}")
    T = target_gradient(role, dens, lr, base_chart)
    if isinstance(T, str):
        return skipped(name, T)
    n = base_chart.n
    composed = vc.to_u(cand)
    res = {}
    for j in range(n):
        lhs = base_chart.d(composed, j)
        rhs = add(*(mul(T[i], vc.Q[i, j]) for i in range(n)))
        res[(j,)] = _sub(lhs, rhs)
    return verifier.family(name, f"d_(u^j)[{role}(v(u))] == T_i Q^i_j", res)


def closedness_certificate(density, W: SymMatrix, chart: Chart, verifier: Verifier, name: str = "closedness") -> Check:
    """``(Hess density) W`` symmetric, so a potential in v exists."""
    H = chart.hessian(as_expr(density))
    HW = H @ W
    n = chart.n
    res = {(i, j): _sub(HW[i, j], HW[j, i]) for i in range(n) for j in range(i + 1, n)}
    if not res:
        return Check(name, "pass", identity="(Hess h) W symmetric (n = 1)")
    return verifier.family(name, "(Hess h) W == ((Hess h) W)^T", res)


# theorems


def verify_theorem1(B: BihamiltonianStructure, vc: VariableChange, pb: PulledBackStructure, verifier: Optional[Verifier] = None, name: str = "theorem1") -> Check:
    """Flatness of ``g_bar`` and the flat pencil ``(eta_bar, g_bar)``."""
    ver = verifier or B.verifier
    chart = vc.chart
    lemma = [p for p in pb.check.parts if p.name in ("lemma1", "lemma2", "curvature-transport")]
    parts = list(lemma)
    eta_bar = ContravariantMetric(chart, B.eta)
    gbar = ContravariantMetric(chart, B.g)
    parts.append(check_flat_pencil(eta_bar, gbar, ver, name="pencil"))
    if vc.has_inverse and pb.explicit_g is not None:
        vch = vc.v_chart()
        parts.append(check_flat_pencil(ContravariantMetric(vch, B.eta), ContravariantMetric(vch, pb.explicit_g), ver, name="pencil-explicit"))
    return combine(name, parts)


@dataclass
class FlowRoute:
    """One way of computing ``J_bar grad F`` for a flow role."""

    label: str
    structure: str  # "J1" or "J2"
    grad: tuple


def _j1(B: BihamiltonianStructure, chart: Chart, grad) -> SymMatrix:
    return flow_from_eta(B.eta, chart, grad=grad)


def _j2(g: SymMatrix, gamma, contra, chart: Chart, grad) -> tuple:
    return flow_from_g(g, gamma, contra, chart, grad=grad)


def _flow_checks(
    B: BihamiltonianStructure,
    vc: VariableChange,
    pb: PulledBackStructure,
    target: SymMatrix,
    role: str,
    grads: dict,
    cands: dict,
    ver: Verifier,
) -> list:
    """Compare J_bar flows against ``target`` along every available route.

    ``grads`` maps ``"J1"``/``"J2"`` to certified target gradients (or a skip
    reason) and ``cands`` maps them to candidate potentials in v (or None).
    """
    parts = []
    chart = vc.chart
    for struct in ("J1", "J2"):
        T = grads.get(struct)
        label = f"{role}-{struct}"
        if isinstance(T, str):
            parts.append(skipped(label, T))
        elif T is not None:
            parts.extend(_compare(B, pb, chart, struct, T, target, label, ver))
        cand = cands.get(struct)
        if cand is not None:
            Tc = candidate_gradient(cand, vc)
            parts.extend(_compare(B, pb, chart, struct, Tc, target, f"{label}-candidate", ver))
            if vc.has_inverse:
                parts.extend(_compare_explicit(B, vc, pb, struct, cand, target, f"{label}-explicit", ver))
    return parts


def _compare(B, pb, chart, struct, grad, target, label, ver) -> list:
    if struct == "J1":
        M = _j1(B, chart, grad)
        return [ver.family(label, "eta^{ik} d_j T_k == flow", _residuals(M, target))]
    forms = _j2(pb.g, pb.gamma, pb.contra, chart, grad)
    return [
        ver.family(label, "g_bar^{ik} d_j T_k + Gamma_bar^{ik}_j T_k == flow", _residuals(forms[1], target)),
    ]


def _compare_explicit(B, vc, pb, struct, cand, target, label, ver) -> list:
    vch = vc.v_chart()
    tv = vc.matrix_to_v(target)
    cand = as_expr(cand)
    grad = vch.grad(cand)
    if struct == "J1":
        M = flow_from_eta(B.eta, vch, grad=grad)
        return [ver.family(label, "eta^{ik} d_j d_k F(v) == flow(u(v))", _residuals(M, tv))]
    forms = flow_from_g(pb.explicit_g, None, pb.explicit_contra, vch, grad=grad)
    return [ver.family(label, "g_bar^{ik}(v) F_{kj} + Gamma_bar^{ik}_j(v) F_k == flow(u(v))", _residuals(forms[1], tv))]


def verify_theorem2(
    B: BihamiltonianStructure,
    vc: VariableChange,
    pb: PulledBackStructure,
    lr: LinearReciprocalTransform,
    dens: Densities,
    s_flow: SymMatrix,
    candidates: Mapping[str, Expr],
    verifier: Optional[Verifier] = None,
    name: str = "theorem2",
) -> Check:
    """The s-flow equals ``J1_bar grad h_bar`` and ``J2_bar grad f_bar``."""
    ver = verifier or B.verifier
    base = B.chart
    cands = {k: as_expr(v) for k, v in candidates.items() if v is not None and k in ("hbar", "fbar")}
    parts = [verify_potential(cands[r], r, vc, lr, dens, base, ver) for r in ("hbar", "fbar") if r in cands]
    grads = {"J1": target_gradient("hbar", dens, lr, base), "J2": target_gradient("fbar", dens, lr, base)}
    parts.extend(_flow_checks(B, vc, pb, s_flow, "s", grads, {"J1": cands.get("hbar"), "J2": cands.get("fbar")}, ver))
    return combine(name, parts)


@dataclass
class CommutingFlow:
    """A second bihamiltonian flow ``A = J1 grad h1 = J2 grad f1`` and its transform."""

    label: str
    h1: Expr
    f1: Expr
    transformed: SymMatrix
    candidates: dict = field(default_factory=dict)


def verify_theorem3(
    B: BihamiltonianStructure,
    vc: VariableChange,
    pb: PulledBackStructure,
    lr: LinearReciprocalTransform,
    dens: Densities,
    t0_flow: SymMatrix,
    commuting: Sequence[CommutingFlow],
    verifier: Optional[Verifier] = None,
    name: str = "theorem3",
) -> Check:
    """Commuting flows, and the translation flow, stay bihamiltonian after the transform."""
    ver = verifier or B.verifier
    base = B.chart
    d = const(lr.det)
    parts = []
    t0_grads = {"J1": tuple(mul(d, x) for x in base.grad(dens.h0))}
    if dens.f0 is not None:
        t0_grads["J2"] = tuple(mul(d, x) for x in base.grad(dens.f0))
    else:
        t0_grads["J2"] = "f0 unavailable (no flat coordinates of g supplied)"
    parts.extend(_flow_checks(B, vc, pb, t0_flow, "t0", t0_grads, {}, ver))
    if not commuting:
        parts.append(skipped("t1", "no commuting flow supplied"))
    for cf in commuting:
        dn = replace(dens, h1=as_expr(cf.h1), f1=as_expr(cf.f1))
        cands = {k: as_expr(v) for k, v in cf.candidates.items() if v is not None}
        for r in ("h1bar", "f1bar"):
            if r in cands:
                parts.append(verify_potential(cands[r], r, vc, lr, dn, base, ver, name=f"{cf.label}-potential-{r}"))
        grads = {"J1": target_gradient("h1bar", dn, lr, base), "J2": target_gradient("f1bar", dn, lr, base)}
        parts.extend(
            _flow_checks(B, vc, pb, cf.transformed, cf.label, grads, {"J1": cands.get("h1bar"), "J2": cands.get("f1bar")}, ver)
        )
        parts.append(closedness_certificate(dn.h1, vc.W, base, ver, name=f"{cf.label}-closedness-h1"))
        parts.append(closedness_certificate(dn.f1, vc.W, base, ver, name=f"{cf.label}-closedness-f1"))
    return combine(name, parts)


def verify_theorem2_3(
    B: BihamiltonianStructure,
    vc: VariableChange,
    pb: PulledBackStructure,
    lr: LinearReciprocalTransform,
    dens: Densities,
    flows: dict,
    candidates: Mapping[str, Expr],
    verifier: Optional[Verifier] = None,
) -> tuple:
    """``(theorem2, theorem3)`` for a single commuting flow stored as ``flows["t1"]``."""
    th2 = verify_theorem2(B, vc, pb, lr, dens, flows["s"], candidates, verifier)
    commuting = []
    if "t1" in flows and dens.h1 is not None and dens.f1 is not None:
        cands = {k: candidates.get(k) for k in ("h1bar", "f1bar")}
        commuting.append(CommutingFlow("t1", dens.h1, dens.f1, flows["t1"], cands))
    th3 = verify_theorem3(B, vc, pb, lr, dens, flows["t0"], commuting, verifier)
    return th2, th3


def check_composition(V: SymMatrix, lr: LinearReciprocalTransform, chart: Chart, verifier: Verifier, name: str = "composition") -> Check:
    """Applying ``lr`` and then its inverse returns the original flow matrix."""
    first, c1 = general_reciprocal_flow(V, lr.a, lr.b, lr.p, lr.q, chart, verifier, name="forward")
    if first is None:
        return combine(name, [c1])
    inv = lr.inverse()
    back, c2 = general_reciprocal_flow(first, inv.a, inv.b, inv.p, inv.q, chart, verifier, name="backward")
    parts = [c1, c2]
    if back is not None:
        parts.append(verifier.family("round-trip", "inverse(lr)(lr(V)) == V", _residuals(back, V)))
    return combine(name, parts)


__all__ = [
    "Densities",
    "LinearReciprocalTransform",
    "PulledBackStructure",
    "ROLES",
    "VariableChange",
    "CommutingFlow",
    "candidate_gradient",
    "check_composition",
    "closedness_certificate",
    "general_reciprocal_flow",
    "new_dependent_variables",
    "pavlov_transformed_hamiltonian",
    "pullback_structure",
    "target_gradient",
    "transform_flows",
    "verify_potential",
    "verify_theorem1",
    "verify_theorem2",
    "verify_theorem2_3",
    "verify_theorem3",
]
