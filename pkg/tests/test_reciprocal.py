from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp

from bihydro.geometry import Chart
from bihydro.hydro import BihamiltonianStructure, TranslationData, flow_eta, translation_hamiltonians
from bihydro.reciprocal import (
    Densities,
    LinearReciprocalTransform,
    check_composition,
    closedness_certificate,
    general_reciprocal_flow,
    new_dependent_variables,
    pavlov_transformed_hamiltonian,
    pullback_structure,
    transform_flows,
    verify_potential,
    verify_theorem1,
    verify_theorem2_3,
)
from bihydro.report import Verifier
from bihydro.symkern import SingularMatrixError, ZeroTestConfig, add, const, mul, parse, render

from conftest import TODA_INTERVALS, M, to_sympy

SWAP = LinearReciprocalTransform(0, 1, -1, 0)


def same(ver, a, b) -> bool:
    a = parse(a) if isinstance(a, str) else a
    b = parse(b) if isinstance(b, str) else b
    return ver.single("eq", "", add(a, mul(const(-1), b))).status == "pass"


class Toda:
    def __init__(self, lr=SWAP, inverse=None, vcoords=("wb", "ub")):
        self.ver = Verifier(ZeroTestConfig(intervals=TODA_INTERVALS))
        self.B = BihamiltonianStructure(Chart(["w", "u"]), M([["0", "1"], ["1", "0"]]), M([["2*exp(u)", "w"], ["w", "2"]]), self.ver)
        self.h, self.f = parse("exp(u) + w^2/2"), parse("w")
        self.h1, self.f1 = parse("exp(u)*w + w^3/6"), parse("(exp(u) + w^2/2)/2")
        self.lr = lr
        if inverse is None and lr == SWAP:
            inverse = {"w": parse("ub"), "u": parse("log(wb)")}
        self.vc = new_dependent_variables(self.B, self.h, lr, vcoords, inverse, self.ver)
        self.V, self.A = flow_eta(self.B, self.h), flow_eta(self.B, self.h1)
        self.flows, self.sflow_check = transform_flows(self.V, self.A, lr, self.vc.W, self.ver)
        self.pb = pullback_structure(self.B, self.vc, self.ver)
        self.h0, _, _ = translation_hamiltonians(self.B, None, self.ver)
        self.dens = Densities(self.h, self.f, self.h0, None, self.h1, self.f1)


class KdV:
    def __init__(self, m, k=1):
        self.ver = Verifier()
        self.m, self.k = m, k
        self.B = BihamiltonianStructure(Chart(["u"]), M([["1"]]), M([["u"]]), self.ver)
        self.h = parse(f"u^{m + 2}/{m + 2}")
        self.f = parse(f"2*u^{m + 1}/{2 * m + 1}")
        self.h1 = parse(f"u^{k + 2}/{k + 2}")
        self.f1 = parse(f"2*u^{k + 1}/{2 * k + 1}")
        self.vc = new_dependent_variables(self.B, self.h, SWAP, ["v"], {"u": parse(f"v^(1/{m + 1})")}, self.ver)
        self.h0, self.f0, self.tcheck = translation_hamiltonians(self.B, TranslationData((parse("2*sqrt(u)"),), M([["1"]])), self.ver)
        self.flows, _ = transform_flows(flow_eta(self.B, self.h), flow_eta(self.B, self.h1), SWAP, self.vc.W, self.ver)
        self.pb = pullback_structure(self.B, self.vc, self.ver)
        self.dens = Densities(self.h, self.f, self.h0, self.f0, self.h1, self.f1)


# transformation data


def test_lr_validation_and_inverse():
    with pytest.raises(ValueError):
        LinearReciprocalTransform(1, 2, 2, 4)
    lr = LinearReciprocalTransform(2, 1, 3, 5)
    inv = lr.inverse()
    a = [[lr.a, lr.b], [lr.p, lr.q]]
    b = [[inv.a, inv.b], [inv.p, inv.q]]
    prod = [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert prod == [[1, 0], [0, 1]]
    assert LinearReciprocalTransform.identity().det == 1


@pytest.mark.parametrize("m", [1, 2, 3])
def test_kdv_new_variable_and_s_flow(m):
    K = KdV(m)
    assert K.vc.check.status == "pass"
    assert same(K.ver, K.vc.v[0], f"u^{m + 1}")
    # oracle: s-flow = -(q - pV)^(-1) with V = (m+1) u^m, written in v by sympy
    v = sp.Symbol("v", positive=True)
    u = v ** sp.Rational(1, m + 1)
    oracle = sp.simplify(-1 / ((m + 1) * u**m))
    ours = to_sympy(K.vc.to_v(K.flows["s"][0, 0]))
    assert sp.simplify(ours.subs(sp.Symbol("v"), v) - oracle) == 0
    closed = -sp.Rational(1, m + 1) * v ** sp.Rational(-m, m + 1)
    assert sp.simplify(oracle - closed) == 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_kdv_pavlov_hamiltonian(m):
    K = KdV(m)
    hbar, c = pavlov_transformed_hamiltonian(K.B, K.h, K.h0, SWAP, K.vc, K.ver)
    assert c.status == "pass"
    expected = parse(f"-{m + 1}/{m + 2}*v^({m + 2}/{m + 1})")
    assert same(K.ver, hbar, K.vc.to_u(expected))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_kdv_potentials_and_theorems(m, k):
    K = KdV(m, k)
    cands = {
        "hbar": parse(f"-{m + 1}/{m + 2}*v^({m + 2}/{m + 1})"),
        "fbar": parse("-2*v"),
        "h1bar": parse(f"{m + 1}/{m + k + 2}*v^({k + m + 2}/{m + 1})"),
        "f1bar": parse(f"{2 * (k + 1) * (m + 1)}/{(2 * k + 1) * (m + k + 1)}*v^({m + k + 1}/{m + 1})"),
    }
    for role, cand in cands.items():
        assert verify_potential(cand, role, K.vc, SWAP, K.dens, K.B.chart, K.ver).status == "pass", role
    assert verify_theorem1(K.B, K.vc, K.pb, K.ver).status == "pass"
    th2, th3 = verify_theorem2_3(K.B, K.vc, K.pb, SWAP, K.dens, K.flows, cands, K.ver)
    assert th2.status == "pass" and th3.status == "pass"
    t1 = parse(f"{k + 1}/{m + 1}*v^({k - m}/{m + 1})")
    assert same(K.ver, K.flows["t1"][0, 0], K.vc.to_u(t1))


def test_kdv_wrong_candidate_fails():
    K = KdV(2)
    bad = parse("-3/4*v^(4/3) + v^13")
    c = verify_potential(bad, "hbar", K.vc, SWAP, K.dens, K.B.chart, K.ver)
    assert c.status == "fail"
    assert set(c.witness) == {"u"}


def test_kdv_pulled_back_connection():
    K = KdV(2)
    assert K.pb.check.status == "pass"
    assert render(K.pb.explicit_g[0, 0]) == "v^(1/3)"
    assert same(K.ver, K.pb.explicit_contra[0][0][0], "1/6*v^(-2/3)")


# Toda


@pytest.fixture(scope="module")
def toda():
    return Toda()


def test_toda_variables(toda):
    assert toda.vc.check.status == "pass"
    assert [render(x) for x in toda.vc.v] == ["exp(u)", "w"]


def test_toda_transformed_flows(toda):
    ver, vc = toda.ver, toda.vc
    assert toda.sflow_check.status == "pass"
    s = vc.matrix_to_v(toda.flows["s"])
    t1 = vc.matrix_to_v(toda.flows["t1"])
    for got, rows in ((s, [["0", "-1"], ["-1/wb", "0"]]), (t1, [["ub", "wb"], ["1", "ub"]])):
        for i in range(2):
            for j in range(2):
                assert same(ver, got[i, j], rows[i][j])


def test_toda_pullback(toda):
    assert toda.pb.check.status == "pass"
    g = toda.pb.explicit_g
    assert [[render(x) for x in r] for r in g.rows] == [["2*wb", "ub"], ["ub", "2"]]
    C = toda.pb.explicit_contra
    expected = [[["1", "0"], ["0", "0"]], [["0", "1"], ["0", "0"]]]
    for i in range(2):
        for j in range(2):
            for k in range(2):
                assert same(toda.ver, C[i][j][k], expected[i][j][k])


def test_toda_potentials(toda):
    cands = {
        "hbar": "-wb*log(wb) + wb - ub^2/2",
        "h1bar": "(ub^2*wb + wb^2)/2",
        "f1bar": "ub*wb/2",
    }
    for role, text in cands.items():
        c = verify_potential(parse(text), role, toda.vc, SWAP, toda.dens, toda.B.chart, toda.ver)
        assert c.status == "pass", role
    # no flat coordinates of g are supplied, so f_bar has no certified target gradient
    fbar = parse("-ub*log(wb)/2 + ub - sqrt(-4*wb + ub^2)*ArcTanh(ub/sqrt(-4*wb + ub^2))")
    assert verify_potential(fbar, "fbar", toda.vc, SWAP, toda.dens, toda.B.chart, toda.ver).status == "skipped"


def test_toda_theorems(toda):
    cands = {
        "hbar": parse("-wb*log(wb) + wb - ub^2/2"),
        "fbar": parse("-ub*log(wb)/2 + ub - sqrt(-4*wb + ub^2)*ArcTanh(ub/sqrt(-4*wb + ub^2))"),
        "h1bar": parse("(ub^2*wb + wb^2)/2"),
        "f1bar": parse("ub*wb/2"),
    }
    assert verify_theorem1(toda.B, toda.vc, toda.pb, toda.ver).status == "pass"
    th2, th3 = verify_theorem2_3(toda.B, toda.vc, toda.pb, SWAP, toda.dens, toda.flows, cands, toda.ver)
    assert th2.status == "pass" and th3.status == "pass"
    names = {p.name: p.status for p in th2.parts}
    assert names["s-J2-candidate"] == "pass"
    assert names["s-J2-explicit"] == "pass"


def test_toda_arctanh_candidate_is_sensitive(toda):
    """Changing the arctanh coefficient breaks the J2 route."""
    cands = {"fbar": parse("-ub*log(wb)/2 + ub - 2*sqrt(-4*wb + ub^2)*ArcTanh(ub/sqrt(-4*wb + ub^2))")}
    th2, _ = verify_theorem2_3(toda.B, toda.vc, toda.pb, SWAP, toda.dens, toda.flows, cands, toda.ver)
    assert th2.status == "fail"


def test_toda_pavlov(toda):
    hbar, c = pavlov_transformed_hamiltonian(toda.B, toda.h, toda.h0, SWAP, toda.vc, toda.ver)
    assert c.status == "pass"
    assert same(toda.ver, toda.vc.to_v(hbar), "-wb*log(wb) + wb - ub^2/2")


# closedness


def test_closedness_passes_on_fixtures(toda):
    for dens in (toda.h1, toda.f1, toda.h, toda.f):
        assert closedness_certificate(dens, toda.vc.W, toda.B.chart, toda.ver).status == "pass"
    K = KdV(2)
    assert closedness_certificate(K.h1, K.vc.W, K.B.chart, K.ver).status == "pass"


def test_closedness_fails_on_asymmetric_counterexample(toda):
    # Hess(u^2) W = [[0, 0], [2 exp(-u), 0]] is not symmetric
    c = closedness_certificate(parse("u^2"), toda.vc.W, toda.B.chart, toda.ver)
    assert c.status == "fail"
    assert c.witness and "u" in c.witness


# identity and composition


def test_identity_transform_is_a_fixed_point():
    T = Toda(LinearReciprocalTransform.identity(), inverse={"w": parse("wb"), "u": parse("ub")})
    ver = T.ver
    for i in range(2):
        assert same(ver, T.vc.v[i], ["w", "u"][i])
        for j in range(2):
            assert same(ver, T.flows["s"][i, j], T.V[i, j])
            assert same(ver, T.flows["t1"][i, j], T.A[i, j])
            assert same(ver, T.flows["t0"][i, j], "1" if i == j else "0")
            assert same(ver, T.vc.W[i, j], "1" if i == j else "0")
            for k in range(2):
                assert same(ver, T.pb.contra[i][j][k], T.B.contra[i][j][k])
    hbar, _ = pavlov_transformed_hamiltonian(T.B, T.h, T.h0, T.lr)
    assert same(ver, hbar, T.h)
    assert T.pb.check.status == "pass"


def test_composition_round_trip(toda):
    for lr in (SWAP, LinearReciprocalTransform(2, 1, 3, 5), LinearReciprocalTransform(1, -1, 1, 2)):
        assert check_composition(toda.V, lr, toda.B.chart, toda.ver).status == "pass"


def test_general_reciprocal_flow_matches_transform(toda):
    m, c = general_reciprocal_flow(toda.V, 0, 1, -1, 0, toda.B.chart, toda.ver)
    assert c.status == "pass"
    for i in range(2):
        for j in range(2):
            assert same(toda.ver, m[i, j], toda.flows["s"][i, j])


def test_singular_q_raises(ver):
    B = BihamiltonianStructure(Chart(["u"]), M([["1"]]), M([["u"]]), ver)
    with pytest.raises(SingularMatrixError):
        new_dependent_variables(B, parse("u^2/2"), LinearReciprocalTransform(1, 0, 1, 1), ["v"], None, ver)


def test_inverse_map_is_checked(ver):
    B = BihamiltonianStructure(Chart(["u"]), M([["1"]]), M([["u"]]), ver)
    vc = new_dependent_variables(B, parse("u^3/3"), SWAP, ["v"], {"u": parse("v^(1/3)")}, ver)
    assert vc.check.status == "fail"
    assert vc.check.failures()[0].name == "inverse-map"


def test_general_transform_keeps_pencil_flat():
    """Theorem 1 for a transformation with all four constants nonzero."""
    lr = LinearReciprocalTransform(2, 1, 1, 3)
    ver = Verifier(ZeroTestConfig(intervals={"u": (Fraction(1, 2), Fraction(3, 2))}))
    B = BihamiltonianStructure(Chart(["u"]), M([["1"]]), M([["u"]]), ver)
    vc = new_dependent_variables(B, parse("u^3/3"), lr, ["v"], None, ver)
    pb = pullback_structure(B, vc, ver)
    assert verify_theorem1(B, vc, pb, ver).status == "pass"
