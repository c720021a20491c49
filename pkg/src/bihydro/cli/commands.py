"""Pipelines behind the ``check``, ``transform`` and ``example`` subcommands."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..geometry import Chart, check_dubrovin_conditions, is_flat
from ..hydro import (
    BihamiltonianStructure,
    check_bihamiltonian,
    check_commuting,
    check_pencil,
    check_semisimple,
    flow_eta,
    translation_hamiltonians,
)
from ..reciprocal import (
    CommutingFlow,
    Densities,
    LinearReciprocalTransform,
    check_composition,
    new_dependent_variables,
    pavlov_transformed_hamiltonian,
    pullback_structure,
    transform_flows,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
)
from ..report import Check, Verifier, combine, failed, skipped
from ..symkern import SingularMatrixError, SymMatrix, ZeroTestConfig, add, const, mul, parse, render
from . import fixtures
from .definition import SystemDefinition
from .output import Report


@dataclass(frozen=True)
class Settings:
    """Zero-test overrides from the command line; None keeps the file or default value."""

    precision: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None


def make_verifier(defn: SystemDefinition, settings: Settings = Settings()) -> Verifier:
    zt = defn.zerotest
    kw = {}
    for key in ("precision", "samples", "seed"):
        value = getattr(settings, key)
        if value is None:
            value = zt.get(key)
        if value is not None:
            kw[key] = value
    return Verifier(ZeroTestConfig(intervals=zt.get("intervals", {}), **kw))


def _report(ver: Verifier, checks, objects=()) -> Report:
    return Report(list(checks), list(objects), seed=ver.config.seed, precision=ver.config.precision)


def _structure(defn: SystemDefinition, ver: Verifier) -> BihamiltonianStructure:
    return BihamiltonianStructure(Chart(defn.coords), defn.eta, defn.g, ver)


def fmt_matrix(m: SymMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(render(x) for x in row) + "]" for row in m.rows) + "]"


def fmt_tensor(t) -> str:
    if isinstance(t, (list, tuple)):
        return "[" + ", ".join(fmt_tensor(x) for x in t) + "]"
    return render(t)


# check


def structural_checks(defn: SystemDefinition, ver: Verifier) -> list:
    B = _structure(defn, ver)
    checks = [
        check_bihamiltonian(B, defn.h, defn.f, ver),
        check_pencil(B, ver),
        check_semisimple(B, ver),
        is_flat(B.metric, ver, name="flat"),
    ]
    _, _, tc = translation_hamiltonians(B, defn.flat, ver)
    checks.append(tc)
    V = flow_eta(B, defn.h)
    if defn.flows:
        parts = []
        for i, fl in enumerate(defn.flows, 1):
            parts.append(check_bihamiltonian(B, fl.h, fl.f, ver, name=f"t{i}-biham"))
            parts.append(check_commuting(V, flow_eta(B, fl.h), ver, name=f"t{i}-commute"))
        checks.append(combine("commuting", parts))
    else:
        checks.append(skipped("commuting", "no extra flows supplied"))
    if defn.dubrovin is not None:
        checks.append(check_dubrovin_conditions(B.eta_metric, B.metric, defn.dubrovin, ver))
    else:
        checks.append(skipped("dubrovin", "no certificate supplied"))
    return checks


def cmd_check(defn: SystemDefinition, settings: Settings = Settings()) -> Report:
    ver = make_verifier(defn, settings)
    return _report(ver, structural_checks(defn, ver))


# transform


@dataclass
class TransformRun:
    """Everything computed by the transform pipeline, kept for the example checks."""

    checks: list
    objects: list
    defn: Optional[SystemDefinition] = None
    B: Optional[BihamiltonianStructure] = None
    vc: object = None
    pb: object = None
    flows: Optional[dict] = None
    extra: Optional[list] = None
    hbar: object = None


def transform_pipeline(defn: SystemDefinition, ver: Verifier) -> TransformRun:
    spec = defn.transform
    if spec is None:
        return TransformRun([failed("transform", "definition has no [transform] section")], [], defn)
    B = _structure(defn, ver)
    try:
        lr = LinearReciprocalTransform(spec.a, spec.b, spec.p, spec.q)
    except ValueError as exc:
        return TransformRun([failed("transform", f"aq - bp == 0: {exc}")], [], defn, B)
    try:
        vc = new_dependent_variables(B, defn.h, lr, spec.vcoords, spec.inverse, ver)
    except SingularMatrixError as exc:
        return TransformRun([failed("variable-change", f"Q singular: det Q = {render(exc.det)}", str(exc))], [], defn, B)
    objects = []
    for name, v in zip(spec.vcoords, vc.v):
        objects.append((name, render(v)))
    objects.append(("Q", fmt_matrix(vc.Q)))
    objects.append(("W", fmt_matrix(vc.W)))
    checks = [vc.check]

    h0, f0, tc = translation_hamiltonians(B, defn.flat, ver)
    V = flow_eta(B, defn.h)
    extra = [flow_eta(B, fl.h) for fl in defn.flows]
    flows, scheck = transform_flows(V, extra[0] if extra else None, lr, vc.W, ver)
    transformed = [flows["t1"]] if extra else []
    for A in extra[1:]:
        transformed.append(transform_flows(V, A, lr, vc.W)[0]["t1"])
    checks.append(scheck)

    def show(label, m):
        objects.append((f"{label}(u)", fmt_matrix(m)))
        if vc.has_inverse:
            objects.append((f"{label}(v)", fmt_matrix(vc.matrix_to_v(m))))

    show("s-flow", flows["s"])
    show("t0-flow", flows["t0"])
    for i, m in enumerate(transformed, 1):
        show(f"t{i}-flow", m)

    pb = pullback_structure(B, vc, ver)
    checks.append(pb.check)
    objects.append(("g_bar(u)", fmt_matrix(B.g)))
    objects.append(("Gamma_bar(u)", fmt_tensor(pb.contra)))
    if pb.explicit_g is not None:
        objects.append(("g_bar(v)", fmt_matrix(pb.explicit_g)))
        objects.append(("Gamma_bar(v)", fmt_tensor(pb.explicit_contra)))

    hbar, pcheck = pavlov_transformed_hamiltonian(B, defn.h, h0, lr, vc, ver)
    objects.append(("h_bar(u)", render(hbar)))
    if vc.has_inverse:
        objects.append(("h_bar(v)", render(vc.to_v(hbar))))
    checks.append(pcheck)

    checks.append(verify_theorem1(B, vc, pb, ver))
    dens = Densities(defn.h, defn.f, h0, f0)
    cands = dict(defn.candidates)
    checks.append(verify_theorem2(B, vc, pb, lr, dens, flows["s"], cands, ver))
    commuting = []
    for i, (fl, m) in enumerate(zip(defn.flows, transformed), 1):
        fc = {"h1bar": fl.hbar, "f1bar": fl.fbar}
        if i == 1:
            fc = {r: fc[r] if fc[r] is not None else cands.get(r) for r in fc}
        commuting.append(CommutingFlow(f"t{i}", fl.h, fl.f, m, fc))
    checks.append(verify_theorem3(B, vc, pb, lr, dens, flows["t0"], commuting, ver))
    checks.append(check_composition(V, lr, B.chart, ver))
    return TransformRun(checks, objects, defn, B, vc, pb, flows, transformed, hbar)


def cmd_transform(defn: SystemDefinition, settings: Settings = Settings()) -> Report:
    ver = make_verifier(defn, settings)
    run = transform_pipeline(defn, ver)
    return _report(ver, run.checks, run.objects)


# example


def _paper_forms(run: TransformRun, forms: dict, ver: Verifier) -> Check:
    """Computed objects against the closed forms, compared in the u chart."""
    vc, B = run.vc, run.B
    n = B.n
    to_u = lambda text: vc.to_u(parse(text))  # noqa: E731

    def diff(a, b):
        return add(a, mul(const(-1), b))

    parts = []
    if "V" in forms:
        V = flow_eta(B, run.defn.h)
        parts.append(_matrix_check("V", fixtures.matrix(forms["V"]), V, ver))
    if "A" in forms and run.extra:
        A = flow_eta(B, run.defn.flows[0].h)
        parts.append(_matrix_check("A", fixtures.matrix(forms["A"]), A, ver))
    parts.append(ver.family("v", "v^i(u) == closed form", {(i,): diff(vc.v[i], parse(forms["v"][i])) for i in range(n)}))
    for key, m in (("s-flow", run.flows["s"]), ("t1-flow", run.extra[0] if run.extra else None)):
        if m is None:
            continue
        res = {(i, j): diff(m[i, j], to_u(forms[key][i][j])) for i in range(n) for j in range(n)}
        parts.append(ver.family(key, f"{key}(u) == closed form(v(u))", res))
    res = {(i, j): diff(B.g[i, j], to_u(forms["g_bar"][i][j])) for i in range(n) for j in range(n)}
    parts.append(ver.family("g_bar", "g_bar^{ij} == closed form(v(u))", res))
    C = run.pb.contra
    res = {
        (i, j, k): diff(C[i][j][k], to_u(forms["Gamma_bar"][i][j][k]))
        for i in range(n)
        for j in range(n)
        for k in range(n)
    }
    parts.append(ver.family("Gamma_bar", "Gamma_bar^{ij}_k == closed form(v(u))", res))
    parts.append(ver.single("h_bar", "h_bar(u) == closed form(v(u))", diff(run.hbar, to_u(forms["h_bar"]))))
    return combine("paper-forms", parts)


def _matrix_check(name: str, expected: SymMatrix, got: SymMatrix, ver: Verifier) -> Check:
    res = {(i, j): add(got[i, j], mul(const(-1), expected[i, j])) for (i, j), _ in got.entries()}
    return ver.family(name, f"{name} == closed form", res)


def cmd_example(name: str, m: int = 1, k: int = 1, settings: Settings = Settings()) -> Report:
    if name == "kdv":
        defn = fixtures.kdv(m, k)
        forms = fixtures.kdv_paper_forms(m, k)
    elif name == "toda":
        defn = fixtures.toda()
        forms = fixtures.TODA_PAPER_FORMS
    else:
        raise ValueError(f"unknown example {name!r}")
    ver = make_verifier(defn, settings)
    checks = structural_checks(defn, ver)
    run = transform_pipeline(defn, ver)
    checks.extend(run.checks)
    if run.pb is not None:
        checks.append(_paper_forms(run, forms, ver))
    return _report(ver, checks, run.objects)
