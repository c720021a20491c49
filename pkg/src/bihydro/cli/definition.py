"""System definition files (TOML).

Example::

    [system]
    coords = ["w", "u"]
    eta = [[0, 1], [1, 0]]
    g = [["2*exp(u)", "w"], ["w", "2"]]
    h = "exp(u) + w^2/2"
    f = "w"
    flows = [{h = "exp(u)*w + w^3/6", f = "(exp(u) + w^2/2)/2"}]

    [transform]
    a = "0"
    b = "1"
    p = "-1"
    q = "0"
    vcoords = ["wb", "ub"]
    inverse = {w = "ub", u = "log(wb)"}

    [candidates]
    hbar = "-wb*log(wb) + wb - ub^2/2"

    [zerotest]
    intervals = {wb = ["1/10", "3/10"], ub = ["3/2", "2"]}
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from ..geometry import PENCIL_SYMBOL, DubrovinCertificate
from ..hydro import TranslationData
from ..symkern import Expr, ParseError, SymMatrix, parse

IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
RESERVED = {"e", "exp", "log", "sqrt", "ArcTanh", PENCIL_SYMBOL}
ROLES = ("hbar", "fbar", "h1bar", "f1bar")


class DefinitionError(ValueError):
    """Malformed definition file; carries an optional 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<definition>"):
        self.message = message
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class TransformSpec:
    a: Fraction
    b: Fraction
    p: Fraction
    q: Fraction
    vcoords: tuple
    inverse: Optional[dict] = None


@dataclass(frozen=True)
class ExtraFlow:
    h: Expr
    f: Expr
    hbar: Optional[Expr] = None
    fbar: Optional[Expr] = None


@dataclass
class SystemDefinition:
    coords: tuple
    eta: SymMatrix
    g: SymMatrix
    h: Expr
    f: Expr
    flows: list = field(default_factory=list)
    flat: Optional[TranslationData] = None
    dubrovin: Optional[DubrovinCertificate] = None
    transform: Optional[TransformSpec] = None
    candidates: dict = field(default_factory=dict)
    zerotest: dict = field(default_factory=dict)
    source: str = "<definition>"


class _Loader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.lines = text.splitlines()

    def locate(self, needle: str) -> Optional[int]:
        """First line mentioning ``needle`` as a key or string literal."""
        pats = [f'"{needle}"', f"'{needle}'", f"{needle} =", f"{needle}="]
        for i, line in enumerate(self.lines, 1):
            body = line.split("#", 1)[0] if '"' not in line else line
            if any(p in body for p in pats):
                return i
        return None

    def error(self, message: str, needle: Optional[str] = None) -> DefinitionError:
        return DefinitionError(message, self.locate(needle) if needle else None, self.source)

    def expr(self, value, where: str, allowed: Optional[set] = None) -> Expr:
        if isinstance(value, bool) or not isinstance(value, (str, int, float)):
            raise self.error(f"{where}: expected an expression string", where.split(".")[-1])
        if isinstance(value, float):
            raise self.error(f"{where}: floats are not allowed, write rationals as \"p/q\"", where.split(".")[-1])
        text = str(value)
        try:
            e = parse(text)
        except ParseError as exc:
            raise self.error(f"{where}: {exc}", text if isinstance(value, str) else None) from None
        if allowed is not None:
            stray = e.free_symbols - allowed
            if stray:
                raise self.error(f"{where}: unknown symbols {sorted(stray)}", text)
        return e

    def rational(self, value, where: str) -> Fraction:
        e = self.expr(value, where, allowed=set())
        from ..symkern import Const

        if not isinstance(e, Const):
            raise self.error(f"{where}: expected a rational constant", str(value))
        return e.value

    def matrix(self, value, where: str, n: int, allowed: Optional[set]) -> SymMatrix:
        if not isinstance(value, list) or len(value) != n or any(not isinstance(r, list) or len(r) != n for r in value):
            raise self.error(f"{where}: expected a {n}x{n} nested list", where.split(".")[-1])
        return SymMatrix([[self.expr(x, f"{where}[{i}][{j}]", allowed) for j, x in enumerate(r)] for i, r in enumerate(value)])

    def names(self, value, where: str) -> tuple:
        if not isinstance(value, list) or not value:
            raise self.error(f"{where}: expected a non-empty list of names", where.split(".")[-1])
        out = []
        for x in value:
            if not isinstance(x, str) or not IDENT.match(x):
                raise self.error(f"{where}: invalid coordinate name {x!r}", where.split(".")[-1])
            if x in RESERVED:
                raise self.error(f"{where}: {x!r} is reserved", x)
            out.append(x)
        if len(set(out)) != len(out):
            raise self.error(f"{where}: names must be distinct", where.split(".")[-1])
        if len(out) > 4:
            raise self.error(f"{where}: at most 4 coordinates are supported", where.split(".")[-1])
        return tuple(out)


def _check_keys(ld: _Loader, table: dict, section: str, allowed: set) -> None:
    for k in table:
        if k not in allowed:
            raise ld.error(f"[{section}]: unknown key {k!r}", k)


def loads(text: str, source: str = "<definition>") -> SystemDefinition:
    ld = _Loader(text, source)
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise DefinitionError(str(exc), int(m.group(1)) if m else None, source) from None
    for sec in data:
        if sec not in ("system", "transform", "candidates", "zerotest"):
            raise ld.error(f"unknown section [{sec}]", f"[{sec}]")
    sysd = data.get("system")
    if not isinstance(sysd, dict):
        raise DefinitionError("missing [system] section", None, source)
    _check_keys(ld, sysd, "system", {"coords", "eta", "g", "h", "f", "flows", "flat", "dubrovin"})
    for key in ("coords", "eta", "g", "h", "f"):
        if key not in sysd:
            raise ld.error(f"[system]: missing key {key!r}")
    coords = ld.names(sysd["coords"], "system.coords")
    n = len(coords)
    cs = set(coords)
    eta = ld.matrix(sysd["eta"], "system.eta", n, allowed=set())
    g = ld.matrix(sysd["g"], "system.g", n, allowed=cs)
    h = ld.expr(sysd["h"], "system.h", cs)
    f = ld.expr(sysd["f"], "system.f", cs)
    flows = []
    for i, fl in enumerate(sysd.get("flows", [])):
        if not isinstance(fl, dict) or "h" not in fl or "f" not in fl:
            raise ld.error(f"system.flows[{i}]: expected a table with keys h and f", "flows")
        _check_keys(ld, fl, f"system.flows[{i}]", {"h", "f", "hbar", "fbar"})
        flows.append(
            ExtraFlow(
                ld.expr(fl["h"], f"system.flows[{i}].h", cs),
                ld.expr(fl["f"], f"system.flows[{i}].f", cs),
                fl.get("hbar"),
                fl.get("fbar"),
            )
        )
    flat = None
    if "flat" in sysd:
        fd = sysd["flat"]
        if not isinstance(fd, dict) or "coords" not in fd or "g" not in fd:
            raise ld.error("system.flat: expected a table with keys coords and g", "flat")
        hat = fd["coords"]
        if not isinstance(hat, list) or len(hat) != n:
            raise ld.error(f"system.flat.coords: expected {n} expressions", "flat")
        flat = TranslationData(
            tuple(ld.expr(x, f"system.flat.coords[{i}]", cs) for i, x in enumerate(hat)),
            ld.matrix(fd["g"], "system.flat.g", n, allowed=set()),
        )
    dub = None
    if "dubrovin" in sysd:
        dd = sysd["dubrovin"]
        if not isinstance(dd, dict) or "xi" not in dd:
            raise ld.error("system.dubrovin: expected a table with key xi", "dubrovin")
        xi = dd["xi"]
        if not isinstance(xi, list) or len(xi) != n:
            raise ld.error(f"system.dubrovin.xi: expected {n} expressions", "xi")
        c = ld.matrix(dd.get("c", [[0] * n for _ in range(n)]), "system.dubrovin.c", n, allowed=set())
        dub = DubrovinCertificate(tuple(ld.expr(x, f"system.dubrovin.xi[{i}]", cs) for i, x in enumerate(xi)), c)

    transform = None
    vset: set = set()
    if "transform" in data:
        td = data["transform"]
        _check_keys(ld, td, "transform", {"a", "b", "p", "q", "vcoords", "inverse"})
        for key in ("a", "b", "p", "q", "vcoords"):
            if key not in td:
                raise ld.error(f"[transform]: missing key {key!r}")
        consts = {k: ld.rational(td[k], f"transform.{k}") for k in "abpq"}
        vcoords = ld.names(td["vcoords"], "transform.vcoords")
        if len(vcoords) != n:
            raise ld.error(f"transform.vcoords: expected {n} names", "vcoords")
        if set(vcoords) & cs:
            raise ld.error("transform.vcoords must differ from system.coords", "vcoords")
        vset = set(vcoords)
        inverse = None
        if "inverse" in td:
            inv = td["inverse"]
            if not isinstance(inv, dict) or set(inv) != cs:
                raise ld.error("transform.inverse: expected one expression per coordinate", "inverse")
            inverse = {k: ld.expr(v, f"transform.inverse.{k}", vset) for k, v in inv.items()}
        transform = TransformSpec(consts["a"], consts["b"], consts["p"], consts["q"], vcoords, inverse)

    candidates = {}
    if "candidates" in data:
        cd = data["candidates"]
        _check_keys(ld, cd, "candidates", set(ROLES))
        if transform is None:
            raise ld.error("[candidates] requires a [transform] section", "[candidates]")
        candidates = {k: ld.expr(v, f"candidates.{k}", vset) for k, v in cd.items()}
    flows = [
        ExtraFlow(
            fl.h,
            fl.f,
            ld.expr(fl.hbar, f"system.flows[{i}].hbar", vset) if fl.hbar is not None else None,
            ld.expr(fl.fbar, f"system.flows[{i}].fbar", vset) if fl.fbar is not None else None,
        )
        for i, fl in enumerate(flows)
    ]
    if (any(fl.hbar is not None or fl.fbar is not None for fl in flows)) and transform is None:
        raise ld.error("flow potentials require a [transform] section", "hbar")

    zt = {}
    if "zerotest" in data:
        zd = data["zerotest"]
        _check_keys(ld, zd, "zerotest", {"precision", "samples", "seed", "intervals"})
        for key in ("precision", "samples"):
            if key in zd:
                if not isinstance(zd[key], int) or isinstance(zd[key], bool):
                    raise ld.error(f"zerotest.{key}: expected an integer", key)
                zt[key] = zd[key]
        if "seed" in zd:
            try:
                zt["seed"] = parse_seed(zd["seed"])
            except ValueError as exc:
                raise ld.error(f"zerotest.seed: {exc}", "seed") from None
        if "intervals" in zd:
            iv = zd["intervals"]
            if not isinstance(iv, dict):
                raise ld.error("zerotest.intervals: expected a table", "intervals")
            out = {}
            for name, pair in iv.items():
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ld.error(f"zerotest.intervals.{name}: expected [lo, hi]", name)
                lo, hi = (ld.rational(x, f"zerotest.intervals.{name}") for x in pair)
                if not lo < hi:
                    raise ld.error(f"zerotest.intervals.{name}: empty interval", name)
                out[name] = (lo, hi)
            zt["intervals"] = out
    return SystemDefinition(coords, eta, g, h, f, flows, flat, dub, transform, candidates, zt, source)


def load(path) -> SystemDefinition:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise DefinitionError(f"cannot read file: {exc.strerror}", None, str(path)) from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DefinitionError(f"not valid UTF-8 at byte {exc.start}", None, str(path)) from None
    return loads(text, str(path))


def parse_seed(value) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        if value < 0:
            raise ValueError("seed must be non-negative")
        return value
    if isinstance(value, str):
        s = value.lower()
        if s.startswith("0x"):
            s = s[2:]
        if s and all(c in "0123456789abcdef" for c in s):
            return int(s, 16)
    raise ValueError(f"invalid hexadecimal seed {value!r}")
