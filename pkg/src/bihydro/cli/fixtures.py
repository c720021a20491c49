"""Built-in example systems, generated as definition-file text.

Both examples use the transformation ``(a, b, p, q) = (0, 1, -1, 0)``, which
swaps the roles of ``x`` and ``t``.
"""

from __future__ import annotations

from fractions import Fraction

from ..symkern import SymMatrix, parse, render, simplify
from .definition import SystemDefinition, loads


def _q(x) -> str:
    return f'"{x}"'


def _frac(x: Fraction) -> str:
    return render(simplify(parse(str(Fraction(x)))))


def kdv_text(m: int, k: int = 1) -> str:
    """Dispersionless KdV: ``u_t = (m+1) u^m u_x`` with commuting flow of order k."""
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive integers")
    r = lambda a, b: _frac(Fraction(a, b))  # noqa: E731
    h = f"u^{m + 2}/{m + 2}"
    f = f"{r(2, 2 * m + 1)}*u^{m + 1}"
    h1 = f"u^{k + 2}/{k + 2}"
    f1 = f"{r(2, 2 * k + 1)}*u^{k + 1}"
    hbar = f"-{r(m + 1, m + 2)}*v^({r(m + 2, m + 1)})"
    h1bar = f"{r(m + 1, m + k + 2)}*v^({r(k + m + 2, m + 1)})"
    f1bar = f"{r(2 * (k + 1) * (m + 1), (2 * k + 1) * (m + k + 1))}*v^({r(m + k + 1, m + 1)})"
    return f"""\
# dispersionless KdV, m = {m}, commuting flow k = {k}
[system]
coords = ["u"]
eta = [["1"]]
g = [["u"]]
h = {_q(h)}
f = {_q(f)}
flows = [{{h = {_q(h1)}, f = {_q(f1)}}}]
flat = {{coords = ["2*sqrt(u)"], g = [["1"]]}}
dubrovin = {{xi = ["u^2/4"], c = [["0"]]}}

[transform]
a = "0"
b = "1"
p = "-1"
q = "0"
vcoords = ["v"]
inverse = {{u = "v^(1/{m + 1})"}}

[candidates]
hbar = {_q(hbar)}
fbar = "-2*v"
h1bar = {_q(h1bar)}
f1bar = {_q(f1bar)}
"""


TODA_TEXT = """\
# dispersionless Toda: w_t = (e^u)_x, u_t = w_x
[system]
coords = ["w", "u"]
eta = [["0", "1"], ["1", "0"]]
g = [["2*exp(u)", "w"], ["w", "2"]]
h = "exp(u) + w^2/2"
f = "w"
flows = [{h = "exp(u)*w + w^3/6", f = "(exp(u) + w^2/2)/2"}]
dubrovin = {xi = ["exp(u) + w^2/2", "w"], c = [["0", "0"], ["0", "0"]]}

[transform]
a = "0"
b = "1"
p = "-1"
q = "0"
vcoords = ["wb", "ub"]
inverse = {w = "ub", u = "log(wb)"}

[candidates]
hbar = "-wb*log(wb) + wb - ub^2/2"
fbar = "-ub*log(wb)/2 + ub - sqrt(-4*wb + ub^2)*ArcTanh(ub/sqrt(-4*wb + ub^2))"
h1bar = "(ub^2*wb + wb^2)/2"
f1bar = "ub*wb/2"

[zerotest]
# keep ub^2 - 4 wb > 0 so the arctanh form is real; u = log(wb), w = ub
intervals = {wb = ["1/10", "3/10"], ub = ["3/2", "2"], u = ["-9/4", "-5/4"], w = ["3/2", "2"]}
"""


def kdv(m: int, k: int = 1) -> SystemDefinition:
    return loads(kdv_text(m, k), f"<example kdv m={m} k={k}>")


def toda() -> SystemDefinition:
    return loads(TODA_TEXT, "<example toda>")


# closed forms printed in the examples, as functions of the new variables


def kdv_paper_forms(m: int, k: int) -> dict:
    r = lambda a, b: _frac(Fraction(a, b))  # noqa: E731
    return {
        "v": [f"u^{m + 1}"],
        "s-flow": [[f"-{r(1, m + 1)}*v^(-{r(m, m + 1)})"]],
        "t1-flow": [[f"{r(k + 1, m + 1)}*v^({r(k - m, m + 1)})"]],
        "g_bar": [[f"v^({r(1, m + 1)})"]],
        "Gamma_bar": [[[f"{r(1, 2 * (m + 1))}*v^(-{r(m, m + 1)})"]]],
        "h_bar": f"-{r(m + 1, m + 2)}*v^({r(m + 2, m + 1)})",
    }


TODA_PAPER_FORMS = {
    "V": [["0", "exp(u)"], ["1", "0"]],
    "A": [["exp(u)", "exp(u)*w"], ["w", "exp(u)"]],
    "v": ["exp(u)", "w"],
    "s-flow": [["0", "-1"], ["-1/wb", "0"]],
    "t1-flow": [["ub", "wb"], ["1", "ub"]],
    "g_bar": [["2*wb", "ub"], ["ub", "2"]],
    # J_bar_2 = g_bar^{ij} d_y + Gamma_bar^{ij}_k v^k_y
    "Gamma_bar": [[["1", "0"], ["0", "0"]], [["0", "1"], ["0", "0"]]],
    "h_bar": "-wb*log(wb) + wb - ub^2/2",
}


def matrix(rows) -> SymMatrix:
    return SymMatrix([[parse(x) for x in r] for r in rows])
