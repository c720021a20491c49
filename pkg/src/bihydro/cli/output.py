"""Report assembly and rendering (text and JSON)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..report import FAIL, INCONCLUSIVE, PASS, SKIPPED, Check, witness_strings

WITNESS_DIGITS = 32


@dataclass
class Report:
    """Ordered top-level checks plus rendered objects."""

    checks: list = field(default_factory=list)
    objects: list = field(default_factory=list)  # [(label, text)]
    seed: Optional[int] = None
    precision: Optional[int] = None

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return FAIL
        if INCONCLUSIVE in statuses:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self) -> int:
        return 0 if self.status == PASS else 1


def _check_dict(c: Check, timing: bool) -> dict:
    d = {
        "name": c.name,
        "status": c.status,
        "identity": c.identity,
        "millis": round(c.millis, 3) if timing else None,
    }
    if c.witness:
        d["witness"] = witness_strings(c.witness, WITNESS_DIGITS)
    if c.detail and c.status != PASS:
        d["detail"] = c.detail
    if c.parts:
        d["parts"] = [_check_dict(p, timing) for p in c.parts]
    return d


def to_json(report: Report, timing: bool = False) -> bytes:
    doc = {"checks": [_check_dict(c, timing) for c in report.checks], "status": report.status}
    if report.seed is not None:
        doc["seed"] = f"{report.seed:#x}"
    if report.precision is not None:
        doc["precision"] = report.precision
    if report.objects:
        doc["objects"] = {label: text for label, text in report.objects}
    return (json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")


_MARK = {PASS: "PASS", FAIL: "FAIL", INCONCLUSIVE: "????", SKIPPED: "skip"}


def _text_lines(c: Check, depth: int, timing: bool, verbose: bool) -> list:
    pad = "  " * depth
    line = f"{pad}[{_MARK.get(c.status, c.status)}] {c.name}"
    if timing:
        line += f"  ({c.millis:.1f} ms)"
    out = [line]
    if c.status in (FAIL, INCONCLUSIVE, SKIPPED) and not c.parts:
        if c.identity:
            out.append(f"{pad}       identity: {c.identity}")
        if c.detail:
            out.append(f"{pad}       {c.detail}")
        if c.witness:
            w = witness_strings(c.witness, WITNESS_DIGITS)
            out.append(f"{pad}       witness: " + ", ".join(f"{k} = {v}" for k, v in w.items()))
    if c.parts and (verbose or c.status in (FAIL, INCONCLUSIVE)):
        for p in c.parts:
            out.extend(_text_lines(p, depth + 1, timing, verbose))
    return out


def to_text(report: Report, timing: bool = False, verbose: bool = False) -> bytes:
    lines = []
    if report.objects:
        width = max(len(label) for label, _ in report.objects)
        for label, text in report.objects:
            lines.append(f"{label.ljust(width)} = {text}")
        lines.append("")
    for c in report.checks:
        lines.extend(_text_lines(c, 0, timing, verbose))
    cfg = []
    if report.seed is not None:
        cfg.append(f"seed {report.seed:#x}")
    if report.precision is not None:
        cfg.append(f"{report.precision}-bit")
    tail = f" ({', '.join(cfg)})" if cfg else ""
    lines.append(f"status: {report.status}{tail}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(report: Report, fmt: str = "text", timing: bool = False, verbose: bool = False) -> bytes:
    if fmt == "json":
        return to_json(report, timing)
    if fmt == "text":
        return to_text(report, timing, verbose)
    raise ValueError(f"unknown format {fmt!r}")
