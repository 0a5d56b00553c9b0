"""Human-readable and JSON renderings of run reports."""

from __future__ import annotations

import json

from ..resolution import BettiTable, GradedResolution
from .batch import RunReport

FORMATS = ("table", "json")


def _check_format(fmt: str):
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def bound_table(bounds: list) -> str:
    if not bounds:
        return "  (no bound reports)"
    rows = [("bound", "params", "status", "lhs", "rhs", "slack", "note")]
    for b in bounds:
        params = ",".join(f"{k}={v}" for k, v in sorted(b["params"].items()))
        note = "; ".join(b["reasons"])
        rows.append((b["bound"], params, b["status"],
                     "" if b["lhs"] is None else str(b["lhs"]),
                     "" if b["rhs"] is None else str(b["rhs"]),
                     "" if b["slack"] is None else str(b["slack"]), note))
    widths = [max(len(r[i]) for r in rows) for i in range(6)]
    out = []
    for r in rows:
        line = "  " + "  ".join(c.ljust(w) for c, w in zip(r[:6], widths))
        out.append((line + "  " + r[6]) if r[6] else line.rstrip())
    return "\n".join(out)


def instance_text(rec: dict) -> str:
    lines = [f"instance {rec['index']}  (seed {rec.get('seed')}, char {rec.get('characteristic')}): {rec['status']}"]
    lines += ["  " + ln for ln in rec.get("recreation", "").strip().splitlines()]
    if rec.get("error"):
        lines.append(f"  error: {rec['error']}")
    if "betti" in rec:
        lines += ["  " + ln for ln in BettiTable.from_records(rec["betti"]).render().splitlines()]
    if "profile" in rec:
        pr = rec["profile"]
        lines.append(f"  T = {pr['T']}  t = {pr['t']}  pd = {pr['pd']}  reg = {pr['reg']}")
    if "invariants" in rec:
        iv = rec["invariants"]
        lines.append("  dim {dim}  codim {codim}  depth {depth}  CM {is_cm}".format(**iv))
    if "J" in rec:
        lines.append(f"  J ({rec['J_source']}) = ({', '.join(rec['J'])}); T(S/J) = {rec['J_profile']['T']};"
                     f" J in Ann(M): {rec['ann_contained']}")
    if rec.get("bounds"):
        lines.append(bound_table(rec["bounds"]))
    for r in rec.get("rechecks", []):
        lines.append(f"  recheck char {r['char']}: {r}")
    return "\n".join(lines)


def summary_text(summary: dict) -> str:
    inst = summary["instances"]
    b = summary["bounds"]
    return (f"instances: {inst['attempted']} attempted, {inst['ok']} ok, {inst['zero_module']} zero module, "
            f"{inst['error']} error, {inst['timeout']} timeout, {inst['memory']} over memory\n"
            f"bounds: {b['pass']} asserted-pass, {b['violation']} VIOLATION, {b['skipped']} hypothesis-skipped, "
            f"{b['probe']} conjecture-probe, {b['candidate']} counterexample-candidate")


def emit_report(report: RunReport, fmt: str = "table", verbose: bool = False) -> str:
    _check_format(fmt)
    if fmt == "json":
        return to_json(report.to_dict())
    env = report.environment
    parts = [f"regshift {env.get('version')}  char {env.get('characteristic')}  order {env.get('order')}"]
    for rec in report.instances:
        flagged = rec["status"] != "ok" or any(b["status"] in ("violation", "candidate") for b in rec["bounds"])
        if verbose or flagged or len(report.instances) == 1:
            parts.append(instance_text(rec))
    parts.append(summary_text(report.summary))
    return "\n\n".join(parts) + "\n"


def emit_resolution(res: GradedResolution, fmt: str = "table") -> str:
    _check_format(fmt)
    if fmt == "json":
        return to_json({
            "characteristic": res.ring.p,
            "vars": list(res.ring.var_names),
            "degrees": [list(d) for d in res.degrees],
            "maps": [[[str(f) for f in row] for row in res.matrix(i)] for i in range(1, res.length + 1)],
        })
    lines = ["ranks: " + " <-- ".join(f"S^{len(d)}" for d in res.degrees)]
    for i, d in enumerate(res.degrees):
        lines.append(f"F_{i} twists: {list(d)}")
    for i in range(1, res.length + 1):
        lines.append(f"d_{i}:")
        for row in res.matrix(i):
            lines.append("  [ " + ", ".join(str(f) for f in row) + " ]")
    return "\n".join(lines) + "\n"


def emit_betti(table: BettiTable, fmt: str = "table", extra: dict | None = None) -> str:
    _check_format(fmt)
    if fmt == "json":
        payload = {"betti": table.records()}
        payload.update(extra or {})
        return to_json(payload)
    return table.render() + "\n"
