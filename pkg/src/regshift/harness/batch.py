"""Per-instance evaluation and seeded batch runs."""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..budget import BudgetExceeded, MemoryBudgetExceeded, memory_budget, time_budget
from ..bounds import (
    CANDIDATE,
    PASS,
    PROBE,
    SKIPPED,
    VIOLATION,
    BoundReport,
    bound_cm_regularity,
    bound_common_degree,
    bound_main,
    bound_maincor,
    bound_regthm,
    check_codim1,
    check_codim1_reg,
    check_ehu_thm1,
    check_strict_growth,
    ehu2_all,
)
from ..invariants import (
    InvariantReport,
    ann_contains,
    codim_by_lead_terms,
    compute_invariants,
    find_regular_sequence,
    koszul_profile,
)
from ..polyring import DEFAULT_CHARACTERISTIC
from ..resolution import (
    ModulePresentation,
    betti,
    compose_is_zero,
    entries_homogeneous,
    has_unit_entries,
    hilbert_check,
    koszul_betti_oracle,
    resolve_minimal,
    ses_shift_check,
    shifts,
)
from .generate import default_ring, gen_generic_forms, gen_monomial_ideal, instance_seed
from .parse import BOUND_TAGS, JobSpec

log = logging.getLogger(__name__)

STATUSES = (PASS, VIOLATION, SKIPPED, PROBE, CANDIDATE)
RECHECK_CHARS = (2, 101)


def parse_j_strategy(text: str):
    """'self', 'ci' (degree T_1) or 'ci:d'."""
    if text == "self":
        return ("self", None)
    if text == "ci":
        return ("ci", None)
    if text.startswith("ci:") and text[3:].isdigit() and int(text[3:]) >= 1:
        return ("ci", int(text[3:]))
    raise ValueError(f"bad J strategy {text!r}; expected self, ci or ci:d")


def _structural(m: ModulePresentation, res, b, prof, inv, cap) -> BoundReport:
    n = m.ring.num_vars
    failures = []
    if not compose_is_zero(res):
        failures.append("d o d != 0")
    if has_unit_entries(res):
        failures.append("unit entry in minimal resolution")
    if not entries_homogeneous(res):
        failures.append("inhomogeneous matrix entry")
    if prof.pd > n:
        failures.append("pd > n")
    if inv.depth + inv.pd != n:
        failures.append("depth + pd != n")
    if inv.pd < inv.codim:
        failures.append("pd < codim")
    if inv.is_cm and prof.reg != prof.T(inv.codim) - inv.codim:
        failures.append("CM but reg != T_c - c")
    if m.is_cyclic and codim_by_lead_terms(m) != inv.codim:
        failures.append("codim via Fitting ideal disagrees with lead-term codim")
    bad = hilbert_check(m, b, cap)
    if bad:
        failures.append(f"Hilbert function mismatch in degrees {bad}")
    return BoundReport("structural", True, lhs=len(failures), rhs=0, asserted=True,
                       reasons=failures, params={"hilbert_cap": cap})


def _oracle(m, b, cap) -> BoundReport:
    ob = koszul_betti_oracle(m, cap)
    keys = set(ob.entries) | set(b.entries)
    diff = sorted(k for k in keys if ob[k] != b[k])
    return BoundReport("oracle", True, lhs=len(diff), rhs=0, asserted=True,
                       reasons=[f"beta_{i},{j}: resolution {b[(i, j)]}, oracle {ob[(i, j)]}" for i, j in diff],
                       params={"cap": cap})


def _ses_check(m) -> BoundReport:
    rep = ses_shift_check(m, strict=False)
    return BoundReport("ses", True, lhs=len(rep["failures"]), rhs=0, asserted=True,
                       reasons=[f"{f['inequality']} at i={f['i']}: {f['lhs']} > {f['rhs']}" for f in rep["failures"]],
                       params={"N_T": rep["N"]["T"]})


def _taylor_cap(job: JobSpec) -> int:
    return max((sum(g.degree for g in gens) for gens in job.summands), default=0)


def evaluate_job(job: JobSpec, checks=None, j_strategy: str = "self", index: int = 0,
                 recheck_chars=RECHECK_CHARS) -> dict:
    """Resolve one instance and run the requested checks; returns a record."""
    checks = frozenset(job.checks if checks is None else checks)
    kind, jdeg = parse_j_strategy(j_strategy)
    ring = job.ring
    n = ring.num_vars
    m = job.presentation()
    rec = {
        "index": index,
        "seed": job.seed,
        "characteristic": ring.p,
        "recreation": job.to_text(),
        "j_strategy": j_strategy,
    }
    res = resolve_minimal(m)
    b = betti(res)
    prof = shifts(b)
    rec["betti"] = b.records()
    rec["profile"] = prof.to_dict()
    if prof.is_zero:
        rec["status"] = "zero_module"
        rec["bounds"] = []
        return rec
    inv = compute_invariants(m, prof)
    rec["invariants"] = inv.to_dict()
    reports: list[BoundReport] = []
    cap = job.degree_cap if job.degree_cap is not None else _taylor_cap(job)

    if "structural" in checks:
        reports.append(_structural(m, res, b, prof, inv, cap))
    if "oracle" in checks and m.is_monomial:
        reports.append(_oracle(m, b, cap))
    if "growth" in checks:
        reports.append(check_strict_growth(prof, inv.codim))
    if "ses" in checks:
        reports.append(_ses_check(m))

    ideal = job.ideal if job.cyclic else None
    # annihilating ideal J
    J = pJ = invJ = None
    ann_ok = False
    if job.annihilator is not None:
        J = [f for f in job.annihilator if f]
        ann_ok = ann_contains(J, m)
        rec["J_source"] = "user"
    elif ideal is not None and kind == "self":
        J, ann_ok = ideal, True
        pJ, invJ = prof, inv
        rec["J_source"] = "self"
    elif ideal is not None and kind == "ci":
        d = jdeg if jdeg is not None else int(prof.T(1))
        seq = find_regular_sequence(ideal, d, inv.codim, seed=job.seed)
        if seq is not None:
            J, ann_ok = seq, True
            # a verified regular sequence is resolved by its Koszul complex
            pJ = koszul_profile([d] * len(seq))
            invJ = InvariantReport(n - len(seq), len(seq), n - len(seq), len(seq), True, ring.p)
        rec["J_source"] = f"ci:{d}" if seq is not None else f"ci:{d} (not found)"
    if J is not None and pJ is None:
        mJ = ModulePresentation.cyclic(ring, J)
        pJ = shifts(betti(resolve_minimal(mJ)))
        invJ = compute_invariants(mJ, pJ)
    if J is not None:
        rec["J"] = [str(f) for f in J]
        rec["J_profile"] = pJ.to_dict()
        rec["J_invariants"] = invJ.to_dict()
        rec["ann_contained"] = ann_ok

    if "codim1" in checks:
        d = None
        if ideal is not None:
            d = int(prof.t(1)) if prof.pd >= 1 else None
        elif J is not None and ann_ok and J:
            d = min(f.degree for f in J)
        elif all(job.summands):
            # a product of one generator per summand annihilates the direct sum
            d = sum(min(g.degree for g in gens) for gens in job.summands)
        if d is None:
            reports.append(BoundReport("codim1", False, reasons=["no annihilating form known"]))
        else:
            reports.append(check_codim1(prof, d))
            reports.append(check_codim1_reg(prof, d))
    if J is not None and not invJ.codim > n:
        c = invJ.codim
        if "regthm" in checks:
            reports.append(bound_regthm(prof, pJ, c, ann_ok))
        if "main" in checks:
            reports.append(bound_main(prof, pJ, c, ann_ok))
        if "cmreg" in checks:
            reports.append(bound_cm_regularity(prof, pJ, c, inv.codim, ann_ok))
        if "ehu2" in checks:
            reports.extend(ehu2_all(prof, pJ, inv, invJ, ann_ok))
    if ideal is not None:
        c = inv.codim
        if "maincor" in checks:
            reports.append(bound_maincor(prof, c))
        if "common" in checks and prof.pd >= 1:
            d = int(prof.T(1))
            seq = find_regular_sequence(ideal, d, c, seed=job.seed)
            reports.append(bound_common_degree(prof, c, d, found=seq is not None))
        if "ehu1" in checks:
            reports.append(check_ehu_thm1(prof, inv.dim_minus_depth))

    rec["bounds"] = [r.to_dict() for r in reports]
    rec["status"] = "ok"
    cands = [r for r in reports if r.status == CANDIDATE]
    if cands and recheck_chars:
        rec["rechecks"] = _recheck(job, cands, j_strategy, index, recheck_chars)
    return rec


def _recheck(job, cands, j_strategy, index, chars) -> list:
    out = []
    for p in chars:
        if p == job.ring.p:
            continue
        try:
            other = evaluate_job(job.with_characteristic(p), checks={"ehu1", "ehu2"},
                                 j_strategy=j_strategy, index=index, recheck_chars=())
        except Exception as e:  # recorded, never fatal
            out.append({"char": p, "error": repr(e)})
            continue
        found = {(r["bound"], tuple(sorted(r["params"].items()))): r for r in other.get("bounds", [])}
        for c in cands:
            r = found.get((c.bound_name, tuple(sorted(c.params.items()))))
            out.append({"char": p, "bound": c.bound_name, "params": c.params,
                        "status": r["status"] if r else "absent",
                        "lhs": r["lhs"] if r else None, "rhs": r["rhs"] if r else None})
    return out


def run_job(job: JobSpec, checks=None, j_strategy="self", index=0, timeout=None,
            recheck_chars=RECHECK_CHARS, memory=None) -> dict:
    """evaluate_job under time/memory budgets; failures become records."""
    try:
        with time_budget(timeout), memory_budget(memory):
            return evaluate_job(job, checks, j_strategy, index, recheck_chars)
    except MemoryBudgetExceeded:
        status, err = "memory", f"exceeded {memory} MB"
    except BudgetExceeded:
        status, err = "timeout", f"exceeded {timeout}s"
    except Exception as e:
        log.exception("instance %d failed", index)
        status, err = "error", f"{type(e).__name__}: {e}"
    return {"index": index, "seed": job.seed, "characteristic": job.ring.p,
            "recreation": job.to_text(), "j_strategy": j_strategy,
            "status": status, "error": err, "bounds": []}


# -- batches ----------------------------------------------------------------------------

@dataclass
class SearchParams:
    count: int = 200
    seed: int = 0
    nvars: int | None = None          # None: draw n from {2, 3, 4}
    maxdeg: int = 4
    gens: int = 5
    characteristic: int = DEFAULT_CHARACTERISTIC
    order: str = "degrevlex"
    j_strategy: str = "self"
    family: str = "monomial"          # or "ci": generic complete intersections
    checks: frozenset = field(default_factory=lambda: frozenset(BOUND_TAGS))
    timeout: float | None = None
    memory: float | None = None       # MB of resident memory per instance
    jobs: int = 1
    recheck_chars: tuple = RECHECK_CHARS

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["checks"] = sorted(self.checks)
        d["recheck_chars"] = list(self.recheck_chars)
        d.pop("jobs")
        return d


def make_instance(params: SearchParams, index: int) -> JobSpec:
    s = instance_seed(params.seed, index)
    rng = random.Random(s)
    n = params.nvars or rng.choice((2, 3, 4))
    ring = default_ring(n, params.characteristic, params.order)
    if params.family == "monomial":
        gens = gen_monomial_ideal(n, params.maxdeg, params.gens, rng.randrange(2 ** 32), ring)
    elif params.family == "ci":
        c = rng.randint(1, min(3, n))
        degrees = [rng.randint(1, params.maxdeg) for _ in range(c)]
        gens = gen_generic_forms(n, degrees, rng.randrange(2 ** 32), ring)
    else:
        raise ValueError(f"unknown instance family {params.family!r}")
    return JobSpec(ring, [gens], None, params.checks, seed=s, cyclic=True)


def _run_index(args):
    params, index = args
    try:
        job = make_instance(params, index)
    except Exception as e:
        return {"index": index, "status": "error", "error": f"generation: {e}", "bounds": []}
    return run_job(job, params.checks, params.j_strategy, index, params.timeout, params.recheck_chars,
                   params.memory)


@dataclass
class RunReport:
    instances: list
    environment: dict
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.summary:
            self.summary = summarize(self.instances)

    def to_dict(self) -> dict:
        return {"environment": self.environment, "summary": self.summary, "instances": self.instances}

    @property
    def exit_code(self) -> int:
        if self.summary["bounds"][VIOLATION]:
            return 2
        if self.summary["bounds"][CANDIDATE]:
            return 3
        return 0


def summarize(instances) -> dict:
    counts = {s: 0 for s in STATUSES}
    inst = {"attempted": len(instances), "ok": 0, "zero_module": 0, "error": 0, "timeout": 0, "memory": 0}
    for rec in instances:
        inst[rec["status"]] = inst.get(rec["status"], 0) + 1
        for b in rec.get("bounds", []):
            counts[b["status"]] += 1
    return {"instances": inst, "bounds": counts}


def environment(params: SearchParams | None = None, ring=None) -> dict:
    from .. import __version__ as version
    env = {"version": version}
    if params is not None:
        env.update(characteristic=params.characteristic, order=params.order, params=params.to_dict())
    elif ring is not None:
        env.update(characteristic=ring.p, order=ring.order)
    return env


def run_batch(params: SearchParams) -> RunReport:
    tasks = [(params, i) for i in range(params.count)]
    if params.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=params.jobs) as ex:
            records = list(ex.map(_run_index, tasks, chunksize=4))
    else:
        records = [_run_index(t) for t in tasks]
    records.sort(key=lambda r: r["index"])
    return RunReport(records, environment(params))

