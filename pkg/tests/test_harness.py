import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from regshift.bounds import BoundReport
from regshift.harness import batch, cli
from regshift.harness.batch import RunReport, SearchParams, evaluate_job, make_instance, run_batch, run_job
from regshift.harness.generate import GenerationError, gen_generic_forms, gen_monomial_ideal, minimal_monomials
from regshift.harness.parse import BOUND_TAGS, parse_checks, parse_input
from regshift.harness.report import emit_report
from regshift.invariants import codim_ideal
from regshift.polyring import ParseError, RingSpec, mono_divides

SQUARE = """\
ring p=32003 vars=x,y,z order=degrevlex
ideal: x^2; x*y; x*z; y^2; y*z; z^2   # (x,y,z)^2
"""

DIRECT_SUM = """\
ring p=32003 vars=x,y,z
summand: x^2; y^2
summand: x; y; z
ann: x^2; y^2
checks: codim1, growth, ses
seed: 4
"""


def write(tmp_path, text, name="job.txt"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run_cli(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_parse_cyclic_job():
    job = parse_input(SQUARE)
    assert job.cyclic and len(job.ideal) == 6
    assert job.ring.var_names == ("x", "y", "z")
    assert job.checks == frozenset(BOUND_TAGS)


def test_parse_direct_sum_roundtrip():
    job = parse_input(DIRECT_SUM)
    assert not job.cyclic and len(job.summands) == 2
    assert job.checks == {"codim1", "growth", "ses"}
    again = parse_input(job.to_text())
    assert again.to_text() == job.to_text()
    assert again.summands == job.summands and again.annihilator == job.annihilator


@pytest.mark.parametrize("text,line,col", [
    ("ring p=32003 vars=x,y\nideal: x^2; x*q\n", 2, 15),
    ("ring p=32000 vars=x,y\nideal: x\n", 1, 6),
    ("ideal: x\n", 1, 1),
    ("ring vars=x,y\nideal: x^2 + y\n", 2, 8),
    ("ring vars=x,y\nideal: x\nbogus: 1\n", 3, 1),
    ("ring vars=x,y\nideal: x\nchecks: nope\n", 3, 8),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_input(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_parse_checks_aliases():
    assert parse_checks("conj") == {"ehu1", "ehu2"}
    assert parse_checks("all") == frozenset(BOUND_TAGS)
    with pytest.raises(ValueError):
        parse_checks("regthm, bogus")


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 6), st.integers(0, 10 ** 6))
def test_monomial_generator_is_seeded_and_minimal(n, d, g, seed):
    a = gen_monomial_ideal(n, d, g, seed)
    assert a == gen_monomial_ideal(n, d, g, seed)
    monos = [f.lead_monomial() for f in a]
    assert minimal_monomials(monos) == monos
    assert all(1 <= sum(m) <= d for m in monos)
    assert not any(mono_divides(x, y) for x in monos for y in monos if x != y)


@settings(max_examples=15)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(0, 1000))
def test_generic_forms_are_complete_intersections(degrees, seed):
    ring = RingSpec.make("x,y,z", 32003)
    forms = gen_generic_forms(3, degrees, seed, ring)
    assert [f.degree for f in forms] == degrees
    assert codim_ideal(forms, ring) == len(degrees)


def test_too_many_forms_rejected():
    with pytest.raises(GenerationError):
        gen_generic_forms(2, [1, 1, 1], 0)


def test_evaluate_record_contents():
    rec = evaluate_job(parse_input(SQUARE))
    assert rec["status"] == "ok"
    assert rec["profile"]["T"] == [0, 2, 3, 4]
    assert rec["invariants"]["is_cm"] is True
    names = {b["bound"] for b in rec["bounds"]}
    assert {"structural", "oracle", "regthm", "maincor", "ehu1", "ehu2"} <= names
    assert all(b["status"] in ("pass", "skipped", "probe") for b in rec["bounds"])
    regthm = next(b for b in rec["bounds"] if b["bound"] == "regthm")
    assert regthm["slack"] == 0
    json.dumps(rec)


def test_user_annihilator_on_direct_sum():
    rec = evaluate_job(parse_input(DIRECT_SUM))
    assert rec["ann_contained"] is True
    assert rec["profile"]["T"] == [0, 2, 4, 3]
    assert {b["bound"] for b in rec["bounds"]} == {"codim1", "codim1_reg", "strict_growth", "ses"}


def test_annihilator_outside_is_skipped():
    text = DIRECT_SUM.replace("ann: x^2; y^2", "ann: z").replace("checks: codim1, growth, ses", "checks: regthm")
    rec = evaluate_job(parse_input(text))
    assert rec["ann_contained"] is False
    assert [b["status"] for b in rec["bounds"]] == ["skipped"]


def test_ci_strategy_uses_regular_sequence():
    rec = evaluate_job(parse_input(SQUARE), checks={"regthm"}, j_strategy="ci:2")
    assert rec["J_source"] == "ci:2" and len(rec["J"]) == 3
    assert rec["J_profile"]["T"] == [0, 2, 4, 6]


def test_unit_ideal_is_zero_module():
    rec = evaluate_job(parse_input("ring vars=x,y\nideal: 1\n"))
    assert rec["status"] == "zero_module" and rec["bounds"] == []


def test_timeout_becomes_record():
    job = parse_input("ring vars=a,b,c,d\nideal: a^3+b^3+c^3; a*b*c+d^3; a^2*d+b^2*c+c*d^2; b^3+a*c*d\n")
    rec = run_job(job, timeout=1e-4)
    assert rec["status"] == "timeout"


def test_memory_budget_becomes_record(tmp_path):
    job = parse_input(SQUARE)
    rec = run_job(job, memory=1)
    assert rec["status"] == "memory"
    assert run_cli("check", write(tmp_path, SQUARE), "--memory", "1")[0] == 1
    assert run_job(job, memory=10 ** 6)["status"] == "ok"


def test_batch_is_deterministic_and_parallel_safe():
    params = SearchParams(count=12, seed=5)
    a = emit_report(run_batch(params), "json")
    b = emit_report(run_batch(params), "json")
    params.jobs = 2
    c = emit_report(run_batch(params), "json")
    assert a == b == c


def test_instances_depend_on_seed():
    p = SearchParams(count=3, seed=1)
    q = SearchParams(count=3, seed=2)
    assert [make_instance(p, i).to_text() for i in range(3)] != [make_instance(q, i).to_text() for i in range(3)]


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report(RunReport([], {}), "xml")


def test_cli_betti_and_resolve(tmp_path):
    path = write(tmp_path, SQUARE)
    code, out = run_cli("betti", path, "--oracle")
    assert code == 0
    assert "total: 1 6 8 3" in out and "oracle: agrees" in out
    code, out = run_cli("resolve", path, "--format", "json")
    assert code == 0
    assert json.loads(out)["degrees"] == [[0], [2] * 6, [3] * 8, [4] * 3]


def test_cli_check_table(tmp_path):
    code, out = run_cli("check", write(tmp_path, SQUARE), "--bounds=all")
    assert code == 0
    assert "regthm" in out and "0 VIOLATION" in out


def test_cli_input_errors(tmp_path):
    assert run_cli("check", str(tmp_path / "missing.txt"))[0] == 1
    assert run_cli("check", write(tmp_path, "ring vars=x\nideal: x +\n"))[0] == 1
    assert run_cli("search", "--char", "4")[0] == 1
    assert run_cli("search", "--j=bogus")[0] == 1


def test_cli_violation_exit_code(tmp_path, monkeypatch):
    def broken(prof, codim):
        return BoundReport("strict_growth", True, lhs=1, rhs=0, asserted=True)
    monkeypatch.setattr(batch, "check_strict_growth", broken)
    code, out = run_cli("check", write(tmp_path, SQUARE), "--bounds=growth")
    assert code == 2 and "1 VIOLATION" in out


def test_cli_candidate_exit_code(tmp_path, monkeypatch):
    def odd(prof, dmd):
        return BoundReport("ehu1", True, lhs=9, rhs=0, probe=True)
    monkeypatch.setattr(batch, "check_ehu_thm1", odd)
    code, out = run_cli("check", write(tmp_path, SQUARE), "--bounds=ehu1")
    assert code == 3 and "1 counterexample-candidate" in out
    # candidates are rechecked at other characteristics and reported
    assert "recheck char 2" in out


def test_cli_search_json_is_stable():
    argv = ("search", "--vars", "3", "--maxdeg", "3", "--gens", "4", "--count", "8", "--seed", "9", "--format", "json")
    c1, o1 = run_cli(*argv)
    c2, o2 = run_cli(*argv)
    assert c1 == c2 == 0 and o1 == o2
    rep = json.loads(o1)
    assert rep["summary"]["instances"]["attempted"] == 8
    # no wall-clock data in machine reports
    for inst in rep["instances"]:
        assert not any("time" in k or "elapsed" in k for k in inst)
