"""Shift and regularity inequalities evaluated on computed shift profiles.

Proved statements produce *asserted* reports: a negative slack is a bug in
the engine.  Open statements produce *probe* reports that only collect
counterexample candidates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .resolution import ShiftProfile


class BoundsError(ValueError):
    pass


# -- weight vectors --------------------------------------------------------------

@dataclass(frozen=True, order=True)
class WeightVector:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if any(a < 0 for a in self.entries):
            raise BoundsError(f"negative entry in {self.entries}")

    @property
    def weight(self) -> int:
        return weight_norm(self)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def weight_norm(a) -> int:
    """sum_i a_i * (i + 1), positions counted from 1."""
    return sum(x * (i + 2) for i, x in enumerate(a))


def enumerate_weights(c: int, cap: int) -> list[WeightVector]:
    """All a in N^c with weight at most ``cap``, in lexicographic order."""
    if c < 1 or cap < 0:
        raise BoundsError("need c >= 1 and cap >= 0")
    out = []

    def rec(prefix, budget_left):
        i = len(prefix)
        if i == c:
            out.append(WeightVector(tuple(prefix)))
            return
        w = i + 2
        for a in range(budget_left // w + 1):
            rec(prefix + [a], budget_left - a * w)

    rec([], cap)
    return out


# -- reports --------------------------------------------------------------------------

PASS, VIOLATION, SKIPPED, PROBE, CANDIDATE = "pass", "violation", "skipped", "probe", "candidate"


@dataclass
class BoundReport:
    bound_name: str
    hypotheses_met: bool
    lhs: int | None = None
    rhs: int | None = None
    asserted: bool = False
    probe: bool = False
    reasons: list = field(default_factory=list)
    witness: dict | None = None
    params: dict = field(default_factory=dict)

    @property
    def slack(self):
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs

    @property
    def status(self) -> str:
        s = self.slack
        if self.asserted and s is not None:
            return PASS if s >= 0 else VIOLATION
        if self.probe and s is not None:
            return PROBE if s >= 0 else CANDIDATE
        return SKIPPED

    def to_dict(self) -> dict:
        return {
            "bound": self.bound_name,
            "status": self.status,
            "hypotheses_met": self.hypotheses_met,
            "reasons": list(self.reasons),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "witness": self.witness,
            "params": dict(self.params),
        }


def _skip(name, reasons, **params) -> BoundReport:
    return BoundReport(name, False, reasons=list(reasons), params=params)


def _as_int(x):
    return None if x is None else int(x)


# -- weighted shift bounds from an annihilating CM ideal --------------------------------------

def regthm_max(pM: ShiftProfile, pJ: ShiftProfile, c: int, cap_shift: int = 0):
    """max over 0 <= i <= p-c and |a| <= p-c-i (+cap_shift) of
    T_i(M) + sum_j a_j T_j(S/J), with the (smallest i, lex-smallest a) witness."""
    p = pM.pd
    TJ = [pJ.T(j) for j in range(1, c + 1)]
    best, wit = None, None
    for i in range(0, p - c + 1):
        for a in enumerate_weights(c, p - c - i + cap_shift):
            val = pM.T(i) + sum(x * t for x, t in zip(a, TJ))
            if best is None or val > best:
                best, wit = val, (i, a)
    return best, wit


def _regthm_hypotheses(pM, pJ, c, ann_contained, need_t1=True):
    reasons = []
    if pM.is_zero:
        reasons.append("M is the zero module")
    if not ann_contained:
        reasons.append("J is not contained in Ann(M)")
    if pJ.is_zero or pJ.pd != c:
        reasons.append(f"S/J is not Cohen-Macaulay of codim {c} (pd(S/J) = {pJ.pd})")
    if c < 1:
        reasons.append("codim(J) = 0")
    if need_t1 and not reasons and pJ.T(1) < 2:
        reasons.append("T_1(S/J) < 2 (linear complete intersection)")
    if not reasons and pM.pd < c:
        raise BoundsError(f"malformed profiles: pd(M) = {pM.pd} < codim(J) = {c}")
    return reasons


def bound_regthm(pM: ShiftProfile, pJ: ShiftProfile, c: int, ann_contained: bool = True) -> BoundReport:
    """reg(M) <= max_{i, |a| <= p-c-i} {T_i(M) + sum a_j T_j(S/J)} + T_c(S/J) - p."""
    name = "regthm"
    reasons = _regthm_hypotheses(pM, pJ, c, ann_contained)
    if reasons:
        return _skip(name, reasons, c=c)
    best, (i, a) = regthm_max(pM, pJ, c)
    rhs = best + pJ.T(c) - pM.pd
    return BoundReport(name, True, lhs=int(pM.reg), rhs=int(rhs), asserted=True,
                       witness={"i": i, "a": list(a.entries)}, params={"c": c, "p": pM.pd})


def bound_main(pM: ShiftProfile, pJ: ShiftProfile, c: int, ann_contained: bool = True) -> BoundReport:
    """T_p(M) <= max_{i, |a| <= p-c-i} {T_i(M) + sum a_j T_j(S/J)} + T_c(S/J)."""
    name = "main"
    reasons = _regthm_hypotheses(pM, pJ, c, ann_contained)
    if reasons:
        return _skip(name, reasons, c=c)
    best, (i, a) = regthm_max(pM, pJ, c)
    return BoundReport(name, True, lhs=int(pM.T(pM.pd)), rhs=int(best + pJ.T(c)), asserted=True,
                       witness={"i": i, "a": list(a.entries)}, params={"c": c, "p": pM.pd})


def bound_cm_regularity(pM: ShiftProfile, pJ: ShiftProfile, c: int, m_codim: int,
                        ann_contained: bool = True) -> BoundReport:
    """For M Cohen-Macaulay of codim c with a CM ideal J of codim c inside
    Ann(M):  reg(M) <= T_0(M) + T_c(S/J) - c."""
    name = "cmreg"
    reasons = []
    if pM.is_zero:
        reasons.append("M is the zero module")
    elif pM.pd != m_codim or m_codim != c:
        reasons.append(f"M is not Cohen-Macaulay of codim {c} (pd {pM.pd}, codim {m_codim})")
    if not ann_contained:
        reasons.append("J is not contained in Ann(M)")
    if pJ.is_zero or pJ.pd != c:
        reasons.append(f"S/J is not Cohen-Macaulay of codim {c}")
    if reasons:
        return _skip(name, reasons, c=c)
    return BoundReport(name, True, lhs=int(pM.reg), rhs=int(pM.T(0) + pJ.T(c) - c), asserted=True,
                       params={"c": c})


def common_degree_rhs(pI: ShiftProfile, c: int, d: int):
    p = pI.pd
    best, wit = None, None
    for i in range(0, p - c + 1):
        val = pI.T(i) + (p - i) * d
        if best is None or val > best:
            best, wit = val, i
    return best - p, wit


def bound_common_degree(pI: ShiftProfile, c: int, d: int, found: bool = True) -> BoundReport:
    """reg(S/I) <= max_{0<=i<=p-c} {T_i(S/I) + (p-i) d} - p when I contains a
    regular sequence of c forms of degree d."""
    name = "common_degree"
    if pI.is_zero:
        return _skip(name, ["unit ideal"], c=c, d=d)
    if not found:
        return _skip(name, [f"no regular sequence of {c} forms of degree {d} found"], c=c, d=d)
    if pI.pd < c:
        raise BoundsError(f"malformed profile: pd {pI.pd} < codim {c}")
    rhs, i = common_degree_rhs(pI, c, d)
    return BoundReport(name, True, lhs=int(pI.reg), rhs=int(rhs), asserted=True,
                       witness={"i": i}, params={"c": c, "d": d})


def bound_maincor(pI: ShiftProfile, c: int) -> BoundReport:
    """reg(S/I) <= max_{0<=i<=p-c} {T_i(S/I) + (p-i) T_1(S/I)} - p."""
    name = "maincor"
    if pI.is_zero:
        return _skip(name, ["unit ideal"], c=c)
    if pI.pd < c:
        raise BoundsError(f"malformed profile: pd {pI.pd} < codim {c}")
    d = pI.T(1) if pI.pd >= 1 else 0
    rhs, i = common_degree_rhs(pI, c, d)
    return BoundReport(name, True, lhs=int(pI.reg), rhs=int(rhs), asserted=True,
                       witness={"i": i}, params={"c": c, "d": int(d)})


# -- principal annihilator -------------------------------------------------------------------

def check_codim1(pM: ShiftProfile, d: int) -> BoundReport:
    """T_p(M) <= T_{p-1}(M) + d for a form of degree d annihilating M."""
    name = "codim1"
    if pM.pd < 1:
        return _skip(name, ["pd(M) < 1"], d=d)
    p = pM.pd
    return BoundReport(name, True, lhs=int(pM.T(p)), rhs=int(pM.T(p - 1) + d), asserted=True,
                       params={"d": d, "p": p})


def check_codim1_reg(pM: ShiftProfile, d: int) -> BoundReport:
    """reg(M) <= max{ max_{i<p}(T_i - i), T_{p-1} + d - p }."""
    name = "codim1_reg"
    if pM.pd < 1:
        return _skip(name, ["pd(M) < 1"], d=d)
    p = pM.pd
    head = max(pM.T(i) - i for i in range(p))
    return BoundReport(name, True, lhs=int(pM.reg), rhs=int(max(head, pM.T(p - 1) + d - p)),
                       asserted=True, params={"d": d, "p": p})


# -- early strict growth ----------------------------------------------------------------------

def check_strict_growth(pM: ShiftProfile, codim: int) -> BoundReport:
    """T_i(M) < T_{i+1}(M) for 0 <= i < codim(M).

    Encoded as lhs = max_i (T_i + 1 - T_{i+1}) <= rhs = 0.
    """
    name = "strict_growth"
    if pM.is_zero:
        return _skip(name, ["zero module"])
    top = min(codim, pM.pd)
    if top < 1:
        return _skip(name, ["codim 0: nothing to check"], codim=codim)
    vals = [(pM.T(i) + 1 - pM.T(i + 1), i) for i in range(top)]
    worst, i = max(vals, key=lambda v: (v[0], -v[1]))
    return BoundReport(name, True, lhs=int(worst), rhs=0, asserted=True,
                       witness={"i": i}, params={"codim": codim})


# -- convexity of top shifts ----------------------------------------------------------------------

def check_ehu_thm1(pI: ShiftProfile, dim_minus_depth: int) -> BoundReport:
    """T_p(S/I) <= T_i(S/I) + T_{p-i}(S/I) for all 0 <= i <= p.

    Proved when dim - depth <= 1; otherwise a report-only convexity probe.
    """
    name = "ehu1"
    if pI.is_zero:
        return _skip(name, ["unit ideal"])
    p = pI.pd
    rhs, i = min((pI.T(i) + pI.T(p - i), i) for i in range(p + 1))
    asserted = dim_minus_depth <= 1
    rep = BoundReport(name, asserted, lhs=int(pI.T(p)), rhs=int(rhs), asserted=asserted,
                      probe=not asserted, witness={"i": i},
                      params={"dim_minus_depth": dim_minus_depth})
    if not asserted:
        rep.reasons.append("dim - depth > 1: convexity probe only")
    return rep


def check_ehu_thm2(pM: ShiftProfile, pJ: ShiftProfile, q: int, inv_M, inv_J,
                   ann_contained: bool) -> BoundReport:
    """T_p(M) <= T_{p-q}(M) + T_q(S/J) for 0 <= q <= codim(J).

    Asserted when dim(M) - depth(M) <= 1, depth(S/J) >= depth(M) and
    J ⊆ Ann(M); with only the last two hypotheses it is a conjecture probe.
    """
    name = "ehu2"
    params = {"q": q}
    if pM.is_zero or pJ.is_zero:
        return _skip(name, ["zero module"], **params)
    if not 0 <= q <= inv_J.codim:
        return _skip(name, [f"q = {q} outside 0..codim(J) = {inv_J.codim}"], **params)
    p = pM.pd
    if p - q < 0:
        return _skip(name, [f"p - q < 0 (p = {p})"], **params)
    lhs = int(pM.T(p))
    rhs = int(pM.T(p - q) + pJ.T(q))
    conj_reasons = []
    if not ann_contained:
        conj_reasons.append("J is not contained in Ann(M)")
    if inv_J.depth < inv_M.depth:
        conj_reasons.append("depth(S/J) < depth(M)")
    if conj_reasons:
        return BoundReport(name, False, lhs=lhs, rhs=rhs, reasons=conj_reasons, params=params)
    if inv_M.dim_minus_depth <= 1:
        return BoundReport(name, True, lhs=lhs, rhs=rhs, asserted=True, params=params)
    return BoundReport(name, True, lhs=lhs, rhs=rhs, probe=True,
                       reasons=["dim(M) - depth(M) > 1: conjecture probe"], params=params)


def ehu2_all(pM, pJ, inv_M, inv_J, ann_contained) -> list[BoundReport]:
    return [check_ehu_thm2(pM, pJ, q, inv_M, inv_J, ann_contained)
            for q in range(0, max(inv_J.codim, 0) + 1) if q <= pM.pd]


def regthm_rhs_at(pM: ShiftProfile, pJ: ShiftProfile, c: int, i: int, a: Sequence[int]) -> int:
    """The bound_regthm expression at a single (i, a)."""
    return int(pM.T(i) + sum(x * pJ.T(j + 1) for j, x in enumerate(a)) + pJ.T(c) - pM.pd)
