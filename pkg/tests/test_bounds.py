import itertools

import pytest
from hypothesis import given, settings, strategies as st

from regshift.bounds import (
    CANDIDATE,
    PASS,
    PROBE,
    SKIPPED,
    VIOLATION,
    BoundReport,
    BoundsError,
    WeightVector,
    bound_cm_regularity,
    bound_common_degree,
    bound_main,
    bound_maincor,
    bound_regthm,
    check_codim1,
    check_codim1_reg,
    check_ehu_thm1,
    check_ehu_thm2,
    check_strict_growth,
    enumerate_weights,
    regthm_max,
    regthm_rhs_at,
    weight_norm,
)
from regshift.invariants import InvariantReport, compute_invariants, koszul_profile
from regshift.resolution import ModulePresentation, ShiftProfile, profile

from conftest import monomial_ideals

P = ShiftProfile.from_max_shifts


def inv(dim, depth, codim=None, pd=None):
    return InvariantReport(dim, codim if codim is not None else 0, depth, pd if pd is not None else 0, False, 101)


def test_weight_norm_example():
    assert weight_norm((1, 2, 0, 1)) == 13
    assert WeightVector((1, 2, 0, 1)).weight == 13


def test_weights_up_to_four_in_three_slots():
    got = [tuple(a) for a in enumerate_weights(3, 4)]
    assert got == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (2, 0, 0)]
    by_weight = {w: [a for a in got if weight_norm(a) == w] for w in range(5)}
    assert by_weight[1] == []
    assert by_weight[2] == [(1, 0, 0)] and by_weight[3] == [(0, 1, 0)]
    assert by_weight[4] == [(0, 0, 1), (2, 0, 0)]


def test_negative_weight_rejected():
    with pytest.raises(BoundsError):
        WeightVector((1, -1))
    with pytest.raises(BoundsError):
        enumerate_weights(0, 3)


@given(st.integers(1, 4), st.integers(0, 9))
def test_enumeration_matches_brute_force(c, cap):
    brute = sorted(a for a in itertools.product(range(cap + 1), repeat=c) if weight_norm(a) <= cap)
    assert [tuple(a) for a in enumerate_weights(c, cap)] == brute


shift_lists = st.lists(st.integers(0, 3), min_size=1, max_size=6).map(
    lambda steps: list(itertools.accumulate([0] + [s + 1 for s in steps])))


@given(shift_lists, st.lists(st.integers(2, 3), min_size=1, max_size=4))
def test_regthm_max_matches_brute_force(TM, degs):
    pM = P(TM)
    pJ = koszul_profile(degs)
    c = len(degs)
    if pM.pd < c:
        return
    best, (i, a) = regthm_max(pM, pJ, c)
    brute = max(
        pM.T(i2) + sum(x * pJ.T(j + 1) for j, x in enumerate(a2))
        for i2 in range(pM.pd - c + 1)
        for a2 in itertools.product(range(pM.pd + 1), repeat=c)
        if weight_norm(a2) <= pM.pd - c - i2
    )
    assert best == brute
    assert regthm_rhs_at(pM, pJ, c, i, a) == best + pJ.T(c) - pM.pd


def test_report_status():
    assert BoundReport("b", True, lhs=1, rhs=2, asserted=True).status == PASS
    assert BoundReport("b", True, lhs=3, rhs=2, asserted=True).status == VIOLATION
    assert BoundReport("b", True, lhs=1, rhs=2, probe=True).status == PROBE
    assert BoundReport("b", True, lhs=3, rhs=2, probe=True).status == CANDIDATE
    assert BoundReport("b", False).status == SKIPPED
    rep = BoundReport("b", True, lhs=3, rhs=5, asserted=True)
    assert rep.slack == 2 and rep.to_dict()["slack"] == 2


def test_regthm_on_square_of_maximal_ideal():
    pJ = P([0, 2, 3, 4])
    rep = bound_regthm(pJ, pJ, 3)
    assert rep.status == PASS and rep.slack == 0 and rep.lhs == 1


def test_regthm_hypotheses():
    pJ = P([0, 2, 3, 4])
    assert bound_regthm(P([0, 2, 3, 4]), pJ, 3, ann_contained=False).status == SKIPPED
    # linear complete intersection
    assert bound_regthm(P([0, 1, 2]), P([0, 1, 2]), 2).status == SKIPPED
    # S/J not CM of codim c
    assert bound_regthm(P([0, 2, 3, 4]), P([0, 2, 3]), 3).status == SKIPPED
    with pytest.raises(BoundsError):
        bound_regthm(P([0, 2]), pJ, 3)


def test_common_degree_tight_on_complete_intersection():
    for c in range(1, 5):
        for d in range(1, 4):
            pI = koszul_profile([d] * c)
            assert pI.max_shifts == tuple(d * i for i in range(c + 1))
            rep = bound_common_degree(pI, c, d)
            assert rep.status == PASS and rep.slack == 0
    assert bound_common_degree(koszul_profile([2, 2]), 2, 2, found=False).status == SKIPPED


def test_strict_growth_only_below_codim():
    # T_2 = 4 > T_3 = 3 past codim 2 is allowed
    prof = P([0, 2, 4, 3])
    assert check_strict_growth(prof, 2).status == PASS
    assert check_strict_growth(prof, 3).status == VIOLATION


def test_codim1_formulas():
    prof = P([0, 2, 3, 4])
    rep = check_codim1(prof, 2)
    assert (rep.lhs, rep.rhs) == (4, 5)
    rep = check_codim1_reg(prof, 2)
    assert (rep.lhs, rep.rhs) == (1, 2)
    assert check_codim1(P([3]), 2).status == SKIPPED


def test_convexity_probe_vs_assertion():
    prof = P([0, 2, 3, 7])
    assert check_ehu_thm1(prof, 1).status == VIOLATION
    assert check_ehu_thm1(prof, 2).status == CANDIDATE
    assert check_ehu_thm1(P([0, 2, 3, 4]), 3).status == PROBE


def test_second_convexity_gating():
    pM, pJ = P([0, 2, 3, 4]), P([0, 2, 3, 4])
    good = inv(0, 0, codim=3, pd=3)
    assert check_ehu_thm2(pM, pJ, 1, good, good, True).status == PASS
    assert check_ehu_thm2(pM, pJ, 1, good, good, False).status == SKIPPED
    assert check_ehu_thm2(pM, pJ, 5, good, good, True).status == SKIPPED
    wide = inv(3, 0, codim=3, pd=3)
    assert check_ehu_thm2(pM, pJ, 1, wide, good, True).status == PROBE


@settings(max_examples=40)
@given(monomial_ideals(n=4, max_degree=3, max_gens=5))
def test_proved_bounds_hold_on_random_ideals(case):
    ring, gens = case
    m = ModulePresentation.cyclic(ring, gens)
    prof = profile(m)
    if prof.is_zero:
        return
    iv = compute_invariants(m, prof)
    assert check_strict_growth(prof, iv.codim).status in (PASS, SKIPPED)
    assert bound_maincor(prof, iv.codim).status == PASS
    if prof.pd >= 1:
        assert check_codim1(prof, int(prof.t(1))).status == PASS
        assert check_codim1_reg(prof, int(prof.t(1))).status == PASS
    if iv.is_cm:
        assert bound_cm_regularity(prof, prof, iv.codim, iv.codim).status == PASS
        for rep in (bound_regthm(prof, prof, iv.codim), bound_main(prof, prof, iv.codim)):
            assert rep.status in (PASS, SKIPPED)
    if iv.dim_minus_depth <= 1:
        assert check_ehu_thm1(prof, iv.dim_minus_depth).status == PASS
