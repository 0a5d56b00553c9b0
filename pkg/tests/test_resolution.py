import math
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from regshift.polyring import RingSpec
from regshift.resolution import (
    BettiTable,
    ModulePresentation,
    PartialTableWarning,
    ResolutionError,
    ShiftProfile,
    betti,
    certified_cap,
    compose_is_zero,
    entries_homogeneous,
    has_unit_entries,
    hilbert_check,
    hilbert_from_betti,
    koszul_betti_oracle,
    minimalize,
    profile,
    resolve_minimal,
    resolve_schreyer,
    ses_shift_check,
    shifts,
)

from conftest import forms, hilbert_linear, monomial_ideals, ring_n


def xyz(p=32003):
    ring = RingSpec.make("x,y,z", p)
    return ring, ring.gens()


def table(m):
    return betti(resolve_minimal(m))


def test_koszul_complex_on_variables():
    ring, (x, y, z) = xyz()
    b = table(ModulePresentation.cyclic(ring, [x, y, z]))
    assert b.entries == {(0, 0): 1, (1, 1): 3, (2, 2): 3, (3, 3): 1}


def test_square_of_maximal_ideal():
    ring, (x, y, z) = xyz()
    gens = [x * x, x * y, x * z, y * y, y * z, z * z]
    b = table(ModulePresentation.cyclic(ring, gens))
    assert b.totals() == [1, 6, 8, 3]
    prof = shifts(b)
    assert prof.max_shifts == (0, 2, 3, 4) and prof.reg == 1


def test_nonmonomial_gb_example():
    ring = RingSpec.make("x,y", 32003)
    x, y = ring.gens()
    b = table(ModulePresentation.cyclic(ring, [x * x - y * y, x * y]))
    # complete intersection of two quadrics
    assert b.entries == {(0, 0): 1, (1, 2): 2, (2, 4): 1}


def test_render_grid():
    ring, (x, y, z) = xyz()
    b = table(ModulePresentation.cyclic(ring, [x * x, x * y]))
    assert b.render().splitlines() == [
        "       0 1 2",
        "total: 1 2 1",
        "    0: 1 . .",
        "    1: . 2 1",
    ]
    assert BettiTable.from_records(b.records()) == b


def test_unit_ideal_is_zero_module():
    ring, _ = xyz()
    m = ModulePresentation.cyclic(ring, [ring.const(1)])
    prof = profile(m)
    assert prof.is_zero and prof.pd == -1
    assert prof.T(0) == -math.inf


def test_zero_ideal_is_free():
    ring, _ = xyz()
    prof = profile(ModulePresentation.cyclic(ring, [], twist=2))
    assert prof.max_shifts == (2,) and prof.pd == 0


def test_betti_needs_minimal_resolution():
    ring, (x, y, z) = xyz()
    m = ModulePresentation.cyclic(ring, [x * x - y * y, x * y])
    res = resolve_schreyer(m)
    # the Schreyer resolution here carries the redundant generator y^3
    assert has_unit_entries(res)
    with pytest.raises(ResolutionError):
        betti(res)


def test_direct_sum_example_shifts():
    ring, (x, y, z) = xyz()
    m = ModulePresentation.direct_sum([
        ModulePresentation.cyclic(ring, [x * x, y * y]),
        ModulePresentation.cyclic(ring, [x, y, z]),
    ])
    prof = profile(m)
    assert prof.max_shifts == (0, 2, 4, 3)
    rep = ses_shift_check(m)
    assert rep["ok"] and not rep["failures"]


def test_shift_profile_outside_range():
    prof = ShiftProfile.from_max_shifts([0, 2, 3])
    assert prof.T(-1) == -math.inf and prof.T(3) == -math.inf
    assert prof.t(5) == math.inf
    assert prof.reg == 1


def test_low_cap_warns():
    ring, (x, y, z) = xyz()
    m = ModulePresentation.cyclic(ring, [x ** 3, y ** 3, z ** 3])
    assert certified_cap(m) >= 6
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        koszul_betti_oracle(m, degree_cap=2)
    assert any(issubclass(w.category, PartialTableWarning) for w in caught)


def check_structure(m, cap):
    res = resolve_minimal(m)
    n = m.ring.num_vars
    assert compose_is_zero(res)
    assert entries_homogeneous(res)
    assert not has_unit_entries(res)
    b = betti(res)
    assert shifts(b).pd <= n
    assert hilbert_check(m, b, cap) == []
    return b


@given(monomial_ideals(n=3, max_degree=3, max_gens=5))
def test_monomial_resolution_matches_koszul_homology(case):
    ring, gens = case
    m = ModulePresentation.cyclic(ring, gens)
    b = check_structure(m, sum(g.degree for g in gens))
    assert b == koszul_betti_oracle(m)


@settings(max_examples=25)
@given(st.data())
def test_graded_resolution_matches_koszul_homology(data):
    ring = ring_n(3)
    gens = data.draw(st.lists(forms(ring, max_degree=2, max_terms=3), min_size=1, max_size=3))
    m = ModulePresentation.cyclic(ring, gens)
    b = check_structure(m, 6)
    assert b == koszul_betti_oracle(m, degree_cap=8)
    for d in range(7):
        assert hilbert_from_betti(b, 3, d) == hilbert_linear(gens, ring, d)


@settings(max_examples=25)
@given(monomial_ideals(n=3, max_degree=2, max_gens=3), monomial_ideals(n=3, max_degree=2, max_gens=3))
def test_direct_sum_adds_tables(a, b):
    ring, g1 = a
    _, g2 = b
    parts = [ModulePresentation.cyclic(ring, g1), ModulePresentation.cyclic(ring, g2, twist=1)]
    total = check_structure(ModulePresentation.direct_sum(parts), 8)
    expect = {}
    for part in parts:
        for k, v in table(part).entries.items():
            expect[k] = expect.get(k, 0) + v
    assert total.entries == expect
    assert ses_shift_check(ModulePresentation.direct_sum(parts))["ok"]


@settings(max_examples=25)
@given(monomial_ideals(n=3, max_degree=3, max_gens=4))
def test_minimalize_preserves_homology_ranks(case):
    ring, gens = case
    m = ModulePresentation.cyclic(ring, gens)
    full = resolve_schreyer(m)
    small = minimalize(full)
    assert compose_is_zero(small)
    # cancelling a unit pair drops one summand from adjacent steps
    diff = [full.rank(i) - small.rank(i) for i in range(full.length + 1)]
    alt = sum((-1) ** i * d for i, d in enumerate(diff))
    assert alt == 0
