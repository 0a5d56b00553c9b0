import pytest
from hypothesis import given, strategies as st

from regshift.groebner import (
    FreeModuleSpec,
    GroebnerError,
    VectorElement,
    apply_map,
    buchberger,
    gb_polynomials,
    ideal_groebner,
    is_groebner_basis,
    lead_monomials,
    submodule_membership,
    syzygy_basis,
)
from regshift.linalg import rank_mod_p
from regshift.polyring import RingSpec, mono_divides, monomials_of_degree

from conftest import forms, hilbert_linear, in_ideal_linear, ring_n

R3 = ring_n(3)


def standard_monomial_count(leads, n, d):
    return sum(1 for m in monomials_of_degree(n, d) if not any(mono_divides(l, m) for l in leads))


def test_small_reduced_basis():
    ring = RingSpec.make("x,y", 32003)
    x, y = ring.gens()
    gb = ideal_groebner([x * x - y * y, x * y])
    assert [str(g) for g in gb_polynomials(gb)] == ["x^2 - y^2", "x*y", "y^3"]
    assert is_groebner_basis(gb)


def test_syzygies_of_small_basis():
    ring = RingSpec.make("x,y", 32003)
    x, y = ring.gens()
    gb = ideal_groebner([x * x - y * y, x * y])
    syz = syzygy_basis(gb)
    assert [[str(c) for c in s.components] for s in syz] == [["y", "-x", "1"], ["0", "y^2", "-x"]]


def test_mixed_module_rejected():
    ring = RingSpec.make("x,y")
    a = VectorElement.from_components(FreeModuleSpec(ring, (0,)), [ring.gen(0)])
    b = VectorElement.from_components(FreeModuleSpec(ring, (0, 0)), [ring.gen(0), ring.gen(1)])
    with pytest.raises(GroebnerError):
        buchberger([a, b])


@given(st.data())
def test_basis_spans_the_ideal(data):
    gens = data.draw(st.lists(forms(R3, max_degree=3, max_terms=3), min_size=1, max_size=3))
    gb = ideal_groebner(gens, R3)
    assert is_groebner_basis(gb)
    for g in gb_polynomials(gb):
        assert in_ideal_linear(g, gens)
    for f in gens:
        assert submodule_membership(VectorElement.from_components(gb.module, [f]), gb)


@given(st.data())
def test_standard_monomials_count_hilbert_function(data):
    gens = data.draw(st.lists(forms(R3, max_degree=2, max_terms=3), min_size=1, max_size=3))
    leads = lead_monomials(ideal_groebner(gens, R3))
    for d in range(5):
        assert standard_monomial_count(leads, 3, d) == hilbert_linear(gens, R3, d)


@given(st.data())
def test_membership_matches_linear_algebra(data):
    gens = data.draw(st.lists(forms(R3, max_degree=2, max_terms=3), min_size=1, max_size=3))
    f = data.draw(forms(R3, degree=3, max_terms=5))
    gb = ideal_groebner(gens, R3)
    v = VectorElement.from_components(gb.module, [f])
    assert submodule_membership(v, gb) == in_ideal_linear(f, gens)


def syzygy_dims(gb, d):
    """(dimension of the kernel in degree d, dimension spanned by the computed syzygies)."""
    ring = gb.module.ring
    n = ring.num_vars
    polys = gb_polynomials(gb)
    target = {m: i for i, m in enumerate(monomials_of_degree(n, d))}
    blocks = []
    for g in polys:
        blocks.append(monomials_of_degree(n, d - g.degree) if d >= g.degree else [])
    src_index = {}
    for k, blk in enumerate(blocks):
        for u in blk:
            src_index[(k, u)] = len(src_index)
    image = []
    for (k, u) in src_index:
        row = [0] * len(target)
        for m, c in polys[k].mul_monomial(u).coeffs.items():
            row[target[m]] = c
        image.append(row)
    kernel = len(src_index) - rank_mod_p(image, ring.p)
    spans = []
    for s in syzygy_basis(gb):
        if s.degree > d:
            continue
        for u in monomials_of_degree(n, d - s.degree):
            row = [0] * len(src_index)
            for k, comp in enumerate(s.components):
                for m, c in comp.mul_monomial(u).coeffs.items():
                    row[src_index[(k, m)]] = c
            spans.append(row)
    return kernel, rank_mod_p(spans, ring.p) if spans else 0


@given(st.data())
def test_syzygies_generate_the_kernel(data):
    gens = data.draw(st.lists(forms(R3, max_degree=2, max_terms=3), min_size=2, max_size=3))
    gb = ideal_groebner(gens, R3)
    syz = syzygy_basis(gb)
    for s in syz:
        assert apply_map(s, list(gb), gb.module).is_zero()
    top = max(g.degree for g in gb) + 2
    for d in range(1, top + 1):
        kernel, spanned = syzygy_dims(gb, d)
        assert kernel == spanned


@given(st.data())
def test_module_basis_membership(data):
    mod = FreeModuleSpec(R3, (0, 1))
    vecs = []
    for _ in range(data.draw(st.integers(1, 3))):
        a = data.draw(forms(R3, degree=2, max_terms=2))
        b = data.draw(forms(R3, degree=1, max_terms=2))
        vecs.append(VectorElement.from_components(mod, [a, b]))
    gb = buchberger(vecs)
    assert is_groebner_basis(gb)
    for v in vecs:
        assert submodule_membership(v, gb)
    # syzygies of a module basis map to zero as well
    for s in syzygy_basis(gb):
        assert apply_map(s, list(gb), mod).is_zero()
