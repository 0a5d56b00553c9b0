"""Dimension, codimension, depth, Cohen-Macaulayness, annihilator containment
and regular-sequence search."""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass
from math import comb
from typing import Sequence

from .groebner import (
    VectorElement,
    buchberger,
    ideal_groebner,
    lead_monomials,
    submodule_membership,
)
from .polyring import Polynomial, RingSpec, monomials_of_degree
from .resolution import ModulePresentation, ShiftProfile, profile

MINOR_RANK_CAP = 4
MINOR_COUNT_CAP = 500
REGSEQ_RETRIES = 64


def _dim_from_leads(leads, n: int) -> int:
    if any(sum(m) == 0 for m in leads):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    for size in range(n, -1, -1):
        for U in itertools.combinations(range(n), size):
            U = frozenset(U)
            if not any(s <= U for s in supports):
                return size
    return 0


def dim_lead_term(ideal: Sequence[Polynomial], ring: RingSpec | None = None) -> int:
    """Krull dimension of S/I, read off the lead-term ideal: the largest set of
    variables containing the support of no lead monomial.  -1 for the unit
    ideal, n for the zero ideal."""
    ideal = [f for f in ideal if not f.is_zero()]
    if ring is None:
        ring = ideal[0].ring
    if not ideal:
        return ring.num_vars
    gb = ideal_groebner(ideal, ring)
    return _dim_from_leads(lead_monomials(gb), ring.num_vars)


def codim_ideal(ideal: Sequence[Polynomial], ring: RingSpec) -> int:
    d = dim_lead_term(ideal, ring)
    return ring.num_vars + 1 if d < 0 else ring.num_vars - d


def _det(mat):
    """Determinant of a small square matrix of polynomials (Laplace expansion)."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = None
    for c in range(n):
        if not mat[0][c]:
            continue
        minor = [row[:c] + row[c + 1:] for row in mat[1:]]
        term = mat[0][c] * _det(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else mat[0][0].ring.zero()


def fitting_ideal(m: ModulePresentation) -> list[Polynomial] | None:
    """Maximal minors of the presentation matrix, or None when the matrix is
    over the size cap."""
    r = len(m.target_twists)
    rels = [v.components for v in m.relations]
    if r == 0:
        return [m.ring.const(1)]
    if len(rels) < r:
        return []
    if r > MINOR_RANK_CAP or comb(len(rels), r) > MINOR_COUNT_CAP:
        return None
    out = []
    for cols in itertools.combinations(range(len(rels)), r):
        mat = [[rels[c][k] for c in cols] for k in range(r)]
        d = _det(mat)
        if d:
            out.append(d)
    return out


def codim_module(m: ModulePresentation) -> int:
    """codim(M) = n - dim S/Fitt_0(M); n + 1 for the zero module."""
    if m.is_cyclic:
        return codim_ideal(list(m.ideal()), m.ring)
    fitt = fitting_ideal(m)
    if fitt is not None:
        return codim_ideal(fitt, m.ring)
    if m.summands is not None:
        return min(codim_ideal(list(gens), m.ring) for _, gens in m.summands)
    return codim_by_lead_terms(m)


def codim_by_lead_terms(m: ModulePresentation) -> int:
    """codim from the lead-term module ⊕ S/L_k e_k, which has M's Hilbert
    polynomial and hence its dimension."""
    n = m.ring.num_vars
    gb = buchberger(list(m.relations), module=m.module)
    by_pos: dict = {k: [] for k in range(len(m.target_twists))}
    for k, mono in gb.leads():
        by_pos[k].append(mono)
    dim = max((_dim_from_leads(ls, n) for ls in by_pos.values()), default=-1)
    return n + 1 if dim < 0 else n - dim


def depth_ab(prof: ShiftProfile, n: int) -> int:
    """Auslander-Buchsbaum: depth = n - pd."""
    return n - prof.pd


@dataclass(frozen=True)
class InvariantReport:
    dim: int
    codim: int
    depth: int
    pd: int
    is_cm: bool
    char_used: int

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def dim_minus_depth(self) -> int:
        return self.dim - self.depth


def compute_invariants(m: ModulePresentation, prof: ShiftProfile | None = None) -> InvariantReport:
    n = m.ring.num_vars
    prof = prof or profile(m)
    codim = codim_module(m)
    depth = depth_ab(prof, n)
    return InvariantReport(dim=n - codim, codim=codim, depth=depth, pd=prof.pd,
                           is_cm=(not prof.is_zero) and prof.pd == codim, char_used=m.ring.p)


def is_cohen_macaulay(m: ModulePresentation, prof: ShiftProfile | None = None) -> bool:
    prof = prof or profile(m)
    if prof.is_zero:
        return False
    return prof.pd == codim_module(m)


def ann_contains(j: Sequence[Polynomial], m: ModulePresentation) -> bool:
    """True iff f * e_k lies in the relation module for all f in J and all k."""
    mod = m.module
    gb = buchberger(list(m.relations), module=mod)
    ring = m.ring
    zero = ring.zero()
    for f in j:
        for k in range(mod.rank):
            comps = [zero] * mod.rank
            comps[k] = f
            if not submodule_membership(VectorElement.from_components(mod, comps), gb):
                return False
    return True


def degree_part(ideal: Sequence[Polynomial], d: int) -> list[Polynomial]:
    """A spanning set of I_d: monomial multiples of generators of degree ≤ d."""
    return [g.mul_monomial(mono)
            for g in ideal if not g.is_zero() and g.degree <= d
            for mono in monomials_of_degree(g.ring.num_vars, d - g.degree)]


def find_regular_sequence(ideal: Sequence[Polynomial], d: int, q: int, seed: int = 0,
                          retries: int = REGSEQ_RETRIES, ring: RingSpec | None = None):
    """q forms of degree d in I forming a regular sequence, or None.

    The degree-d generators of I are tried first, then random combinations of
    a spanning set of I_d, sparse at first and denser with each retry.  For
    forms, codim(f_1..f_q) = q already forces every prefix to have the right
    codimension, so only the full set is checked.  None does not prove that
    no such sequence exists.
    """
    ideal = [f for f in ideal if not f.is_zero()]
    ring = ring or (ideal[0].ring if ideal else None)
    if q == 0:
        return []
    if not ideal or d < 1:
        return None
    if q > codim_ideal(ideal, ring):
        return None
    n = ring.num_vars
    p = ring.p

    def ok(forms):
        return n - dim_lead_term(forms, ring) == q

    direct = [g for g in ideal if g.degree == d]
    if len(direct) >= q and ok(direct[:q]):
        return direct[:q]
    span = degree_part(ideal, d)
    if not span:
        return None
    rng = random.Random(seed)
    for attempt in range(retries):
        size = min(len(span), 2 + 2 * attempt)
        forms = []
        for _ in range(q):
            f = ring.zero()
            for g in rng.sample(span, size):
                f = f + g.scale(rng.randrange(1, p))
            forms.append(f)
        if all(forms) and ok(forms):
            return forms
    return None


def koszul_profile(degrees: Sequence[int]) -> ShiftProfile:
    """Shifts of S/(f_1..f_c) for a regular sequence of the given degrees."""
    ds = sorted(degrees, reverse=True)
    T = [sum(ds[:i]) for i in range(len(ds) + 1)]
    t = [sum(sorted(degrees)[:i]) for i in range(len(ds) + 1)]
    return ShiftProfile.from_max_shifts(T, t)

