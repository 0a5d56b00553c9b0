"""Gröbner bases and syzygies for submodules of graded free modules.

Module elements are stored as dicts ``{(position, monomial): coeff}``.  A
:class:`ModuleOrder` ranks such terms; the plain order is term-over-position,
and :meth:`ModuleOrder.schreyer` builds the order induced by the lead terms
of a Gröbner basis, under which the S-pair syzygies are again a Gröbner
basis.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import budget
from .polyring import (
    Polynomial,
    RingError,
    RingSpec,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


class GroebnerError(RuntimeError):
    pass


@dataclass(frozen=True)
class FreeModuleSpec:
    ring: RingSpec
    twists: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(t) for t in self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)


@dataclass(frozen=True, eq=False)
class VectorElement:
    """Homogeneous element of a twisted free module."""

    module: FreeModuleSpec
    terms: dict = field(repr=False)

    def __post_init__(self):
        tw = self.module.twists
        degs = set()
        for k, m in self.terms:
            if not 0 <= k < len(tw):
                raise GroebnerError(f"position {k} outside module of rank {len(tw)}")
            degs.add(sum(m) + tw[k])
        if len(degs) > 1:
            raise GroebnerError(f"inhomogeneous module element (degrees {sorted(degs)})")

    @classmethod
    def from_components(cls, module: FreeModuleSpec, comps: Sequence[Polynomial]) -> "VectorElement":
        if len(comps) != module.rank:
            raise GroebnerError(f"expected {module.rank} components, got {len(comps)}")
        terms = {}
        for k, f in enumerate(comps):
            if f.ring != module.ring:
                raise RingError("component from a different ring")
            for m, c in f.coeffs.items():
                terms[(k, m)] = c
        return cls(module, terms)

    @property
    def components(self) -> list[Polynomial]:
        ring = self.module.ring
        parts: list[dict] = [{} for _ in range(self.module.rank)]
        for (k, m), c in self.terms.items():
            parts[k][m] = c
        return [Polynomial(ring, d) for d in parts]

    @property
    def degree(self):
        for k, m in self.terms:
            return sum(m) + self.module.twists[k]
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, VectorElement):
            return NotImplemented
        return self.module == other.module and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    __repr__ = __str__


class ModuleOrder:
    """Monomial order on a free module.

    ``key((k, m))`` is a flat tuple of ints: the ring-order key of
    ``m * multipliers[k]`` followed by ``suffixes[k]``.  Term-over-position
    uses trivial multipliers and suffix ``(-k,)``; a Schreyer order carries
    the lead monomial chain and the position chain down to F_0.
    """

    def __init__(self, ring: RingSpec, multipliers, suffixes):
        self.ring = ring
        self.multipliers = tuple(multipliers)
        self.suffixes = tuple(suffixes)
        self._okey = ring.order_key
        self._cache: dict = {}

    @classmethod
    def top(cls, module: FreeModuleSpec) -> "ModuleOrder":
        one = module.ring.one()
        return cls(module.ring, [one] * module.rank, [(-k,) for k in range(module.rank)])

    def schreyer(self, leads: Sequence) -> "ModuleOrder":
        """Order on the free module whose k-th basis vector maps to an element
        with lead term ``leads[k] = (position, monomial)`` in this module."""
        mults, sufs = [], []
        for k, (pos, mono) in enumerate(leads):
            mults.append(mono_mul(self.multipliers[pos], mono))
            sufs.append(self.suffixes[pos] + (-k,))
        return ModuleOrder(self.ring, mults, sufs)

    def key(self, term) -> tuple:
        got = self._cache.get(term)
        if got is None:
            k, m = term
            got = self._okey(mono_mul(m, self.multipliers[k])) + self.suffixes[k]
            self._cache[term] = got
        return got

    def neg_key(self, term) -> tuple:
        return tuple(-x for x in self.key(term))

    def lead(self, terms: dict):
        return max(terms, key=self.key)


@dataclass
class GroebnerBasis:
    """Gröbner basis of a submodule; ``elements`` is sorted by lead position,
    then lex-descending lead monomial (keeps Schreyer towers short)."""

    module: FreeModuleSpec
    order: ModuleOrder
    elements: list
    order_tag: str = "top"

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def leads(self) -> list:
        return [self.order.lead(g.terms) for g in self.elements]


# -- low-level vector arithmetic ------------------------------------------------

def _axpy(target: dict, src: dict, coef: int, mono, p: int, skip=None):
    """target += coef * x^mono * src (in place); returns terms newly created."""
    new = []
    for (k, m), c in src.items():
        if (k, m) == skip:
            continue
        t = (k, mono_mul(m, mono))
        old = target.get(t)
        if old is None:
            v = coef * c % p
            if v:
                target[t] = v
                new.append(t)
        else:
            v = (old + coef * c) % p
            if v:
                target[t] = v
            else:
                del target[t]
    return new


def _monic(terms: dict, order: ModuleOrder, p: int) -> dict:
    lt = order.lead(terms)
    inv = pow(terms[lt], -1, p)
    return {t: c * inv % p for t, c in terms.items()}


def reduce_terms(f: dict, basis: Sequence[dict], order: ModuleOrder, p: int,
                 quotients: dict | None = None, leads=None) -> dict:
    """Full normal form of ``f`` by ``basis``.

    The largest reducible term is eliminated first, by the first basis element
    (list order) whose lead term divides it.  When ``quotients`` is a dict it
    receives ``{index: {monomial: coeff}}`` with f = sum q_i g_i + remainder.
    """
    if leads is None:
        leads = [order.lead(g) for g in basis]
    by_pos: dict = {}
    for idx, (g, lt) in enumerate(zip(basis, leads)):
        by_pos.setdefault(lt[0], []).append((idx, lt[1], pow(g[lt], -1, p), g, lt))
    work = dict(f)
    rem = {}
    heap = [(order.neg_key(t), t) for t in work]
    heapq.heapify(heap)
    queued = set(work)
    steps = 0
    while heap:
        _, t = heapq.heappop(heap)
        queued.discard(t)
        c = work.pop(t, None)
        if c is None:
            continue
        k, m = t
        for idx, lm, inv, g, lt in by_pos.get(k, ()):
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                s = c * inv % p
                for nt in _axpy(work, g, p - s, q, p, skip=lt):
                    if nt not in queued:
                        queued.add(nt)
                        heapq.heappush(heap, (order.neg_key(nt), nt))
                if quotients is not None:
                    qd = quotients.setdefault(idx, {})
                    v = (qd.get(q, 0) + s) % p
                    if v:
                        qd[q] = v
                    else:
                        qd.pop(q, None)
                break
        else:
            rem[t] = c
        steps += 1
        if steps % 256 == 0:
            budget.check()
    return rem


# -- Buchberger -----------------------------------------------------------------

def _common_module(gens: Sequence[VectorElement]) -> FreeModuleSpec:
    mods = {g.module for g in gens}
    if len(mods) != 1:
        raise GroebnerError("generators must live in one free module")
    return mods.pop()


def buchberger(generators: Sequence[VectorElement], order: ModuleOrder | None = None,
               module: FreeModuleSpec | None = None, stats: dict | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by ``generators``.

    Homogeneous normal strategy: S-pairs and input generators are processed
    in increasing degree, ties by insertion order.  Pairs are pruned with the
    Gebauer-Möller criteria (the coprime-lead criterion only for rank 1).
    """
    if module is None:
        if not generators:
            raise GroebnerError("need a module for an empty generator list")
        module = _common_module(generators)
    if order is None:
        order = ModuleOrder.top(module)
    ring = module.ring
    p = ring.p
    tw = module.twists
    is_ideal = module.rank == 1

    G: list[dict] = []
    L: list = []           # lead terms
    active: list[bool] = []
    seq = 0
    # queue entries: (degree, seq, kind, payload)
    queue: list = []
    live_pairs: dict = {}  # seq -> (i, j, lcm)
    for g in generators:
        if g.module != module:
            raise GroebnerError("generator outside the module")
        if g.terms:
            heapq.heappush(queue, (g.degree, seq, "gen", dict(g.terms)))
            seq += 1
    n_pairs = n_zero = 0

    def add_element(h: dict):
        nonlocal seq
        t = len(G)
        lt = order.lead(h)
        pos, mt = lt
        G.append(h)
        L.append(lt)
        active.append(True)
        C = [i for i in range(t) if active[i] and L[i][0] == pos]
        lcms = {i: mono_lcm(L[i][1], mt) for i in C}
        D = []
        for idx, i in enumerate(C):
            if is_ideal and mono_coprime(L[i][1], mt):
                D.append(i)
                continue
            li = lcms[i]
            rest = C[idx + 1:]
            if any(mono_divides(lcms[j], li) for j in rest) or any(mono_divides(lcms[j], li) for j in D):
                continue
            D.append(i)
        E = [i for i in D if not (is_ideal and mono_coprime(L[i][1], mt))]
        for s, (i, j, lij) in list(live_pairs.items()):
            if L[i][0] != pos or not mono_divides(mt, lij):
                continue
            if mono_lcm(L[i][1], mt) != lij and mono_lcm(L[j][1], mt) != lij:
                del live_pairs[s]
        for i in E:
            lij = lcms[i]
            live_pairs[seq] = (i, t, lij)
            heapq.heappush(queue, (sum(lij) + tw[pos], seq, "pair", None))
            seq += 1
        for i in range(t):
            if active[i] and L[i][0] == pos and mono_divides(mt, L[i][1]):
                active[i] = False

    while queue:
        deg, s, kind, payload = heapq.heappop(queue)
        if kind == "pair":
            pr = live_pairs.pop(s, None)
            if pr is None:
                continue
            i, j, lij = pr
            n_pairs += 1
            f: dict = {}
            _axpy(f, G[i], 1, mono_div(lij, L[i][1]), p)
            _axpy(f, G[j], p - 1, mono_div(lij, L[j][1]), p)
        else:
            f = payload
        idx = [i for i in range(len(G)) if active[i]]
        h = reduce_terms(f, [G[i] for i in idx], order, p, leads=[L[i] for i in idx])
        if h:
            hdeg = sum(next(iter(h))[1]) + tw[next(iter(h))[0]]
            if hdeg != deg:
                raise GroebnerError(f"degree drift: pair degree {deg}, result {hdeg}")
            add_element(_monic(h, order, p))
        else:
            n_zero += 1
        budget.check()

    basis = [G[i] for i in range(len(G)) if active[i]]
    basis = _interreduce(basis, order, p)
    if stats is not None:
        stats.update(pairs=n_pairs, zero_reductions=n_zero, size=len(basis))
    return GroebnerBasis(module, order, _sorted_elements(module, basis, order))


def _interreduce(basis: list[dict], order: ModuleOrder, p: int) -> list[dict]:
    leads = [order.lead(g) for g in basis]
    keep = []
    for i, (k, m) in enumerate(leads):
        redundant = False
        for j, (k2, m2) in enumerate(leads):
            if j != i and k2 == k and mono_divides(m2, m) and (m2 != m or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    basis = [basis[i] for i in keep]
    leads = [leads[i] for i in keep]
    out = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1:]
        oleads = leads[:i] + leads[i + 1:]
        r = reduce_terms(g, others, order, p, leads=oleads)
        out.append(_monic(r, order, p))
    return out


def _sorted_elements(module: FreeModuleSpec, basis: list[dict], order: ModuleOrder) -> list[VectorElement]:
    def sort_key(g):
        k, m = order.lead(g)
        return (k, tuple(-e for e in m))
    return [VectorElement(module, g) for g in sorted(basis, key=sort_key)]


# -- syzygies -----------------------------------------------------------------------

def syzygy_basis(gb: GroebnerBasis) -> GroebnerBasis:
    """Generators of the syzygy module of ``gb.elements``.

    The result lives in the free module whose twists are the degrees of the
    basis elements and is a Gröbner basis for the induced Schreyer order.
    Only the S-pairs whose Schreyer lead terms are minimal are kept.
    """
    ring = gb.module.ring
    p = ring.p
    order = gb.order
    G = [g.terms for g in gb.elements]
    leads = gb.leads()
    new_module = FreeModuleSpec(ring, [g.degree for g in gb.elements])
    new_order = order.schreyer(leads)
    syz = []
    by_pos: dict = {}
    for i, (k, _) in enumerate(leads):
        by_pos.setdefault(k, []).append(i)
    for idxs in by_pos.values():
        for a, i in enumerate(idxs):
            cands = []
            for j in idxs[a + 1:]:
                lij = mono_lcm(leads[i][1], leads[j][1])
                cands.append((mono_div(lij, leads[i][1]), j, lij))
            for q, j, lij in cands:
                if any(mono_divides(q2, q) and (q2 != q or j2 < j) for q2, j2, _ in cands if j2 != j):
                    continue
                syz.append(_pair_syzygy(G, leads, i, j, lij, order, p))
            budget.check()
    if not G:
        return GroebnerBasis(new_module, new_order, [], "schreyer")
    return GroebnerBasis(new_module, new_order,
                         _sorted_elements(new_module, syz, new_order), "schreyer")


def _pair_syzygy(G, leads, i, j, lij, order, p) -> dict:
    qi = mono_div(lij, leads[i][1])
    qj = mono_div(lij, leads[j][1])
    ci = pow(G[i][leads[i]], -1, p)
    cj = pow(G[j][leads[j]], -1, p)
    s: dict = {}
    _axpy(s, G[i], ci, qi, p)
    _axpy(s, G[j], p - cj, qj, p)
    quot: dict = {}
    rem = reduce_terms(s, G, order, p, quotients=quot, leads=leads)
    if rem:
        raise GroebnerError("S-pair did not reduce to zero; input is not a Gröbner basis")
    vec = {(i, qi): ci}
    t = (j, qj)
    vec[t] = (vec.get(t, 0) - cj) % p
    for idx, qd in quot.items():
        for m, c in qd.items():
            t = (idx, m)
            v = (vec.get(t, 0) - c) % p
            if v:
                vec[t] = v
            else:
                vec.pop(t, None)
    return vec


# -- queries ----------------------------------------------------------------------

def vector_normal_form(v: VectorElement, gb: GroebnerBasis) -> VectorElement:
    if v.module != gb.module:
        raise GroebnerError("element outside the basis module")
    G = [g.terms for g in gb.elements]
    return VectorElement(v.module, reduce_terms(v.terms, G, gb.order, gb.module.ring.p, leads=gb.leads()))


def submodule_membership(v: VectorElement, gb: GroebnerBasis) -> bool:
    return vector_normal_form(v, gb).is_zero()


def is_groebner_basis(gb: GroebnerBasis) -> bool:
    """Buchberger criterion: every same-position S-pair reduces to zero."""
    p = gb.module.ring.p
    G = [g.terms for g in gb.elements]
    leads = gb.leads()
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if leads[i][0] != leads[j][0]:
                continue
            lij = mono_lcm(leads[i][1], leads[j][1])
            s: dict = {}
            _axpy(s, G[i], pow(G[i][leads[i]], -1, p), mono_div(lij, leads[i][1]), p)
            _axpy(s, G[j], p - pow(G[j][leads[j]], -1, p), mono_div(lij, leads[j][1]), p)
            if reduce_terms(s, G, gb.order, p, leads=leads):
                return False
    return True


def apply_map(vec: VectorElement, images: Sequence[VectorElement], target: FreeModuleSpec) -> VectorElement:
    """Image of ``vec`` under the map sending basis vector k to images[k]."""
    p = target.ring.p
    out: dict = {}
    for (k, m), c in vec.terms.items():
        _axpy(out, images[k].terms, c, m, p)
    return VectorElement(target, out)


# -- ideals ------------------------------------------------------------------------

def ideal_module(ring: RingSpec) -> FreeModuleSpec:
    return FreeModuleSpec(ring, (0,))


def as_vectors(polys: Iterable[Polynomial], module: FreeModuleSpec | None = None) -> list[VectorElement]:
    polys = list(polys)
    if module is None:
        if not polys:
            raise GroebnerError("empty ideal needs an explicit ring")
        module = ideal_module(polys[0].ring)
    return [VectorElement.from_components(module, [f]) for f in polys]


def ideal_groebner(polys: Sequence[Polynomial], ring: RingSpec | None = None) -> GroebnerBasis:
    ring = ring or polys[0].ring
    module = ideal_module(ring)
    return buchberger(as_vectors(polys, module), module=module)


def gb_polynomials(gb: GroebnerBasis) -> list[Polynomial]:
    """Elements of a rank-1 basis as polynomials."""
    return [g.components[0] for g in gb.elements]


def lead_monomials(gb: GroebnerBasis) -> list:
    return [m for _, m in gb.leads()]
