"""Minimal graded free resolutions, Betti tables and graded shifts."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from operator import add
from typing import Sequence

from . import budget
from .groebner import (
    FreeModuleSpec,
    GroebnerBasis,
    ModuleOrder,
    VectorElement,
    buchberger,
    syzygy_basis,
)
from .linalg import rank_mod_p
from .polyring import (
    Polynomial,
    RingSpec,
    mono_divides,
    mono_lcm,
    monomials_of_degree,
    num_monomials,
)

NEG_INF = float("-inf")


class ResolutionError(RuntimeError):
    pass


class PartialTableWarning(UserWarning):
    pass


# -- presentations ---------------------------------------------------------------

@dataclass(frozen=True)
class ModulePresentation:
    """M = coker(relations) for relations in F_0 = ⊕ S(-target_twists[k]).

    ``summands`` records the direct-sum-of-cyclics structure when known, as
    ``((twist, (generators...)), ...)``; it is what lets codimension and the
    oracle use per-summand shortcuts.
    """

    ring: RingSpec
    target_twists: tuple
    relations: tuple
    summands: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "target_twists", tuple(self.target_twists))
        object.__setattr__(self, "relations", tuple(self.relations))
        mod = self.module
        for r in self.relations:
            if r.module != mod:
                raise ResolutionError("relation outside F_0")

    @property
    def module(self) -> FreeModuleSpec:
        return FreeModuleSpec(self.ring, self.target_twists)

    @classmethod
    def cyclic(cls, ring: RingSpec, gens: Sequence[Polynomial], twist: int = 0) -> "ModulePresentation":
        mod = FreeModuleSpec(ring, (twist,))
        gens = tuple(g for g in gens if not g.is_zero())
        rels = tuple(VectorElement.from_components(mod, [g]) for g in gens)
        return cls(ring, (twist,), rels, ((twist, gens),))

    @classmethod
    def direct_sum(cls, parts: Sequence["ModulePresentation"]) -> "ModulePresentation":
        if not parts:
            raise ResolutionError("empty direct sum")
        ring = parts[0].ring
        twists, rels, summands = [], [], []
        offset = 0
        structured = all(p.summands is not None for p in parts)
        for part in parts:
            if part.ring != ring:
                raise ResolutionError("summands over different rings")
            twists.extend(part.target_twists)
        mod = FreeModuleSpec(ring, twists)
        for part in parts:
            for r in part.relations:
                rels.append(VectorElement(mod, {(k + offset, m): c for (k, m), c in r.terms.items()}))
            if structured:
                summands.extend(part.summands)
            offset += len(part.target_twists)
        return cls(ring, tuple(twists), tuple(rels), tuple(summands) if structured else None)

    @property
    def is_cyclic(self) -> bool:
        return len(self.target_twists) == 1

    def ideal(self) -> tuple:
        """Generators of I when M = S/I (untwisted cyclic)."""
        if not self.is_cyclic:
            raise ResolutionError("not a cyclic module")
        return tuple(r.components[0] for r in self.relations)

    @property
    def is_monomial(self) -> bool:
        return self.summands is not None and all(
            len(g.coeffs) == 1 for _, gens in self.summands for g in gens)

    def with_characteristic(self, p: int) -> "ModulePresentation":
        """Same integer data read over F_p (coefficients as symmetric lifts)."""
        old = self.ring.p
        ring = self.ring.with_characteristic(p)

        def lift(c):
            return c - old if c > old // 2 else c

        def poly(f):
            return Polynomial.from_terms(ring, ((lift(c), m) for m, c in f.coeffs.items()))

        if self.summands is not None:
            return ModulePresentation.direct_sum(
                [ModulePresentation.cyclic(ring, [poly(g) for g in gens], tw) for tw, gens in self.summands])
        mod = FreeModuleSpec(ring, self.target_twists)
        rels = []
        for r in self.relations:
            d = {t: lift(c) % p for t, c in r.terms.items() if lift(c) % p}
            rels.append(VectorElement(mod, d))
        return ModulePresentation(ring, self.target_twists, tuple(rels))


# -- resolutions -------------------------------------------------------------------

@dataclass
class GradedResolution:
    """Complex F_0 <- F_1 <- ... <- F_len.

    ``degrees[i]`` are the twists of F_i; ``maps[i - 1]`` is the differential
    F_i -> F_{i-1}, stored as a list of sparse columns ``{row: Polynomial}``.
    """

    ring: RingSpec
    degrees: list
    maps: list
    minimal: bool = False

    @property
    def length(self) -> int:
        return len(self.maps)

    def rank(self, i: int) -> int:
        return len(self.degrees[i]) if 0 <= i < len(self.degrees) else 0

    def row_degrees(self, step: int) -> tuple:
        return tuple(self.degrees[step - 1])

    def col_degrees(self, step: int) -> tuple:
        return tuple(self.degrees[step])

    def matrix(self, step: int) -> list:
        """Dense matrix (rows x cols) of the differential F_step -> F_{step-1}."""
        cols = self.maps[step - 1]
        zero = self.ring.zero()
        return [[col.get(r, zero) for col in cols] for r in range(self.rank(step - 1))]

    def is_zero_module(self) -> bool:
        return self.rank(0) == 0


def _vec_to_column(v: VectorElement) -> dict:
    out = {}
    for k, f in enumerate(v.components):
        if f:
            out[k] = f
    return out


def schreyer_frame(m: ModulePresentation) -> list[GroebnerBasis]:
    """Gröbner basis of the relations, then iterated Schreyer syzygies."""
    mod = m.module
    levels = [buchberger(list(m.relations), order=ModuleOrder.top(mod), module=mod)]
    while len(levels[-1]):
        if len(levels) > m.ring.num_vars + 1:
            raise ResolutionError("Schreyer tower longer than the syzygy theorem allows")
        levels.append(syzygy_basis(levels[-1]))
        budget.check()
    return levels


def resolve_schreyer(m: ModulePresentation) -> GradedResolution:
    """Free resolution from the Schreyer tower; usually not minimal."""
    levels = schreyer_frame(m)
    degrees = [tuple(m.target_twists)]
    maps = []
    for gb in levels:
        if not len(gb):
            break
        degrees.append(tuple(g.degree for g in gb.elements))
        maps.append([_vec_to_column(g) for g in gb.elements])
    return GradedResolution(m.ring, degrees, maps, minimal=False)


def resolve_minimal(m: ModulePresentation) -> GradedResolution:
    """Minimal graded free resolution of coker(relations).

    The unit ideal gives the zero module: a length-0 resolution with F_0 = 0.
    """
    return minimalize(resolve_schreyer(m))


def _find_unit(cols, alive_cols, alive_rows, col_degs, row_degs):
    # a nonzero homogeneous entry between equal twists is a unit
    for c, col in enumerate(cols):
        if not alive_cols[c]:
            continue
        dc = col_degs[c]
        for r in sorted(col):
            if alive_rows[r] and row_degs[r] == dc:
                return r, c
    return None


def _submul(target: dict, factor: dict, f: dict, p: int):
    """target -= factor * f on raw coefficient dicts, in place."""
    for m1, c1 in factor.items():
        for m2, c2 in f.items():
            m = tuple(map(add, m1, m2))
            v = (target.get(m, 0) - c1 * c2) % p
            if v:
                target[m] = v
            else:
                target.pop(m, None)


def minimalize(res: GradedResolution) -> GradedResolution:
    """Split off contractible summands S(-a) --u--> S(-a) until no differential
    has a nonzero constant entry."""
    ring = res.ring
    p = ring.p
    degs = [list(d) for d in res.degrees]
    # work on raw {monomial: coeff} dicts; Polynomial objects are rebuilt at the end
    maps = [[{r: dict(f.coeffs) for r, f in col.items()} for col in M] for M in res.maps]
    alive = [[True] * len(d) for d in degs]
    for i, B in enumerate(maps):
        # B : F_{i+1} -> F_i
        while True:
            hit = _find_unit(B, alive[i + 1], alive[i], degs[i + 1], degs[i])
            if hit is None:
                break
            r, c = hit
            colc = B[c]
            (unit,) = colc[r].values()
            uinv = pow(unit, -1, p)
            for k, col in enumerate(B):
                if k == c or not alive[i + 1][k] or r not in col:
                    continue
                factor = {m: v * uinv % p for m, v in col[r].items()}
                for row, f in colc.items():
                    target = col.setdefault(row, {})
                    _submul(target, factor, f, p)
                    if not target:
                        del col[row]
            alive[i + 1][c] = False
            alive[i][r] = False
            for col in B:
                col.pop(r, None)
            if i + 1 < len(maps):
                for col in maps[i + 1]:
                    col.pop(c, None)
            budget.check()
    # reindex survivors
    new_degs = []
    index_maps = []
    for i, d in enumerate(degs):
        idx = [k for k in range(len(d)) if alive[i][k]]
        index_maps.append({old: new for new, old in enumerate(idx)})
        new_degs.append(tuple(d[k] for k in idx))
    new_maps = []
    for i, B in enumerate(maps):
        rows = index_maps[i]
        new_maps.append([{rows[r]: Polynomial(ring, f) for r, f in col.items()}
                         for k, col in enumerate(B) if alive[i + 1][k]])
    # drop trailing zero modules
    length = len(new_maps)
    for i in range(1, len(new_degs)):
        if not new_degs[i]:
            length = i - 1
            break
    return GradedResolution(ring, new_degs[:length + 1], new_maps[:length], minimal=True)


def compose_is_zero(res: GradedResolution) -> bool:
    """Check d_i ∘ d_{i+1} = 0 exactly for every consecutive pair."""
    zero = res.ring.zero()
    for i in range(1, len(res.maps)):
        A, B = res.maps[i - 1], res.maps[i]
        for col in B:
            acc: dict = {}
            for k, f in col.items():
                for r, g in A[k].items():
                    acc[r] = acc.get(r, zero) + f * g
            if any(v for v in acc.values()):
                return False
    return True


def entries_homogeneous(res: GradedResolution) -> bool:
    for i, B in enumerate(res.maps):
        for c, col in enumerate(B):
            for r, f in col.items():
                if f and f.degree != res.degrees[i + 1][c] - res.degrees[i][r]:
                    return False
    return True


def has_unit_entries(res: GradedResolution) -> bool:
    return any(f.is_constant() for B in res.maps for col in B for f in col.values())


# -- Betti data -------------------------------------------------------------------------

@dataclass(frozen=True)
class BettiTable:
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", {k: v for k, v in sorted(self.entries.items()) if v})

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def totals(self) -> list:
        if not self.entries:
            return []
        top = max(i for i, _ in self.entries)
        return [sum(v for (i, _), v in self.entries.items() if i == k) for k in range(top + 1)]

    def records(self) -> list:
        return [{"i": i, "j": j, "beta": b} for (i, j), b in self.entries.items()]

    @classmethod
    def from_records(cls, recs) -> "BettiTable":
        return cls({(r["i"], r["j"]): r["beta"] for r in recs})

    def render(self) -> str:
        """Text grid: columns are homological degrees i, rows are j - i."""
        if not self.entries:
            return "(zero module)"
        top = max(i for i, _ in self.entries)
        rows = sorted({j - i for i, j in self.entries})
        cols = list(range(top + 1))
        totals = self.totals()
        cells = {(r, i): str(self.entries.get((i, r + i), ".")) for r in rows for i in cols}
        width = [max(len(str(i)), len(str(totals[i])), *(len(cells[(r, i)]) for r in rows)) for i in cols]
        labels = ["total:"] + [f"{r}:" for r in rows]
        lw = max(len(s) for s in labels)
        lines = [" " * lw + " " + " ".join(str(i).rjust(w) for i, w in zip(cols, width))]
        lines.append(labels[0].rjust(lw) + " " + " ".join(str(t).rjust(w) for t, w in zip(totals, width)))
        for lab, r in zip(labels[1:], rows):
            lines.append(lab.rjust(lw) + " " + " ".join(cells[(r, i)].rjust(w) for i, w in zip(cols, width)))
        return "\n".join(lines)

    __str__ = render


def betti(res: GradedResolution) -> BettiTable:
    if not res.minimal or has_unit_entries(res):
        raise ResolutionError("Betti numbers need a minimal resolution")
    counts: dict = {}
    for i, d in enumerate(res.degrees):
        for j in d:
            counts[(i, j)] = counts.get((i, j), 0) + 1
    return BettiTable(counts)


@dataclass(frozen=True)
class ShiftProfile:
    """Maximal shifts T_i, minimal shifts t_i, projective dimension, regularity.

    The zero module has pd -1, empty shift lists and regularity -inf.
    """

    max_shifts: tuple
    min_shifts: tuple
    pd: int
    reg: float

    @property
    def is_zero(self) -> bool:
        return self.pd < 0

    def T(self, i: int):
        return self.max_shifts[i] if 0 <= i <= self.pd else NEG_INF

    def t(self, i: int):
        return self.min_shifts[i] if 0 <= i <= self.pd else math.inf

    def to_dict(self) -> dict:
        return {
            "T": list(self.max_shifts),
            "t": list(self.min_shifts),
            "pd": self.pd,
            "reg": None if self.is_zero else int(self.reg),
        }

    @classmethod
    def from_max_shifts(cls, T: Sequence[int], t: Sequence[int] | None = None) -> "ShiftProfile":
        T = tuple(T)
        t = tuple(t) if t is not None else T
        reg = max((x - i for i, x in enumerate(T)), default=NEG_INF)
        return cls(T, t, len(T) - 1, reg)


def shifts(b: BettiTable) -> ShiftProfile:
    if not b.entries:
        return ShiftProfile((), (), -1, NEG_INF)
    pd = max(i for i, _ in b.entries)
    T = tuple(max(j for (i, j) in b.entries if i == k) for k in range(pd + 1))
    t = tuple(min(j for (i, j) in b.entries if i == k) for k in range(pd + 1))
    return ShiftProfile(T, t, pd, max(x - i for i, x in enumerate(T)))


def profile(m: ModulePresentation) -> ShiftProfile:
    return shifts(betti(resolve_minimal(m)))


# -- Koszul homology oracle --------------------------------------------------------------

def _subset_sign(sigma: tuple, t: int) -> int:
    return -1 if sigma.index(t) % 2 else 1


def _monomial_summand_betti(n, twist, gens, cap, p, out):
    """Multigraded Koszul homology of S/(monomials), added into ``out``."""
    mons = [tuple(m) for m in gens]
    if any(sum(m) == 0 for m in mons):
        return  # unit ideal
    if not mons:
        out[(0, twist)] = out.get((0, twist), 0) + 1
        return
    lcm = mons[0]
    for m in mons[1:]:
        lcm = mono_lcm(lcm, m)

    def in_ideal(a):
        return any(mono_divides(g, a) for g in mons)

    for alpha in itertools.product(*(range(e + 1) for e in lcm)):
        j = sum(alpha)
        if j + twist > cap:
            continue
        support = [t for t in range(n) if alpha[t] > 0]
        # basis of (K_i ⊗ S/I)_alpha: subsets sigma of support with x^(alpha - e_sigma) standard
        basis = {}
        for i in range(len(support) + 1):
            basis[i] = []
            for sigma in itertools.combinations(support, i):
                rest = list(alpha)
                for t in sigma:
                    rest[t] -= 1
                if not in_ideal(rest):
                    basis[i].append(sigma)
        ranks = {}
        for i in range(1, len(support) + 1):
            src, tgt = basis[i], basis[i - 1]
            if not src or not tgt:
                ranks[i] = 0
                continue
            tindex = {s: r for r, s in enumerate(tgt)}
            mat = [[0] * len(src) for _ in tgt]
            for c, sigma in enumerate(src):
                for t in sigma:
                    face = tuple(s for s in sigma if s != t)
                    r = tindex.get(face)
                    if r is not None:
                        mat[r][c] = _subset_sign(sigma, t) % p
            ranks[i] = rank_mod_p(mat, p)
        for i in range(len(support) + 1):
            b = len(basis[i]) - ranks.get(i, 0) - ranks.get(i + 1, 0)
            if b:
                out[(i, j + twist)] = out.get((i, j + twist), 0) + b


def certified_cap(m: ModulePresentation) -> int:
    """A degree bound past which no Betti number of M can live.

    Betti numbers of M are bounded by those of its lead-term module, whose
    multigraded Betti numbers sit below the lcm of the leads in each position.
    """
    gb = buchberger(list(m.relations), module=m.module)
    lcms: dict = {}
    for k, mono in gb.leads():
        lcms[k] = mono_lcm(lcms[k], mono) if k in lcms else mono
    return max((tw + sum(lcms.get(k, ())) for k, tw in enumerate(m.target_twists)), default=0)


def koszul_betti_oracle(m: ModulePresentation, degree_cap: int | None = None) -> BettiTable:
    """β_ij = dim_k H_i(K(x_1..x_n) ⊗ M)_j for j ≤ degree_cap.

    Monomial direct sums of cyclics use the fine (multi)grading; anything
    else uses normal forms modulo a Gröbner basis and dense ranks.  Emits a
    :class:`PartialTableWarning` when the cap is below a certified bound.
    """
    n = m.ring.num_vars
    p = m.ring.p
    if m.is_monomial:
        bound = 0
        for tw, gens in m.summands:
            lcm = m.ring.one()
            for g in gens:
                lcm = mono_lcm(lcm, next(iter(g.coeffs)))
            bound = max(bound, tw + sum(lcm))
        if degree_cap is None:
            degree_cap = max(tw + sum(g.degree for g in gens) for tw, gens in m.summands)
        if degree_cap < bound:
            warnings.warn(f"degree cap {degree_cap} below certified bound {bound}; table may be partial",
                          PartialTableWarning, stacklevel=2)
        out: dict = {}
        for tw, gens in m.summands:
            _monomial_summand_betti(n, tw, [next(iter(g.coeffs)) for g in gens], degree_cap, p, out)
        return BettiTable(out)
    bound = certified_cap(m)
    if degree_cap is None:
        degree_cap = bound
    elif degree_cap < bound:
        warnings.warn(f"degree cap {degree_cap} below certified bound {bound}; table may be partial",
                      PartialTableWarning, stacklevel=2)
    return BettiTable(_graded_koszul_betti(m, degree_cap))


def _graded_koszul_betti(m: ModulePresentation, cap: int) -> dict:
    from .groebner import reduce_terms

    ring = m.ring
    n, p = ring.num_vars, ring.p
    mod = m.module
    gb = buchberger(list(m.relations), module=mod)
    G = [g.terms for g in gb.elements]
    leads = gb.leads()
    lead_by_pos: dict = {}
    for k, mono in leads:
        lead_by_pos.setdefault(k, []).append(mono)

    def standard(d):
        out = []
        for k, tw in enumerate(m.target_twists):
            if d - tw < 0:
                continue
            for mono in monomials_of_degree(n, d - tw):
                if not any(mono_divides(l, mono) for l in lead_by_pos.get(k, ())):
                    out.append((k, mono))
        return out

    std_cache: dict = {}

    def std(d):
        if d not in std_cache:
            std_cache[d] = standard(d)
        return std_cache[d]

    def nf_times_var(term, t):
        k, mono = term
        mm = list(mono)
        mm[t] += 1
        return reduce_terms({(k, tuple(mm)): 1}, G, gb.order, p, leads=leads)

    lo = min(m.target_twists, default=0)
    out: dict = {}
    for j in range(lo, cap + 1):
        dims, ranks = {}, {}
        bases = {}
        for i in range(n + 1):
            bases[i] = [(sigma, b) for sigma in itertools.combinations(range(n), i) for b in std(j - i)]
            dims[i] = len(bases[i])
        for i in range(1, n + 1):
            src, tgt = bases[i], bases[i - 1]
            if not src or not tgt:
                ranks[i] = 0
                continue
            tindex = {s: r for r, s in enumerate(tgt)}
            mat = [[0] * len(src) for _ in tgt]
            for c, (sigma, b) in enumerate(src):
                for t in sigma:
                    face = tuple(s for s in sigma if s != t)
                    sign = _subset_sign(sigma, t)
                    for term, coeff in nf_times_var(b, t).items():
                        r = tindex[(face, term)]
                        mat[r][c] = (mat[r][c] + sign * coeff) % p
            ranks[i] = rank_mod_p(mat, p)
            budget.check()
        for i in range(n + 1):
            b = dims[i] - ranks.get(i, 0) - ranks.get(i + 1, 0)
            if b:
                out[(i, j)] = b
    return out


# -- Hilbert function cross-check ------------------------------------------------------------

def hilbert_function(m: ModulePresentation, d: int, gb: GroebnerBasis | None = None) -> int:
    """dim_k M_d by counting standard monomials of the lead-term module."""
    gb = gb or buchberger(list(m.relations), module=m.module)
    n = m.ring.num_vars
    lead_by_pos: dict = {}
    for k, mono in gb.leads():
        lead_by_pos.setdefault(k, []).append(mono)
    total = 0
    for k, tw in enumerate(m.target_twists):
        if d - tw < 0:
            continue
        ls = lead_by_pos.get(k, [])
        total += sum(1 for mono in monomials_of_degree(n, d - tw)
                     if not any(mono_divides(l, mono) for l in ls))
    return total


def hilbert_from_betti(b: BettiTable, n: int, d: int) -> int:
    return sum((-1) ** i * beta * num_monomials(n, d - j) for (i, j), beta in b.entries.items())


def hilbert_check(m: ModulePresentation, b: BettiTable, cap: int) -> list:
    """Degrees d ≤ cap where the Betti alternating sum disagrees with the
    lead-term Hilbert function (empty when consistent)."""
    gb = buchberger(list(m.relations), module=m.module)
    n = m.ring.num_vars
    lo = min(m.target_twists, default=0)
    return [d for d in range(lo, cap + 1) if hilbert_function(m, d, gb) != hilbert_from_betti(b, n, d)]


# -- short exact sequence check ------------------------------------------------------------------

def first_syzygy_presentation(m: ModulePresentation) -> ModulePresentation:
    """Presentation of N = image(relations) ⊆ F_0 taken from the Schreyer
    frame: N = coker(F_2 -> F_1) with F_1 the Gröbner basis of N."""
    frame = schreyer_frame(m)
    gb = frame[0]
    syz = frame[1] if len(frame) > 1 else None
    twists = tuple(g.degree for g in gb.elements)
    mod = FreeModuleSpec(m.ring, twists)
    rels = tuple(VectorElement(mod, s.terms) for s in syz.elements) if syz is not None else ()
    return ModulePresentation(m.ring, twists, rels)


def free_profile(twists: Sequence[int]) -> ShiftProfile:
    if not twists:
        return ShiftProfile((), (), -1, NEG_INF)
    return ShiftProfile((max(twists),), (min(twists),), 0, max(twists))


def ses_shift_check(m: ModulePresentation, strict: bool = True) -> dict:
    """Shift inequalities on 0 -> N -> F_0 -> M -> 0, N the relation module.

    For every i:  T_i(F_0) <= max(T_i(N), T_i(M)),
                  T_i(N)   <= max(T_i(F_0), T_{i+1}(M)),
                  T_i(M)   <= max(T_i(F_0), T_{i-1}(N)).
    With ``strict`` any failure raises ResolutionError; otherwise failures
    are listed in the returned report.
    """
    pm = profile(m)
    pn = profile(first_syzygy_presentation(m))
    pf = free_profile(m.target_twists)
    n = m.ring.num_vars
    failures = []
    for i in range(n + 2):
        checks = (
            ("sub", pf.T(i), max(pn.T(i), pm.T(i))),
            ("kernel", pn.T(i), max(pf.T(i), pm.T(i + 1))),
            ("quotient", pm.T(i), max(pf.T(i), pn.T(i - 1))),
        )
        for name, lhs, rhs in checks:
            if lhs > rhs:
                failures.append({"i": i, "inequality": name, "lhs": int(lhs),
                                 "rhs": None if math.isinf(rhs) else int(rhs)})
    report = {
        "M": pm.to_dict(),
        "N": pn.to_dict(),
        "F0": pf.to_dict(),
        "failures": failures,
        "ok": not failures,
    }
    if failures and strict:
        raise ResolutionError(f"shift inequalities failed on first-syzygy sequence: {failures}")
    return report
