"""Seeded random instances."""

from __future__ import annotations

import random
from typing import Sequence

from ..invariants import codim_ideal
from ..polyring import (
    DEFAULT_CHARACTERISTIC,
    Polynomial,
    RingSpec,
    mono_divides,
    monomials_of_degree,
)


class GenerationError(RuntimeError):
    pass


def default_ring(n: int, p: int = DEFAULT_CHARACTERISTIC, order: str = "degrevlex") -> RingSpec:
    names = "xyzw" if n <= 4 else None
    if names:
        return RingSpec(p, tuple(names[:n]), order)
    return RingSpec.make(n, p, order)


def minimal_monomials(monos) -> list:
    """Divisibility-reduced, deduplicated, sorted by (degree, lex-descending)."""
    monos = sorted(set(monos), key=lambda m: (sum(m), tuple(-e for e in m)))
    keep = []
    for m in monos:
        if not any(mono_divides(k, m) for k in keep):
            keep.append(m)
    return keep


def gen_monomial_ideal(n: int, max_deg: int, num_gens: int, seed: int,
                       ring: RingSpec | None = None) -> list[Polynomial]:
    """num_gens random monomials of degree 1..max_deg, reduced to a minimal
    generating set."""
    if n < 1 or max_deg < 1 or num_gens < 1:
        raise GenerationError("parameters must be positive")
    ring = ring or default_ring(n)
    rng = random.Random(seed)
    monos = []
    for _ in range(num_gens):
        d = rng.randint(1, max_deg)
        # uniform composition of d into n parts via stars and bars
        cuts = sorted(rng.sample(range(d + n - 1), n - 1))
        prev, exps = -1, []
        for c in cuts + [d + n - 1]:
            exps.append(c - prev - 1)
            prev = c
        monos.append(tuple(exps))
    return [ring.monomial(m) for m in minimal_monomials(monos)]


def random_form(ring: RingSpec, d: int, rng: random.Random) -> Polynomial:
    p = ring.p
    return Polynomial.from_terms(ring, ((rng.randrange(p), m) for m in monomials_of_degree(ring.num_vars, d)))


def gen_generic_forms(n: int, degrees: Sequence[int], seed: int, ring: RingSpec | None = None,
                      retries: int = 16) -> list[Polynomial]:
    """Dense random forms of the given degrees, redrawn until they cut out
    codimension len(degrees) (a complete intersection)."""
    ring = ring or default_ring(n)
    if len(degrees) > ring.num_vars:
        raise GenerationError("more forms than variables cannot be a complete intersection")
    rng = random.Random(seed)
    for _ in range(retries):
        forms = [random_form(ring, d, rng) for d in degrees]
        if not all(forms):
            continue
        if not forms or codim_ideal(forms, ring) == len(forms):
            return forms
    raise GenerationError(f"no complete intersection after {retries} draws")


def instance_seed(seed: int, index: int) -> int:
    return (seed * 1_000_003 + index) % (2 ** 61 - 1)
