"""Homogeneous polynomials over a prime field.

Monomials are exponent tuples.  A :class:`Polynomial` stores its terms in a
dict keyed by monomial; the ``terms`` view lists them in descending order
for the ring's monomial order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import comb
from operator import add, sub
from typing import Iterable, Mapping, Sequence

DEFAULT_CHARACTERISTIC = 32003
ORDERS = ("degrevlex", "deglex", "lex")

Monomial = tuple  # tuple of nonnegative ints, one per variable


class RingError(ValueError):
    pass


class HomogeneityError(RingError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


# -- monomial helpers -------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(add, a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a."""
    return tuple(map(sub, a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent vectors of length n summing to d, lex-descending."""
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return out


def _degrevlex_key(m: Monomial) -> tuple:
    return (sum(m),) + tuple(-e for e in reversed(m))


def _deglex_key(m: Monomial) -> tuple:
    return (sum(m),) + tuple(m)


def _lex_key(m: Monomial) -> tuple:
    return tuple(m)


_ORDER_KEYS = {
    "degrevlex": _degrevlex_key,
    "deglex": _deglex_key,
    "lex": _lex_key,
}


# -- ring ------------------------------------------------------------------

@dataclass(frozen=True)
class RingSpec:
    """Standard-graded polynomial ring F_p[x_1..x_n] with a monomial order."""

    characteristic: int
    var_names: tuple
    order: str = "degrevlex"

    def __post_init__(self):
        object.__setattr__(self, "var_names", tuple(self.var_names))
        if not is_prime(self.characteristic):
            raise RingError(f"characteristic {self.characteristic} is not prime")
        if not self.var_names:
            raise RingError("ring needs at least one variable")
        if len(set(self.var_names)) != len(self.var_names):
            raise RingError(f"duplicate variable names in {self.var_names}")
        for v in self.var_names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise RingError(f"bad variable name {v!r}")
        if self.order not in _ORDER_KEYS:
            raise RingError(f"unknown monomial order {self.order!r}")

    @classmethod
    def make(cls, var_names, characteristic=DEFAULT_CHARACTERISTIC, order="degrevlex"):
        if isinstance(var_names, str):
            var_names = [v.strip() for v in var_names.split(",") if v.strip()]
        elif isinstance(var_names, int):
            var_names = [f"x{i + 1}" for i in range(var_names)]
        return cls(characteristic, tuple(var_names), order)

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    @property
    def p(self) -> int:
        return self.characteristic

    def with_characteristic(self, p: int) -> "RingSpec":
        return RingSpec(p, self.var_names, self.order)

    @property
    def order_key(self):
        """Sort key on monomials: larger key means larger monomial."""
        return _ORDER_KEYS[self.order]

    def one(self) -> Monomial:
        return (0,) * self.num_vars

    def var_monomial(self, i: int) -> Monomial:
        e = [0] * self.num_vars
        e[i] = 1
        return tuple(e)

    # construction helpers
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {self.one(): c} if c else {})

    def gen(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.var_names.index(i)
        return Polynomial(self, {self.var_monomial(i): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.num_vars)]

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.num_vars or any(e < 0 for e in exps):
            raise RingError(f"bad exponent vector {exps}")
        return Polynomial(self, {exps: coeff % self.p} if coeff % self.p else {})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(self, text)

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.var_names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def header(self) -> str:
        return f"ring p={self.p} vars={','.join(self.var_names)} order={self.order}"


# -- polynomials -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Polynomial:
    """Homogeneous polynomial; ``coeffs`` maps monomial -> nonzero residue."""

    ring: RingSpec
    coeffs: Mapping = field(repr=False)

    def __post_init__(self):
        degs = {sum(m) for m in self.coeffs}
        if len(degs) > 1:
            raise HomogeneityError(f"inhomogeneous polynomial with degrees {sorted(degs)}")

    @classmethod
    def from_terms(cls, ring: RingSpec, terms: Iterable) -> "Polynomial":
        """Build from (coefficient, monomial) pairs, combining like terms."""
        d: dict = {}
        p = ring.p
        for c, m in terms:
            m = tuple(m)
            d[m] = (d.get(m, 0) + c) % p
        return cls(ring, {m: c for m, c in d.items() if c})

    @property
    def terms(self) -> list:
        key = self.ring.order_key
        return [(self.coeffs[m], m) for m in sorted(self.coeffs, key=key, reverse=True)]

    @property
    def degree(self):
        """Total degree, or None for the zero polynomial."""
        for m in self.coeffs:
            return sum(m)
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return self.degree == 0

    def lead_monomial(self) -> Monomial:
        return max(self.coeffs, key=self.ring.order_key)

    def lead_coeff(self) -> int:
        return self.coeffs[self.lead_monomial()]

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingError("polynomials live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return poly_add(self, other)

    def __neg__(self) -> "Polynomial":
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self.coeffs.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return poly_add(self, -other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return self.scale(other)
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = self.ring.const(1)
        for _ in range(e):
            out = poly_mul(out, self)
        return out

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: v * c % p for m, v in self.coeffs.items()})

    def mul_monomial(self, mono: Monomial, c: int = 1) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {mono_mul(m, mono): v * c % p for m, v in self.coeffs.items()})

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(pow(self.lead_coeff(), -1, self.ring.p))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        p = self.ring.p
        out = []
        for c, m in self.terms:
            mono = self.ring.format_monomial(m)
            sign = "+"
            # print residues above p/2 as negatives
            if c > p // 2:
                sign, c = "-", p - c
            if mono == "1":
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            out.append((sign, body))
        first_sign, first = out[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    __repr__ = __str__


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    if f.coeffs and g.coeffs and f.degree != g.degree:
        raise HomogeneityError(f"cannot add polynomials of degrees {f.degree} and {g.degree}")
    p = f.ring.p
    d = dict(f.coeffs)
    for m, c in g.coeffs.items():
        v = (d.get(m, 0) + c) % p
        if v:
            d[m] = v
        else:
            d.pop(m, None)
    return Polynomial(f.ring, d)


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    p = f.ring.p
    d: dict = {}
    for m1, c1 in f.coeffs.items():
        for m2, c2 in g.coeffs.items():
            m = mono_mul(m1, m2)
            d[m] = (d.get(m, 0) + c1 * c2) % p
    return Polynomial(f.ring, {m: c for m, c in d.items() if c})


def normal_form(f: Polynomial, divisors: Sequence[Polynomial]) -> Polynomial:
    """Remainder of f on division by ``divisors``.

    The largest reducible term is always eliminated first, using the first
    divisor (in list order) whose lead monomial divides it.
    """
    ring = f.ring
    p = ring.p
    key = ring.order_key
    leads = []
    for g in divisors:
        f._check(g)
        if g.is_zero():
            raise RingError("zero divisor polynomial")
        lm = g.lead_monomial()
        leads.append((lm, pow(g.coeffs[lm], -1, p), g))
    work = dict(f.coeffs)
    rem = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for lm, inv, g in leads:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                s = c * inv % p
                for gm, gc in g.coeffs.items():
                    if gm == lm:
                        continue
                    t = mono_mul(gm, q)
                    v = (work.get(t, 0) - s * gc) % p
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
    return Polynomial(ring, rem)


# -- parsing -------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            break
        num, name, sym = mt.groups()
        col = mt.start(mt.lastindex) + 1
        if num is not None:
            toks.append(("num", int(num), col))
        elif name is not None:
            toks.append(("var", name, col))
        else:
            toks.append(("sym", sym, col))
        pos = mt.end()
    toks.append(("end", None, len(text) + 1))
    return toks


class _Parser:
    # Works on sparse dicts so intermediate sums need not be homogeneous;
    # homogeneity is checked once on the final result.

    def __init__(self, ring: RingSpec, text: str, line: int, col_offset: int):
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0
        self.line = line
        self.col_offset = col_offset

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, self.line, tok[2] + self.col_offset)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> dict:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        d = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return d

    def expr(self) -> dict:
        sign = 1
        if self.peek()[:2] == ("sym", "-"):
            self.take()
            sign = -1
        elif self.peek()[:2] == ("sym", "+"):
            self.take()
        acc = self._scaled(self.term(), sign)
        while self.peek()[:2] in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            acc = self._add(acc, self._scaled(self.term(), 1 if op == "+" else -1))
        return acc

    def term(self) -> dict:
        acc = self.factor()
        while self.peek()[:2] == ("sym", "*"):
            self.take()
            acc = self._mul(acc, self.factor())
        return acc

    def factor(self) -> dict:
        base = self.atom()
        if self.peek()[:2] == ("sym", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.error("exponent must be a nonnegative integer", tok)
            out = {self.ring.one(): 1}
            for _ in range(tok[1]):
                out = self._mul(out, base)
            return out
        return base

    def atom(self) -> dict:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return {self.ring.one(): val % self.ring.p} if val % self.ring.p else {}
        if kind == "var":
            if val not in self.ring.var_names:
                self.error(f"unknown variable {val!r}", tok)
            return {self.ring.var_monomial(self.ring.var_names.index(val)): 1}
        if (kind, val) == ("sym", "("):
            inner = self.expr()
            if self.take()[:2] != ("sym", ")"):
                self.error("expected ')'", self.toks[self.i - 1])
            return inner
        self.error(f"unexpected {val!r}" if kind != "end" else "unexpected end of input", tok)

    def _scaled(self, d, s):
        p = self.ring.p
        return {m: c * s % p for m, c in d.items() if c * s % p}

    def _add(self, a, b):
        p = self.ring.p
        out = dict(a)
        for m, c in b.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def _mul(self, a, b):
        p = self.ring.p
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = mono_mul(m1, m2)
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return {m: c for m, c in out.items() if c}


def parse_polynomial(ring: RingSpec, text: str, line: int = 1, column: int = 1) -> Polynomial:
    """Parse e.g. ``x1^2*x2^4 + 3*y1*y2``; coefficients are reduced mod p.

    Parentheses are accepted.  Inhomogeneous input raises ParseError.
    """
    d = _Parser(ring, text, line, column - 1).parse()
    degs = sorted({sum(m) for m in d})
    if len(degs) > 1:
        raise ParseError(f"polynomial is not homogeneous (degrees {degs})", line, column)
    return Polynomial(ring, d)


def num_monomials(n: int, d: int) -> int:
    """dim_k S_d for S with n variables (0 for negative d)."""
    if d < 0:
        return 0
    return comb(d + n - 1, n - 1)
