"""Line-oriented job files.

    ring p=32003 vars=x,y,z order=degrevlex
    ideal: x^2; x*y            # cyclic module S/I
    summand: x^2; y^2          # repeatable: direct sum of cyclics
    ann: x^2                   # optional ideal J inside Ann(M)
    checks: all                # optional
    seed: 7                    # optional
    cap: 12                    # optional oracle degree cap

``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from ..polyring import (
    DEFAULT_CHARACTERISTIC,
    ParseError,
    Polynomial,
    RingError,
    RingSpec,
    is_prime,
    parse_polynomial,
)
from ..resolution import ModulePresentation

BOUND_TAGS = (
    "structural", "oracle", "growth", "ses", "codim1", "regthm", "main",
    "cmreg", "common", "maincor", "ehu1", "ehu2",
)
ALIASES = {
    "all": set(BOUND_TAGS),
    "conj": {"ehu1", "ehu2"},
}


def parse_checks(text: str) -> frozenset:
    out = set()
    for tok in re.split(r"[,\s]+", text.strip()):
        if not tok:
            continue
        if tok in ALIASES:
            out |= ALIASES[tok]
        elif tok in BOUND_TAGS:
            out.add(tok)
        else:
            raise ValueError(f"unknown check tag {tok!r}")
    return frozenset(out)


@dataclass
class JobSpec:
    ring: RingSpec
    summands: list                 # list of generator lists; one entry = cyclic
    annihilator: list | None = None
    checks: frozenset = field(default_factory=lambda: frozenset(BOUND_TAGS))
    seed: int = 0
    degree_cap: int | None = None
    cyclic: bool = True

    def presentation(self) -> ModulePresentation:
        parts = [ModulePresentation.cyclic(self.ring, gens) for gens in self.summands]
        if self.cyclic and len(parts) == 1:
            return parts[0]
        return ModulePresentation.direct_sum(parts)

    @property
    def ideal(self) -> list:
        if not self.cyclic:
            raise ValueError("job is a direct sum, not a cyclic module")
        return list(self.summands[0])

    def to_text(self) -> str:
        lines = [self.ring.header()]
        if self.cyclic:
            lines.append("ideal: " + "; ".join(str(g) for g in self.summands[0]))
        else:
            for gens in self.summands:
                lines.append("summand: " + "; ".join(str(g) for g in gens))
        if self.annihilator is not None:
            lines.append("ann: " + "; ".join(str(g) for g in self.annihilator))
        if frozenset(self.checks) != frozenset(BOUND_TAGS):
            lines.append("checks: " + ",".join(sorted(self.checks)))
        lines.append(f"seed: {self.seed}")
        if self.degree_cap is not None:
            lines.append(f"cap: {self.degree_cap}")
        return "\n".join(lines) + "\n"

    def with_characteristic(self, p: int) -> "JobSpec":
        old = self.ring.p
        ring = self.ring.with_characteristic(p)

        def lift(f):
            return Polynomial.from_terms(ring, ((c - old if c > old // 2 else c, m)
                                                for m, c in f.coeffs.items()))

        return replace(
            self,
            ring=ring,
            summands=[[lift(g) for g in gens] for gens in self.summands],
            annihilator=None if self.annihilator is None else [lift(g) for g in self.annihilator],
        )


def _parse_ring(line: str, lineno: int) -> RingSpec:
    p, names, order = DEFAULT_CHARACTERISTIC, None, "degrevlex"
    for mt in re.finditer(r"(\S+)", line[len("ring"):]):
        col = mt.start(1) + len("ring") + 1
        tok = mt.group(1)
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", lineno, col)
        key, val = tok.split("=", 1)
        if key == "p":
            if not val.isdigit():
                raise ParseError(f"characteristic must be an integer, got {val!r}", lineno, col)
            p = int(val)
            if not is_prime(p):
                raise ParseError(f"characteristic {p} is not prime", lineno, col)
        elif key == "vars":
            names = [v for v in val.split(",") if v]
        elif key == "order":
            order = val
        else:
            raise ParseError(f"unknown ring option {key!r}", lineno, col)
    if not names:
        raise ParseError("ring needs vars=...", lineno, 1)
    try:
        return RingSpec(p, tuple(names), order)
    except RingError as e:
        raise ParseError(str(e), lineno, 1) from None


def _parse_poly_list(ring: RingSpec, body: str, lineno: int, col0: int) -> list:
    out = []
    pos = 0
    for piece in body.split(";"):
        stripped = piece.strip()
        if stripped:
            lead = len(piece) - len(piece.lstrip())
            out.append(parse_polynomial(ring, stripped, lineno, col0 + pos + lead))
        pos += len(piece) + 1
    return out


def parse_input(text: str) -> JobSpec:
    """Parse a job file; raises ParseError with line and column."""
    ring = None
    ideal = None
    summands = []
    ann = None
    checks = frozenset(BOUND_TAGS)
    seed = 0
    cap = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        line = line.strip()
        if line.startswith("ring") and (len(line) == 4 or line[4].isspace()):
            if ring is not None:
                raise ParseError("duplicate ring line", lineno, indent + 1)
            ring = _parse_ring(line, lineno)
            continue
        if ":" not in line:
            raise ParseError(f"unrecognized line {line!r}", lineno, indent + 1)
        key, body = line.split(":", 1)
        key = key.strip()
        col0 = indent + len(key) + 2
        if key in ("ideal", "summand", "ann") and ring is None:
            raise ParseError(f"{key}: before the ring line", lineno, indent + 1)
        if key == "ideal":
            if ideal is not None or summands:
                raise ParseError("only one ideal: block, and not mixed with summand:", lineno, indent + 1)
            ideal = _parse_poly_list(ring, body, lineno, col0)
        elif key == "summand":
            if ideal is not None:
                raise ParseError("summand: cannot be mixed with ideal:", lineno, indent + 1)
            summands.append(_parse_poly_list(ring, body, lineno, col0))
        elif key == "ann":
            ann = _parse_poly_list(ring, body, lineno, col0)
        elif key == "checks":
            try:
                checks = parse_checks(body)
            except ValueError as e:
                raise ParseError(str(e), lineno, col0) from None
        elif key in ("seed", "cap"):
            val = body.strip()
            if not re.fullmatch(r"-?\d+", val):
                raise ParseError(f"{key} must be an integer", lineno, col0)
            if key == "seed":
                seed = int(val)
            else:
                cap = int(val)
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, indent + 1)
    if ring is None:
        raise ParseError("missing ring line", 1, 1)
    if ideal is None and not summands:
        raise ParseError("no ideal: or summand: block", 1, 1)
    if ideal is not None:
        return JobSpec(ring, [ideal], ann, checks, seed, cap, cyclic=True)
    return JobSpec(ring, summands, ann, checks, seed, cap, cyclic=False)


def read_job(path) -> JobSpec:
    with open(path) as fh:
        return parse_input(fh.read())
