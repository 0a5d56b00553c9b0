"""Graded free resolutions over F_p and checks of shift bounds for graded modules."""

__version__ = "0.1.0"

from .polyring import DEFAULT_CHARACTERISTIC, Polynomial, RingSpec, parse_polynomial  # noqa: E402
from .groebner import buchberger, syzygy_basis  # noqa: E402
from .resolution import (  # noqa: E402
    BettiTable,
    GradedResolution,
    ModulePresentation,
    ShiftProfile,
    betti,
    minimalize,
    profile,
    resolve_minimal,
    resolve_schreyer,
    shifts,
)
from .invariants import compute_invariants, find_regular_sequence  # noqa: E402

__all__ = [
    "DEFAULT_CHARACTERISTIC", "Polynomial", "RingSpec", "parse_polynomial",
    "buchberger", "syzygy_basis",
    "BettiTable", "GradedResolution", "ModulePresentation", "ShiftProfile",
    "betti", "minimalize", "profile", "resolve_minimal", "resolve_schreyer", "shifts",
    "compute_invariants", "find_regular_sequence",
]
