"""Generalized Cayley maps on algebraic groups: exact constructions and
degree computations over the rationals and finite fields."""

from .constructions import (
    classical_cayley,
    eliminate_sextic,
    g2_candidate,
    known_table,
    named_candidate,
    sln_full_candidate,
)
from .engine import (
    MapCandidate,
    brute_force_degree,
    check_dominance,
    check_equivariance,
    check_target_containment,
    projection_degree,
)
from .exactfield import GF, QQ
from .polylab import MultiPoly, RatFunc

__all__ = [
    "GF", "QQ", "MultiPoly", "RatFunc", "MapCandidate",
    "brute_force_degree", "projection_degree", "check_equivariance", "check_dominance",
    "check_target_containment", "classical_cayley", "eliminate_sextic", "g2_candidate",
    "known_table", "named_candidate", "sln_full_candidate",
]
