"""Series in C_<((x, y)) for an additive order: encodings, expansion, roots."""

from .encoding import PuiseuxEncoding, monoid_heap
from .expand import apply_poly, expand_ratfun
from .npa import newton_puiseux
from .positive import positive_part
from .support import SupportVertex, support_vertices

__all__ = [
    "PuiseuxEncoding",
    "SupportVertex",
    "apply_poly",
    "expand_ratfun",
    "monoid_heap",
    "newton_puiseux",
    "positive_part",
    "support_vertices",
]
