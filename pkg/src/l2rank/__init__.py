"""Exact and certified estimates of first L2-Betti numbers and normal rank
for finitely presented groups."""
from .kernels import BACKEND
from .presentations import (
    GroupRingElement,
    GroupRingMatrix,
    ParseError,
    Presentation,
    TorsionPresentation,
    Word,
    parse_presentation,
    parse_ring_matrix,
    parse_word,
)
from .fixtures import load_fixture

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GroupRingElement",
    "GroupRingMatrix",
    "ParseError",
    "Presentation",
    "TorsionPresentation",
    "Word",
    "load_fixture",
    "parse_presentation",
    "parse_ring_matrix",
    "parse_word",
]
