"""Search, verify and refute monochromatic matrix-image patterns such as
{AX, AX+BY, AX·BY}, with a finite version of the lifting argument behind them."""

from .coloring import Coloring, canonicalize, enumerate_colorings, parse_coloring
from .exact import RatMatrix, mat_apply, parse_matrix, scale_vector, to_nat_image
from .pattern import Component, PatternSpec, Witness, find_witness, min_forcing_R, pattern_values, verify_witness

__version__ = "0.1.0"

__all__ = [
    "Coloring",
    "Component",
    "PatternSpec",
    "RatMatrix",
    "Witness",
    "canonicalize",
    "enumerate_colorings",
    "find_witness",
    "mat_apply",
    "min_forcing_R",
    "parse_coloring",
    "parse_matrix",
    "pattern_values",
    "scale_vector",
    "to_nat_image",
    "verify_witness",
]
