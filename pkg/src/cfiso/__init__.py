"""cfiso: continued-fraction and 2-adic complexity analysis of sequences.

The package computes, over any finite field GF(q):

- the continued-fraction expansion of the power series attached to a
  sequence, exposed as an online length-preserving transform of the
  sequence (an isometry for the usual ultrametric),
- linear complexity profiles, deviation walks and jump statistics,
- exact counting and recurrence-time formulas for those statistics plus a
  Monte Carlo engine for their fluctuation laws,
- the analogous 2-adic approximation transform built on integer lattices.
"""

from .field import FieldSpec, make_field
from .algebra import NEG_INFINITY, Polynomial, SeriesPrefix, PrecisionExhausted

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "make_field",
    "NEG_INFINITY",
    "Polynomial",
    "SeriesPrefix",
    "PrecisionExhausted",
    "__version__",
]
