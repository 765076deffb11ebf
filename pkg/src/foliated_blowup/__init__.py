"""Exact algebra for blowups of foliated ideal sheaves.

Modules:

* :mod:`.algebra` - rational polynomials, Laurent polynomials, points
* :mod:`.groebner` - Gröbner bases, membership, quotients, syzygies
* :mod:`.derivations` - vector fields, brackets, R-monomiality
* :mod:`.fitting` - Fitting ideals, tangency chains, differential closure
* :mod:`.blowup` - chart maps, transforms, divisor ledger, towers
* :mod:`.admissibility` - admissible centers, splits, eigen-generators
* :mod:`.session` - the session language, runner and CLI
"""

from .algebra import LaurentPolynomial, Point, PolyRing, Polynomial
from .derivations import CoordinateChange, Derivation, DistributionGens, LaurentDerivation
from .groebner import GroebnerBasis, Ideal, MonomialOrder

__version__ = "0.1.0"

__all__ = [
    "PolyRing", "Polynomial", "LaurentPolynomial", "Point",
    "Ideal", "GroebnerBasis", "MonomialOrder",
    "Derivation", "LaurentDerivation", "DistributionGens", "CoordinateChange",
]
