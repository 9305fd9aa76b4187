"""Contour-integral spectral tools for meromorphic matrix-valued functions.

The package computes, at dense-matrix scale: Riesz projections and
eigenvalue multiplicities, Laurent data and principal parts, winding-number
indices of meromorphic matrix functions, degeneracy-peeling factorizations
with partial multiplicities, the transfer-function calculus of factored
perturbations, and Weyl functions of boundary triples for dual pairs, with
cross-checked index/multiplicity identities throughout.
"""

from . import (birman_schwinger, contour, dual_pair, factorize, families,
               laurent, matfun, spectra, tolerances)
from .contour import Contour, cauchy_integral, make_circle, scalar_winding
from .matfun import (MatrixFunction, derivative_at, from_pencil, inverse,
                     product, resolvent)

__version__ = "0.1.0"

__all__ = [
    "birman_schwinger", "contour", "dual_pair", "factorize", "families",
    "laurent", "matfun", "spectra", "tolerances",
    "Contour", "cauchy_integral", "make_circle", "scalar_winding",
    "MatrixFunction", "derivative_at", "from_pencil", "inverse", "product",
    "resolvent",
]
