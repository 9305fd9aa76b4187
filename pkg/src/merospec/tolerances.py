"""Shared numerical policy: thresholds used consistently across the package.

All rank decisions, integrality checks, and identity acceptances go through
the values below so that a single knob controls each decision globally.
"""

import numpy as np

# Singular values below RANK_RTOL * sigma_max count as zero.
RANK_RTOL = 1e-8

# A trace must land within this distance of an integer to be accepted.
INTEGRALITY_TOL = 1e-6

# Projections must satisfy ||P^2 - P|| below this to be accepted.
PROJECTION_TOL = 1e-8

# Matrix identities (resolvent formulas, Krein formula, ...) are accepted
# below this relative residual.
IDENTITY_RTOL = 1e-10

# Inversion refuses matrices with sigma_min < INVERSION_RTOL * sigma_max.
INVERSION_RTOL = 1e-12

# Absolute floor on |h| for winding-number samples; below it the sample is
# treated as a zero/pole sitting on the contour.
WINDING_FLOOR = 1e-14

# Default number of quadrature nodes on a circle.
DEFAULT_NODES = 256

# Laurent coefficients with norm <= COEFF_RTOL * (1 + max node norm) count
# as zero.
COEFF_RTOL = 1e-9

# Default depth of principal-part extraction.
DEFAULT_KMAX = 16

# Hard cap on factorization steps (guards essential singularities).
STEP_LIMIT = 32


def numerical_rank(a, rtol=None, scale=None):
    """Rank of a dense matrix by singular-value thresholding.

    Singular values below ``rtol * max(sigma_max, scale)`` are treated as
    zero; ``scale`` supplies the problem scale when the matrix itself may
    be pure rounding noise (e.g. t - z0 I with t = z0 I).
    """
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if rtol is None:
        rtol = RANK_RTOL
    s = np.linalg.svd(a, compute_uv=False)
    ref = max(s[0], scale) if scale is not None else s[0]
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * ref))


def kernel_dimension(a, rtol=None, scale=None):
    """dim ker(a) for a square matrix, by the shared rank rule."""
    a = np.asarray(a)
    return a.shape[1] - numerical_rank(a, rtol=rtol, scale=scale)


def orthonormal_range_basis(a, rtol=None):
    """Orthonormal basis (columns) of the column space of ``a``."""
    a = np.asarray(a, dtype=complex)
    if rtol is None:
        rtol = RANK_RTOL
    u, s, _ = np.linalg.svd(a)
    if a.size == 0 or s.size == 0 or s[0] == 0.0:
        return u[:, :0]
    r = int(np.count_nonzero(s > rtol * s[0]))
    return u[:, :r]


def orthonormal_kernel_basis(a, rtol=None):
    """Orthonormal basis (columns) of ker(a)."""
    a = np.asarray(a, dtype=complex)
    if rtol is None:
        rtol = RANK_RTOL
    _, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s > rtol * s[0]))
    return vh[r:, :].conj().T
