"""Laurent coefficients, principal parts, and pole-order diagnostics."""

from dataclasses import dataclass, field

import numpy as np

from .contour import cauchy_integral, make_circle
from .errors import PoleOrderError
from .tolerances import COEFF_RTOL, DEFAULT_KMAX, DEFAULT_NODES, numerical_rank

__all__ = [
    "LaurentData", "MeromorphyReport", "laurent_coefficient",
    "principal_part", "is_finitely_meromorphic_at",
    "trace_principal_part_symmetry",
]


@dataclass
class LaurentData:
    """Extracted Laurent data of a matrix function around one center.

    ``coefficients`` maps the order k to the coefficient matrix; negative
    coefficients below the size tolerance are dropped from the map but
    their (zero) rank still appears in ``principal_ranks``, which lists the
    ranks of the coefficients from order -pole_order up to -1.
    """

    center: complex
    coefficients: dict = field(repr=False)
    pole_order: int
    principal_ranks: list
    extraction_radius: float
    node_count: int


@dataclass
class MeromorphyReport:
    pole_order: int
    coefficient_ranks: list
    meromorphic_within_kmax: bool


def laurent_coefficient(m, z0, k, c):
    """k-th Laurent coefficient of m around z0, via the contour c.

    Returns (1/2pi i) oint (zeta - z0)^(-k-1) m(zeta) d zeta.  The contour
    must be centered at z0 and lie in the annulus of analyticity.
    """
    return cauchy_integral(lambda zeta: m(zeta) * (zeta - z0) ** (-k - 1), c)


def _coefficient_tolerance(samples):
    scale = max(np.linalg.norm(s) for s in samples)
    return COEFF_RTOL * (1.0 + scale)


def _negative_coefficients(m, z0, eps, kmax, n):
    """All coefficients k = -kmax..-1 from a single pass over the nodes."""
    c = make_circle(z0, eps, n)
    samples = [m(zeta) for zeta in c.nodes]
    rel = c.nodes - z0
    w = c.weights
    coeffs = {}
    for k in range(-kmax, 0):
        factors = w * rel ** (-k - 1)
        acc = samples[0] * factors[0]
        for j in range(1, len(samples)):
            acc = acc + samples[j] * factors[j]
        coeffs[k] = acc
    return coeffs, _coefficient_tolerance(samples), c


def principal_part(m, z0, eps, kmax=DEFAULT_KMAX, n=DEFAULT_NODES):
    """Principal part of m at z0: coefficients for k = -kmax..-1.

    The pole order is the deepest coefficient whose norm exceeds the
    size-relative tolerance.  If the coefficient at -kmax itself exceeds it,
    the expansion cannot be trusted to terminate and a PoleOrderError is
    raised (essential-singularity suspicion).
    """
    coeffs, tol, c = _negative_coefficients(m, z0, eps, kmax, n)
    if np.linalg.norm(coeffs[-kmax]) > tol:
        raise PoleOrderError(
            f"pole order exceeds kmax = {kmax} at z0 = {z0}")
    pole_order = 0
    for k in range(-kmax, 0):
        if np.linalg.norm(coeffs[k]) > tol:
            pole_order = -k
            break
    kept = {}
    ranks = []
    for k in range(-pole_order, 0):
        if np.linalg.norm(coeffs[k]) > tol:
            ranks.append(numerical_rank(coeffs[k]))
            kept[k] = coeffs[k]
        else:
            ranks.append(0)
    return LaurentData(center=complex(z0), coefficients=kept,
                       pole_order=pole_order, principal_ranks=ranks,
                       extraction_radius=float(eps), node_count=c.node_count)


def is_finitely_meromorphic_at(m, z0, eps, kmax=DEFAULT_KMAX, n=DEFAULT_NODES):
    """Pole order and principal-coefficient ranks of m at z0.

    Finite rank of every negative coefficient is automatic for matrices;
    the ranks are reported as diagnostics.  Raises PoleOrderError exactly
    as :func:`principal_part` does.
    """
    data = principal_part(m, z0, eps, kmax=kmax, n=n)
    return MeromorphyReport(pole_order=data.pole_order,
                            coefficient_ranks=list(data.principal_ranks),
                            meromorphic_within_kmax=True)


def trace_principal_part_symmetry(m1, m2, z0, c):
    """Both orderings of (1/2pi i) oint m1 m2 and the gap of their traces.

    For functions finitely meromorphic at z0 the two contour integrals are
    finite-rank matrices with equal trace; the returned residual is
    |tr(first) - tr(second)|.
    """
    first = cauchy_integral(lambda zeta: m1(zeta) @ m2(zeta), c)
    second = cauchy_integral(lambda zeta: m2(zeta) @ m1(zeta), c)
    residual = abs(np.trace(first) - np.trace(second))
    return first, second, residual
