"""Degeneracy peeling of analytic matrix functions.

An analytic a(.) that is singular at z0 but invertible on a punctured
neighborhood factors as a product of steps [Q - (z - z0) P] times a tail
that is invertible at z0.  The step ranks p_1 >= p_2 >= ... determine the
multiplicity nu = sum p_j, and their conjugate partition gives the partial
multiplicities of the zero.  An independent route computes nu as the
winding number of the determinant of the finite block in the Wolf-style
block decomposition.
"""

from dataclasses import dataclass, field

import numpy as np

from .contour import make_circle, winding_from_samples
from .errors import (FactorizationError, PreconditionError, RankGapError,
                     ToleranceError)
from .matfun import MatrixFunction, derivative_at
from .spectra import riesz_projection
from .tolerances import (PROJECTION_TOL, RANK_RTOL, STEP_LIMIT,
                         kernel_dimension)

__all__ = [
    "HowlandFactorization", "howland_step", "howland_factorize",
    "nu_via_block_determinant", "simple_pole_criterion",
    "conjugate_partition",
]

# Radius of the helper circle used to recover derivatives at the removable
# singularity of a peeled factor.
_DERIV_RADIUS = 0.1


def conjugate_partition(p):
    """Conjugate of a nonincreasing integer partition, returned ascending.

    For p = (p_1 >= ... >= p_k) the conjugate counts q_i = #{j : p_j >= i};
    applied twice (after ordering) this is an involution.
    """
    p = list(p)
    if not p:
        return []
    if any(x < 1 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError(f"expected a nonincreasing positive partition, got {p}")
    return sorted(sum(1 for x in p if x >= i) for i in range(1, p[0] + 1))


@dataclass
class HowlandFactorization:
    """Result of iterated degeneracy peeling around one center."""

    center: complex
    steps: list = field(repr=False)  # (P_j, Q_j, p_j) per step
    n0: int
    tail: MatrixFunction = field(repr=False)
    nu: int
    partial_multiplicities: list

    def factor_product_at(self, z):
        """Value of prod_j [Q_j - (z - z0) P_j] times tail(z)."""
        acc = None
        for p, q, _ in self.steps:
            f = q - (z - self.center) * p
            acc = f if acc is None else acc @ f
        tail_val = self.tail(z)
        return tail_val if acc is None else acc @ tail_val


def _function_scale(a, z0, radius):
    """Magnitude of a near z0, from samples on a small circle.

    Rank decisions at z0 threshold against this scale: the value a(z0) can
    be pure rounding noise (every entry cancels) while the function itself
    is O(1) nearby.
    """
    points = z0 + radius * np.exp(2j * np.pi * np.arange(8) / 8)
    return max(float(np.linalg.norm(a(z), 2)) for z in points)


def _rank_split(a0, scale):
    """Rank of a0 against the given scale, with a gap guard."""
    s = np.linalg.svd(a0, compute_uv=False)
    ref = max(s[0], scale)
    if ref == 0.0:
        return 0
    thr = RANK_RTOL * ref
    ambiguous = (s > thr / 10.0) & (s < thr * 10.0)
    if np.any(ambiguous):
        raise RankGapError(
            "rank gap too small: singular value "
            f"{s[ambiguous][0]:.3e} within a factor 10 of threshold {thr:.3e}")
    return int(np.count_nonzero(s > thr))


def howland_step(a, z0, deriv_radius=_DERIV_RADIUS):
    """Peel one degeneracy factor off a at z0.

    Returns (P1, Q1, a1) with Q1 the orthogonal projection onto ran(a(z0)),
    P1 = I - Q1, and a1 the analytic function with
    a(z) = [Q1 - (z - z0) P1] a1(z).  The removable singularity of a1 at z0
    is evaluated in closed form as Q1 a(z0) - P1 a'(z0).
    """
    a.require_square()
    n = a.shape[0]
    z0 = complex(z0)
    a_at = a(z0)
    scale = _function_scale(a, z0, deriv_radius)
    rank = _rank_split(a_at, scale)
    if rank == n:
        raise FactorizationError(f"nothing to factor: a({z0}) is invertible")
    u, _, _ = np.linalg.svd(a_at)
    basis = u[:, :rank]
    q1 = basis @ basis.conj().T
    p1 = np.eye(n, dtype=complex) - q1
    if a.has_derivative:
        da_at = a.deriv(z0)
    else:
        da_at = derivative_at(a, z0, deriv_radius)
    value_at_center = q1 @ a_at - p1 @ da_at

    def ev(z):
        z = complex(z)
        if z == z0:
            return value_at_center
        az = a(z)
        return q1 @ az - (p1 @ az) / (z - z0)

    def dv(z):
        z = complex(z)
        if z == z0:
            # Cauchy differentiation across the removable singularity.
            helper = MatrixFunction(ev, (n, n))
            return derivative_at(helper, z0, deriv_radius)
        az = a(z)
        daz = a.deriv(z) if a.has_derivative else derivative_at(a, z, deriv_radius)
        return (q1 @ daz + (p1 @ az) / (z - z0) ** 2
                - (p1 @ daz) / (z - z0))

    a1 = MatrixFunction(ev, (n, n), deriv_fn=dv,
                        singular_hints=a.singular_hints)
    return p1, q1, a1


def howland_factorize(a, z0, deriv_radius=_DERIV_RADIUS,
                      step_limit=STEP_LIMIT):
    """Iterate :func:`howland_step` until the tail is invertible at z0.

    Records the step projections and ranks, nu = sum of ranks, and the
    partial multiplicities as the conjugate partition of the rank sequence.
    All structural invariants are asserted before returning.
    """
    a.require_square()
    z0 = complex(z0)
    steps = []
    current = a
    for _ in range(step_limit):
        try:
            p, q, nxt = howland_step(current, z0, deriv_radius)
        except FactorizationError:
            if not steps:
                raise
            break
        steps.append((p, q, int(np.rint(np.trace(p).real))))
        current = nxt
    else:
        raise FactorizationError(
            f"step limit {step_limit} exceeded at z0 = {z0}")

    ranks = [p for _, _, p in steps]
    if any(ranks[i] < ranks[i + 1] for i in range(len(ranks) - 1)):
        raise ToleranceError(f"step ranks not nonincreasing: {ranks}")
    if ranks[-1] < 1:
        raise ToleranceError(f"final step rank below 1: {ranks}")
    mg = kernel_dimension(a(z0), scale=_function_scale(a, z0, deriv_radius))
    if ranks[0] != mg:
        raise ToleranceError(
            f"first step rank {ranks[0]} != dim ker a(z0) = {mg}")
    for p, _, _ in steps:
        resid = np.linalg.norm(p @ p - p)
        if resid > PROJECTION_TOL:
            raise ToleranceError(f"step projection not idempotent: {resid:.3e}")
    nu = int(sum(ranks))
    n0 = len(ranks)
    if nu < n0 or nu < mg:
        raise ToleranceError(f"nu = {nu} below n0 = {n0} or m_g = {mg}")
    partial = conjugate_partition(ranks)
    if sum(partial) != nu:
        raise ToleranceError(
            f"conjugate partition {partial} does not sum to nu = {nu}")
    return HowlandFactorization(center=z0, steps=steps, n0=n0, tail=current,
                                nu=nu, partial_multiplicities=partial)


def _eig_magnitudes(a, points):
    return [np.sort(np.abs(np.linalg.eigvals(a(z)))) for z in points]


def nu_via_block_determinant(a, z0, eps, n=128, inner_n=128):
    """Multiplicity of z0 as winding of the finite-block determinant.

    For z on C(z0; eps), the spectral projection P(z) of the matrix a(z)
    around its vanishing eigenvalue group is combined with P(z0) into the
    transformation T(z) = P(z0) P(z) + Q(z0) Q(z); the block F(z) of
    T(z) a(z) T(z)^{-1} acting on ran P(z0) carries the degeneracy, and the
    winding number of det F counts it.
    """
    a.require_square()
    dim = a.shape[0]
    z0 = complex(z0)
    c = make_circle(z0, eps, n)
    # Interior spot checks guard the eigenvalue split inside the disk too.
    spots = list(z0 + (eps / 2.0) * np.exp(2j * np.pi * np.arange(8) / 8))
    mags = _eig_magnitudes(a, [z0] + list(c.nodes) + spots)

    mu0 = mags[0]
    scale = max(1.0, float(np.linalg.norm(a(z0), 2)))
    small = mu0 <= 1e-2 * scale
    if not np.any(small):
        raise PreconditionError(
            f"a({z0}) has no vanishing eigenvalue group (min |eig| = {mu0[0]:.3e})")
    # Everything small at z0 is the vanishing group; the margin check below
    # validates the split along the contour.
    k_split = int(np.count_nonzero(small))

    if k_split == dim:
        delta = 2.0 * (float(mu0[-1]) + 1.0)
    else:
        group_max = max(float(m[k_split - 1]) for m in mags)
        big_min = min(float(m[k_split]) for m in mags)
        if big_min < 9.0 * group_max:
            raise PreconditionError(
                "inner radius unusable, retry smaller: eigenvalue groups "
                f"separate only by factor {big_min / max(group_max, 1e-300):.2f}")
        delta = float(np.sqrt(max(group_max, 1e-300) * big_min))

    p0 = riesz_projection(a(z0), 0.0, delta, inner_n)
    rank0 = int(np.rint(np.trace(p0).real))
    u, s, _ = np.linalg.svd(p0)
    basis = u[:, :rank0]

    eye = np.eye(dim, dtype=complex)
    q0 = eye - p0
    samples = np.empty(n, dtype=complex)
    for j, zeta in enumerate(c.nodes):
        az = a(zeta)
        pz = riesz_projection(az, 0.0, delta, inner_n)
        if int(np.rint(np.trace(pz).real)) != rank0:
            raise PreconditionError(
                f"neighborhood too large: projection rank changed at node {j}")
        tz = p0 @ pz + q0 @ (eye - pz)
        sv = np.linalg.svd(tz, compute_uv=False)
        if sv[-1] < 1e-8 * sv[0]:
            raise PreconditionError(
                f"neighborhood too large: T(z) nearly singular at node {j}")
        block = basis.conj().T @ tz @ az @ np.linalg.solve(tz, basis)
        samples[j] = np.linalg.det(block)
    # det F is legitimately tiny (~ eps^nu); only a sample far below the
    # common magnitude indicates a zero on the contour.
    floor = 1e-14 * float(np.max(np.abs(samples)))
    return winding_from_samples(samples, floor=floor)


def simple_pole_criterion(f, a):
    """True iff the peeled factorization has a single step.

    Equivalently nu equals the kernel dimension of a(z0); both
    characterizations are computed and must agree.
    """
    mg = kernel_dimension(a(f.center),
                          scale=_function_scale(a, f.center, _DERIV_RADIUS))
    by_nu = (f.nu == mg)
    by_steps = (f.n0 == 1)
    if by_nu != by_steps:
        raise ToleranceError(
            f"simple-pole characterizations disagree: nu = {f.nu}, "
            f"m_g = {mg}, n0 = {f.n0}")
    return by_steps
