"""Riesz projections, eigenvalue multiplicities, and the index of
meromorphic matrix functions via the operator argument principle."""

from dataclasses import dataclass

import numpy as np

from .contour import make_circle, scalar_winding
from .errors import ContourError, IntegralityError
from .matfun import MatrixFunction, derivative_at, from_pencil, inverse
from .tolerances import (DEFAULT_NODES, INTEGRALITY_TOL, INVERSION_RTOL,
                         PROJECTION_TOL, kernel_dimension)

__all__ = [
    "MultiplicityReport", "riesz_projection", "eigen_multiplicities",
    "argument_principle_multiplicity", "index", "det_winding_oracle",
    "index_additivity_check", "suggest_radius", "spectrum_clusters",
]

# Trace-ordering agreement required before a trace is rounded.
_ORDERING_TOL = 1e-8


@dataclass
class MultiplicityReport:
    """Algebraic/geometric multiplicity of one isolated eigenvalue."""

    location: complex
    algebraic: int
    geometric: int
    raw_trace: complex
    projection_residual: float
    contour: tuple  # (radius, node count)


def _batched_resolvent_samples(t, nodes):
    """(t - zeta_j I)^{-1} for all nodes at once.

    Raises ContourError when any node sits numerically on the spectrum.
    """
    t = np.asarray(t, dtype=complex)
    n = t.shape[0]
    eye = np.eye(n, dtype=complex)
    shifted = t[None, :, :] - nodes[:, None, None] * eye[None, :, :]
    svals = np.linalg.svd(shifted, compute_uv=False)
    bad = (svals[:, 0] == 0.0) | (svals[:, -1] < INVERSION_RTOL * svals[:, 0])
    if np.any(bad):
        j = int(np.argmax(bad))
        raise ContourError(
            f"spectrum on contour at node {j} (zeta = {nodes[j]})",
            node_index=j, node=nodes[j])
    return np.linalg.solve(shifted, np.broadcast_to(eye, shifted.shape))


def riesz_projection(t, z0, eps, n=DEFAULT_NODES):
    """Spectral projection -(1/2pi i) oint_{C(z0;eps)} (t - zeta I)^{-1} d zeta.

    The caller chooses eps so that the circle isolates the intended part of
    the spectrum; the trace of the result is the enclosed algebraic
    multiplicity.
    """
    c = make_circle(z0, eps, n)
    res = _batched_resolvent_samples(np.atleast_2d(t), c.nodes)
    return -np.tensordot(c.weights, res, axes=(0, 0))


def eigen_multiplicities(t, z0, eps, n=DEFAULT_NODES):
    """Algebraic and geometric multiplicity of the eigenvalue z0 of t.

    m_a is the rounded trace of the Riesz projection, m_g the kernel
    dimension of t - z0 I under the shared rank rule.  Rejects the contour
    when the trace is not close to an integer or the projection is not
    numerically idempotent.
    """
    t = np.atleast_2d(np.asarray(t, dtype=complex))
    p = riesz_projection(t, z0, eps, n)
    raw = np.trace(p)
    ma = int(np.rint(raw.real))
    if abs(raw - ma) > INTEGRALITY_TOL:
        raise IntegralityError(
            f"ill-conditioned contour: tr P = {raw} not within "
            f"{INTEGRALITY_TOL} of an integer")
    resid = float(np.linalg.norm(p @ p - p))
    if resid > PROJECTION_TOL:
        raise IntegralityError(
            f"ill-conditioned contour: ||P^2 - P|| = {resid:.3e}")
    mg = kernel_dimension(t - z0 * np.eye(t.shape[0]),
                          scale=float(np.linalg.norm(t, 2)))
    return MultiplicityReport(location=complex(z0), algebraic=ma,
                              geometric=mg, raw_trace=complex(raw),
                              projection_residual=resid,
                              contour=(float(eps), int(n)))


def _logderiv_traces(m, z0, eps, n):
    """Traces of both orderings of (1/2pi i) oint m' m^{-1}.

    Matrix integrals are accumulated separately for the two orderings and
    traced afterwards; the orderings must agree before rounding.
    """
    m.require_square()
    c = make_circle(z0, eps, n)
    minv = inverse(m)
    acc_lr = None
    acc_rl = None
    for zeta, w in zip(c.nodes, c.weights):
        if m.has_derivative:
            dm = m.deriv(zeta)
        else:
            dm = derivative_at(m, zeta, eps / 4.0)
        mi = minv(zeta)
        lr = w * (dm @ mi)
        rl = w * (mi @ dm)
        acc_lr = lr if acc_lr is None else acc_lr + lr
        acc_rl = rl if acc_rl is None else acc_rl + rl
    t_lr = np.trace(acc_lr)
    t_rl = np.trace(acc_rl)
    if abs(t_lr - t_rl) > _ORDERING_TOL * max(1.0, abs(t_lr)):
        raise IntegralityError(
            f"trace orderings disagree: {t_lr} vs {t_rl}")
    return t_lr, t_rl


def _round_integer(value, what):
    k = int(np.rint(value.real))
    if abs(value - k) > INTEGRALITY_TOL:
        raise IntegralityError(
            f"{what} = {value} not within {INTEGRALITY_TOL} of an integer")
    return k


def argument_principle_multiplicity(a, z0, eps, n=DEFAULT_NODES):
    """Multiplicity of the zero of the analytic function a at z0.

    Rounded trace of (1/2pi i) oint a' a^{-1} over C(z0; eps); requires a
    to be invertible on the punctured disk.
    """
    t_lr, _ = _logderiv_traces(a, z0, eps, n)
    return _round_integer(t_lr, "argument-principle trace")


def index(m, z0, eps, n=DEFAULT_NODES):
    """Index of the meromorphic function m with respect to C(z0; eps).

    The rounded trace of (1/2pi i) oint m' m^{-1}; both operator orderings
    are computed and compared, and the result must be an integer within
    the shared integrality tolerance.
    """
    t_lr, _ = _logderiv_traces(m, z0, eps, n)
    return _round_integer(t_lr, "index trace")


def det_winding_oracle(m, z0, eps, n=DEFAULT_NODES):
    """Winding number of det m around C(z0; eps).

    Independent scalar route to the index: the trace of the logarithmic
    derivative equals (det)'/det, so this must match :func:`index` exactly.
    """
    m.require_square()
    c = make_circle(z0, eps, n)
    return scalar_winding(lambda zeta: np.linalg.det(m(zeta)), c)


def index_additivity_check(m1, m2, z0, eps, n=DEFAULT_NODES):
    """Indices of m1, m2 and of their product at the same center."""
    from .matfun import product
    i1 = index(m1, z0, eps, n)
    i2 = index(m2, z0, eps, n)
    i12 = index(product(m1, m2), z0, eps, n)
    return i1, i2, i12


def spectrum_clusters(t, cluster_tol=1e-7):
    """Eigenvalues of t grouped into clusters of mutual distance cluster_tol.

    Returns a list of (centroid, multiplicity) sorted by (real, imag).
    Clustering absorbs the scatter that numerical eigenvalues of defective
    matrices exhibit.
    """
    eigs = np.linalg.eigvals(np.atleast_2d(np.asarray(t, dtype=complex)))
    order = np.lexsort((eigs.imag, eigs.real))
    eigs = eigs[order]
    clusters = []
    for ev in eigs:
        for i, (ctr, mult) in enumerate(clusters):
            if abs(ev - ctr) <= cluster_tol:
                clusters[i] = ((ctr * mult + ev) / (mult + 1), mult + 1)
                break
        else:
            clusters.append((ev, 1))
    return [(complex(c), int(m)) for c, m in clusters]


def suggest_radius(t, z0, fraction=0.5, cluster_tol=1e-7):
    """Suggested isolation radius: fraction of the distance from z0 to the
    nearest spectrum point of t outside the z0 cluster.

    Returns None when the whole spectrum belongs to the z0 cluster.  The
    suggestion is never applied automatically.
    """
    clusters = spectrum_clusters(t, cluster_tol)
    dists = [abs(c - z0) for c, _ in clusters if abs(c - z0) > cluster_tol]
    if not dists:
        return None
    return fraction * min(dists)


def pencil_multiplicity(t, z0, eps, n=DEFAULT_NODES):
    """Argument-principle multiplicity of z0 for the pencil t - z I."""
    t = np.atleast_2d(np.asarray(t, dtype=complex))
    a = from_pencil(t, np.eye(t.shape[0]))
    return argument_principle_multiplicity(a, z0, eps, n)
