"""Factored perturbations H = H0 + V2* V1 and their transfer function.

The k x k function K(z) = -V1 (H0 - z)^{-1} V2* carries the spectral
bookkeeping of the perturbation: eigenvalue correspondences, resolvent
difference identities, and the index of I - K(.) around an isolated point,
which equals the multiplicity shift between H and H0.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spectra
from .errors import (EvaluationAtSpectrumError, NonInvertibleError,
                     PreconditionError, ToleranceError)
from .matfun import MatrixFunction
from .tolerances import (DEFAULT_NODES, IDENTITY_RTOL, INVERSION_RTOL,
                         kernel_dimension)

__all__ = [
    "FactoredPerturbation", "birman_schwinger_function",
    "perturbed_resolvent", "resolvent_difference_identities",
    "second_resolvent_identities", "bs_inverse_identity_residual",
    "bs_eigenvector_maps", "geometric_multiplicity_match",
    "index_multiplicity_check", "IndexMultiplicityResult",
]

_CORRESPONDENCE_TOL = 1e-8


@dataclass
class FactoredPerturbation:
    """Unperturbed operator with a factored additive perturbation.

    h0 is n x n, v1 and v2 are k x n maps into the auxiliary space C^k;
    the perturbed operator is h = h0 + v2^H v1.  At construction a probe
    point with 1 in the resolvent set of K is exhibited on the imaginary
    axis; failure to find one is an error.
    """

    h0: np.ndarray = field(repr=False)
    v1: np.ndarray = field(repr=False)
    v2: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.h0 = np.atleast_2d(np.asarray(self.h0, dtype=complex))
        self.v1 = np.atleast_2d(np.asarray(self.v1, dtype=complex))
        self.v2 = np.atleast_2d(np.asarray(self.v2, dtype=complex))
        n = self.h0.shape[0]
        if self.h0.shape != (n, n):
            raise ValueError(f"h0 must be square, got {self.h0.shape}")
        if self.v1.shape[1] != n or self.v2.shape[1] != n:
            raise ValueError(
                f"v1/v2 must be k x {n}, got {self.v1.shape}, {self.v2.shape}")
        if self.v1.shape[0] != self.v2.shape[0]:
            raise ValueError("v1 and v2 must share the auxiliary dimension")
        self.probe = self._find_probe()

    @property
    def n(self):
        return self.h0.shape[0]

    @property
    def k(self):
        return self.v1.shape[0]

    @property
    def h(self):
        """Perturbed operator h0 + v2^H v1."""
        return self.h0 + self.v2.conj().T @ self.v1

    def r0(self, z):
        """Unperturbed resolvent (h0 - z)^{-1}."""
        m = self.h0 - z * np.eye(self.n)
        s = np.linalg.svd(m, compute_uv=False)
        if s[0] == 0.0 or s[-1] < INVERSION_RTOL * s[0]:
            raise EvaluationAtSpectrumError(
                f"evaluation at spectrum of h0: z = {z}", z=z)
        return np.linalg.inv(m)

    def k_at(self, z):
        """Transfer function value K(z) = -v1 (h0 - z)^{-1} v2^H."""
        return -self.v1 @ self.r0(z) @ self.v2.conj().T

    def one_minus_k_inv(self, z):
        m = np.eye(self.k) - self.k_at(z)
        s = np.linalg.svd(m, compute_uv=False)
        if s[0] == 0.0 or s[-1] < INVERSION_RTOL * s[0]:
            raise NonInvertibleError(
                f"Birman-Schwinger singularity at z = {z}", z=z)
        return np.linalg.inv(m)

    def _find_probe(self):
        radius = 4.0 * (np.linalg.norm(self.h0, 2)
                        + np.linalg.norm(self.v1, 2) * np.linalg.norm(self.v2, 2)
                        + 1.0)
        for zeta in (1j * radius, -1j * radius):
            try:
                self.one_minus_k_inv(zeta)
            except (EvaluationAtSpectrumError, NonInvertibleError):
                continue
            return zeta
        raise PreconditionError(
            "no probe point with 1 in the resolvent set of K found on the "
            f"imaginary axis at |z| = {radius}")


def birman_schwinger_function(p):
    """K as a MatrixFunction, with its exact derivative -v1 R0(z)^2 v2^H."""
    v2h = p.v2.conj().T

    def dv(z):
        r = p.r0(z)
        return -p.v1 @ r @ r @ v2h

    return MatrixFunction(lambda z: p.k_at(z), (p.k, p.k), deriv_fn=dv)


def perturbed_resolvent(p):
    """(h - z)^{-1} built from the unperturbed resolvent and K.

    Every evaluation is verified against the direct inverse of h - z to the
    shared identity tolerance.
    """
    v2h = p.v2.conj().T
    h = p.h
    eye = np.eye(p.n)

    def ev(z):
        r0 = p.r0(z)
        r = r0 - r0 @ v2h @ p.one_minus_k_inv(z) @ p.v1 @ r0
        direct = np.linalg.solve(h - z * eye, eye)
        resid = np.linalg.norm(r - direct) / max(1.0, np.linalg.norm(direct))
        if resid > IDENTITY_RTOL:
            raise ToleranceError(
                f"perturbed resolvent mismatch at z = {z}: residual {resid:.3e}")
        return r

    def dv(z):
        r = ev(z)
        return r @ r

    return MatrixFunction(ev, (p.n, p.n), deriv_fn=dv)


def _rel(diff, ref):
    return float(np.linalg.norm(diff) / max(1.0, np.linalg.norm(ref)))


def resolvent_difference_identities(p, z1, z2):
    """Residuals of the two-point difference identities for K and (I-K)^{-1}.

    K(z1) - K(z2) must equal (z2 - z1) v1 R0(z1) R0(z2) v2^H, and the same
    difference pattern holds for (I - K)^{-1} with the perturbed resolvent
    in the middle.
    """
    v2h = p.v2.conj().T
    k1, k2 = p.k_at(z1), p.k_at(z2)
    lhs = k1 - k2
    rhs = (z2 - z1) * (p.v1 @ p.r0(z1) @ p.r0(z2) @ v2h)
    res_k = _rel(lhs - rhs, lhs)

    rp = perturbed_resolvent(p)
    w1 = p.one_minus_k_inv(z1)
    w2 = p.one_minus_k_inv(z2)
    rhs_inv = (z2 - z1) * (p.v1 @ rp(z1) @ rp(z2) @ v2h)
    res_inv = _rel((w1 - w2) - rhs_inv, w1 - w2)
    return res_k, res_inv


def second_resolvent_identities(p, z):
    """Residuals of r = r0 - r v2^H v1 r0 and r = r0 - r0 v2^H v1 r."""
    v2h = p.v2.conj().T
    r0 = p.r0(z)
    r = perturbed_resolvent(p)(z)
    res1 = _rel(r - (r0 - r @ v2h @ p.v1 @ r0), r)
    res2 = _rel(r - (r0 - r0 @ v2h @ p.v1 @ r), r)
    return res1, res2


def bs_inverse_identity_residual(p, z):
    """Residual of I - v1 R(z) v2^H = (I - K(z))^{-1}."""
    v2h = p.v2.conj().T
    r = perturbed_resolvent(p)(z)
    lhs = np.eye(p.k) - p.v1 @ r @ v2h
    return _rel(lhs - p.one_minus_k_inv(z), lhs)


def bs_eigenvector_maps(p, z0, direction, vector, z1=None):
    """Map an eigenvector across the Birman-Schwinger correspondence.

    direction "h_to_k": vector f with h f = z0 f (and z0 in the resolvent
    set of h0) is sent to g = (I - K(z1))^{-1} v1 R0(z1) f, which must
    satisfy K(z0) g = g and g = (z0 - z1)^{-1} v1 f.

    direction "k_to_h": vector g with K(z0) g = g is sent to
    f = -R0(z0) v2^H g, which must satisfy h f = z0 f.
    """
    vector = np.asarray(vector, dtype=complex).ravel()
    if direction == "h_to_k":
        if z1 is None:
            z1 = p.probe
        if z1 == z0:
            raise PreconditionError("auxiliary point must differ from z0")
        f = vector
        g = p.one_minus_k_inv(z1) @ (p.v1 @ (p.r0(z1) @ f))
        if np.linalg.norm(g) <= 1e-12 * np.linalg.norm(f):
            raise ToleranceError("correspondence degenerate: produced g ~ 0")
        resid = np.linalg.norm(p.k_at(z0) @ g - g) / np.linalg.norm(g)
        if resid > _CORRESPONDENCE_TOL:
            raise ToleranceError(
                f"K(z0) g = g fails: residual {resid:.3e}")
        alt = p.v1 @ f / (z0 - z1)
        if np.linalg.norm(g - alt) > _CORRESPONDENCE_TOL * np.linalg.norm(g):
            raise ToleranceError("the two expressions for g disagree")
        return g
    if direction == "k_to_h":
        g = vector
        f = -p.r0(z0) @ (p.v2.conj().T @ g)
        if np.linalg.norm(f) <= 1e-12 * np.linalg.norm(g):
            raise ToleranceError("correspondence degenerate: produced f ~ 0")
        resid = np.linalg.norm(p.h @ f - z0 * f) / np.linalg.norm(f)
        if resid > _CORRESPONDENCE_TOL:
            raise ToleranceError(f"h f = z0 f fails: residual {resid:.3e}")
        return f
    raise ValueError(f"unknown direction {direction!r}")


def geometric_multiplicity_match(p, z0):
    """Kernel dimensions of h - z0 and of I - K(z0), for comparison."""
    h = p.h
    mg_h = kernel_dimension(h - z0 * np.eye(p.n),
                            scale=float(np.linalg.norm(h, 2)))
    mg_k = kernel_dimension(np.eye(p.k) - p.k_at(z0), scale=1.0)
    return mg_h, mg_k


@dataclass
class IndexMultiplicityResult:
    index: int
    ma_perturbed: int
    ma_unperturbed: int
    radius: float


def index_multiplicity_check(p, z0, eps=None, n=DEFAULT_NODES,
                             cluster_tol=1e-7):
    """Index of I - K(.) at z0 together with both algebraic multiplicities.

    The punctured disk must avoid the spectra of h and h0; the default
    radius is min(0.4 * gap, 0.5) with gap the distance from z0 to the
    nearest other spectral point of either operator.  Under those
    preconditions the index equals ma_perturbed - ma_unperturbed.
    """
    h = p.h
    clusters_h = spectra.spectrum_clusters(h, cluster_tol)
    clusters_h0 = spectra.spectrum_clusters(p.h0, cluster_tol)

    def local_mult(clusters):
        return sum(m for c, m in clusters if abs(c - z0) <= cluster_tol)

    other = [abs(c - z0) for c, _ in clusters_h + clusters_h0
             if abs(c - z0) > cluster_tol]
    gap = min(other) if other else np.inf
    if eps is None:
        eps = min(0.4 * gap, 0.5)
    if eps <= 0 or eps >= gap:
        raise PreconditionError(
            f"disk condition violated: eps = {eps} vs gap = {gap}")

    ma_h = 0
    if local_mult(clusters_h):
        ma_h = spectra.eigen_multiplicities(h, z0, eps, n).algebraic
    ma_h0 = 0
    if local_mult(clusters_h0):
        ma_h0 = spectra.eigen_multiplicities(p.h0, z0, eps, n).algebraic

    kfun = birman_schwinger_function(p)
    eye = np.eye(p.k, dtype=complex)
    one_minus_k = MatrixFunction(lambda z: eye - kfun(z), (p.k, p.k),
                                 deriv_fn=lambda z: -kfun.deriv(z))
    idx = spectra.index(one_minus_k, z0, eps, n)
    return IndexMultiplicityResult(index=idx, ma_perturbed=ma_h,
                                   ma_unperturbed=ma_h0, radius=float(eps))
