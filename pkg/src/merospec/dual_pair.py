"""Boundary triples for dual pairs of operators, at matrix scale.

Maximal operators are modeled as parameterized pairs (embed, action) on a
parameter space: a parameter vector w represents the vector embed @ w with
operator value action @ w, and restrictions are kernels of constraint maps
on the parameter space.  Boundary maps act on parameters, the abstract
Green identity becomes a matrix identity, and the Weyl function, gamma
fields, resolvent formula and index identities are all concrete dense
linear algebra.
"""

from dataclasses import dataclass, field

import numpy as np

from . import factorize, spectra
from .errors import (DegenerateTripleError, NonInvertibleError,
                     NotRepresentableError, PreconditionError, ShapeError,
                     ToleranceError)
from .matfun import MatrixFunction
from .tolerances import (DEFAULT_NODES, INVERSION_RTOL, numerical_rank,
                         orthonormal_kernel_basis)

__all__ = [
    "ParameterizedOperator", "DualPairTriple", "check_green_identity",
    "boundary_maps_surjective", "restrict", "extension_operator",
    "as_matrix", "gamma_field", "dual_gamma_field", "weyl_function",
    "krein_check", "transformed_triple", "index_multiplicity_check",
    "DualIndexResult", "discrete_schrodinger_dual_pair",
]

# Distance below which a point counts as sitting on a finite spectrum.
_SPECTRUM_TOL = 1e-9


@dataclass
class ParameterizedOperator:
    """Operator given by parameterization u = embed @ w, value = action @ w,
    with domain ker(constraint) in parameter space (None = unconstrained)."""

    embed: np.ndarray = field(repr=False)
    action: np.ndarray = field(repr=False)
    constraint: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.embed = np.atleast_2d(np.asarray(self.embed, dtype=complex))
        self.action = np.atleast_2d(np.asarray(self.action, dtype=complex))
        if self.embed.shape != self.action.shape:
            raise ShapeError(
                f"embed {self.embed.shape} and action {self.action.shape} differ")
        if self.constraint is not None:
            self.constraint = np.atleast_2d(
                np.asarray(self.constraint, dtype=complex))
            if self.constraint.shape[1] != self.embed.shape[1]:
                raise ShapeError(
                    f"constraint acts on {self.constraint.shape[1]} parameters, "
                    f"expected {self.embed.shape[1]}")

    @property
    def ambient_dim(self):
        return self.embed.shape[0]

    @property
    def param_dim(self):
        return self.embed.shape[1]

    def domain_basis(self):
        """Orthonormal basis of the admissible parameter subspace."""
        if self.constraint is None:
            return np.eye(self.param_dim, dtype=complex)
        return orthonormal_kernel_basis(self.constraint)


def as_matrix(op):
    """Matrix of the restricted operator on the ambient space.

    With W a basis of the admissible parameters, the operator acts as
    (action W)(embed W)^{-1}; this requires the domain dimension to equal
    the ambient dimension and embed W to be invertible, otherwise the
    restriction has a multivalued part (or is not everywhere defined) and
    no matrix exists.
    """
    w = op.domain_basis()
    n = op.ambient_dim
    if w.shape[1] != n:
        raise NotRepresentableError(
            f"domain dimension {w.shape[1]} != ambient dimension {n}: "
            "restriction is not graph-representable")
    dw = op.embed @ w
    s = np.linalg.svd(dw, compute_uv=False)
    if s[0] == 0.0 or s[-1] < INVERSION_RTOL * s[0]:
        raise NotRepresentableError(
            "multivalued part present: restriction is not graph-representable")
    return (op.action @ w) @ np.linalg.inv(dw)


@dataclass
class DualPairTriple:
    """Two parameterized maximal operators plus their boundary maps.

    The boundary maps act on the respective parameter spaces:
    gamma_b0 (h0 x m_B), gamma_b1 (h1 x m_B) on the B side and
    gamma_a0 (h1 x m_A), gamma_a1 (h0 x m_A) on the A side.
    """

    bstar: ParameterizedOperator
    astar: ParameterizedOperator
    gamma_b0: np.ndarray = field(repr=False)
    gamma_b1: np.ndarray = field(repr=False)
    gamma_a0: np.ndarray = field(repr=False)
    gamma_a1: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("gamma_b0", "gamma_b1", "gamma_a0", "gamma_a1"):
            setattr(self, name, np.atleast_2d(
                np.asarray(getattr(self, name), dtype=complex)))
        mb = self.bstar.param_dim
        ma = self.astar.param_dim
        if self.gamma_b0.shape[1] != mb or self.gamma_b1.shape[1] != mb:
            raise ShapeError("B-side boundary maps must act on B parameters")
        if self.gamma_a0.shape[1] != ma or self.gamma_a1.shape[1] != ma:
            raise ShapeError("A-side boundary maps must act on A parameters")
        if self.gamma_b0.shape[0] != self.gamma_a1.shape[0]:
            raise ShapeError("gamma_b0 and gamma_a1 must share h0")
        if self.gamma_b1.shape[0] != self.gamma_a0.shape[0]:
            raise ShapeError("gamma_b1 and gamma_a0 must share h1")
        if self.bstar.ambient_dim != self.astar.ambient_dim:
            raise ShapeError("both sides must share the ambient space")

    @property
    def boundary_dims(self):
        return self.gamma_b0.shape[0], self.gamma_b1.shape[0]

    @property
    def ambient_dim(self):
        return self.bstar.ambient_dim


def check_green_identity(t, pairs=10, seed=0):
    """Residual of the abstract Green identity in matrix form.

    The identity action_B^H embed_A - embed_B^H action_A =
    gamma_b1^H gamma_a0 - gamma_b0^H gamma_a1 is evaluated as a matrix
    residual and additionally spot-checked on random parameter pairs.
    """
    lhs = (t.bstar.action.conj().T @ t.astar.embed
           - t.bstar.embed.conj().T @ t.astar.action)
    rhs = (t.gamma_b1.conj().T @ t.gamma_a0
           - t.gamma_b0.conj().T @ t.gamma_a1)
    gap = lhs - rhs
    residual = float(np.linalg.norm(gap))
    rng = np.random.default_rng(seed)
    for _ in range(pairs):
        w = rng.standard_normal(t.bstar.param_dim) \
            + 1j * rng.standard_normal(t.bstar.param_dim)
        v = rng.standard_normal(t.astar.param_dim) \
            + 1j * rng.standard_normal(t.astar.param_dim)
        residual = max(residual, abs(w.conj() @ gap @ v)
                       / (np.linalg.norm(w) * np.linalg.norm(v)))
    return residual


def boundary_maps_surjective(t):
    """Whether the stacked boundary maps have full row rank, per side."""
    h0, h1 = t.boundary_dims
    b = np.vstack([t.gamma_b0, t.gamma_b1])
    a = np.vstack([t.gamma_a0, t.gamma_a1])
    return (numerical_rank(b) == h0 + h1, numerical_rank(a) == h0 + h1)


def restrict(t, side, condition):
    """Restriction of the chosen maximal operator to ker(condition)."""
    if side == "b":
        op = t.bstar
    elif side == "a":
        op = t.astar
    else:
        raise ValueError(f"side must be 'b' or 'a', got {side!r}")
    return ParameterizedOperator(embed=op.embed, action=op.action,
                                 constraint=np.atleast_2d(
                                     np.asarray(condition, dtype=complex)))


def extension_operator(t, theta=None, side="b", trace=0):
    """Named restrictions: zero trace-0 or trace-1 boundary data on either
    side, or the boundary condition gamma_b1 = theta gamma_b0."""
    if theta is not None:
        theta = np.atleast_2d(np.asarray(theta, dtype=complex))
        return restrict(t, "b", t.gamma_b1 - theta @ t.gamma_b0)
    if side == "b":
        cond = t.gamma_b0 if trace == 0 else t.gamma_b1
    else:
        cond = t.gamma_a0 if trace == 0 else t.gamma_a1
    return restrict(t, side, cond)


def _check_resolvent_point(m, z, what):
    eigs = np.linalg.eigvals(m)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    if np.min(np.abs(eigs - z)) < _SPECTRUM_TOL * scale:
        raise PreconditionError(f"z = {z} lies in the spectrum of {what}")


def _defect_basis(op, z, expected):
    kmat = op.action - z * op.embed
    w = orthonormal_kernel_basis(kmat)
    if w.shape[1] != expected:
        raise DegenerateTripleError(
            f"triple degenerate at z = {z}: defect dimension {w.shape[1]}, "
            f"expected {expected}")
    return w


def _boundary_inverse(gmap, w, z):
    g = gmap @ w
    s = np.linalg.svd(g, compute_uv=False)
    if s[0] == 0.0 or s[-1] < INVERSION_RTOL * s[0]:
        raise DegenerateTripleError(
            f"triple degenerate at z = {z}: boundary map not invertible "
            "on the defect space")
    return np.linalg.inv(g)


def gamma_field(t, z):
    """Solution operator from trace-0 boundary data to the defect vector.

    Requires z in the resolvent set of the trace-0 restriction of the B
    side; columns solve (action_B - z embed_B) w = 0 normalized to unit
    boundary data.
    """
    h0, _ = t.boundary_dims
    _check_resolvent_point(as_matrix(extension_operator(t)), z, "the "
                           "trace-0 restriction")
    w = _defect_basis(t.bstar, z, h0)
    return t.bstar.embed @ w @ _boundary_inverse(t.gamma_b0, w, z)


def dual_gamma_field(t, z):
    """A-side analogue of :func:`gamma_field` (trace-0 data on the A side)."""
    _, h1 = t.boundary_dims
    _check_resolvent_point(as_matrix(extension_operator(t, side="a")), z,
                           "the A-side trace-0 restriction")
    w = _defect_basis(t.astar, z, h1)
    return t.astar.embed @ w @ _boundary_inverse(t.gamma_a0, w, z)


def weyl_function(t):
    """Boundary transfer function z -> gamma_b1 W(z) (gamma_b0 W(z))^{-1}.

    The derivative is supplied exactly as the product of the two gamma
    fields, dual side evaluated at the conjugate point.
    """
    h0, h1 = t.boundary_dims

    def ev(z):
        w = _defect_basis(t.bstar, z, h0)
        return t.gamma_b1 @ w @ _boundary_inverse(t.gamma_b0, w, z)

    def dv(z):
        return dual_gamma_field(t, np.conj(z)).conj().T @ gamma_field(t, z)

    return MatrixFunction(ev, (h1, h0), deriv_fn=dv)


def krein_check(t, theta, z):
    """Relative residual of the resolvent formula for the theta extension.

    Compares the direct resolvent of the theta restriction with the
    trace-0 resolvent corrected by gamma(z) (theta - M(z))^{-1} gamma_dual.
    """
    theta = np.atleast_2d(np.asarray(theta, dtype=complex))
    n = t.ambient_dim
    a0 = as_matrix(extension_operator(t))
    at = as_matrix(extension_operator(t, theta=theta))
    _check_resolvent_point(a0, z, "the trace-0 restriction")
    _check_resolvent_point(at, z, "the theta restriction")
    eye = np.eye(n, dtype=complex)
    m = weyl_function(t)(z)
    core = theta - m
    s = np.linalg.svd(core, compute_uv=False)
    if s[0] == 0.0 or s[-1] < INVERSION_RTOL * s[0]:
        raise PreconditionError(
            f"theta - M(z) singular at z = {z}; z is an eigenvalue of the "
            "theta restriction")
    lhs = np.linalg.inv(at - z * eye)
    rhs = (np.linalg.inv(a0 - z * eye)
           + gamma_field(t, z) @ np.linalg.inv(core)
           @ dual_gamma_field(t, np.conj(z)).conj().T)
    return float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(lhs)))


def transformed_triple(t, theta):
    """Boundary triple whose trace-0 restriction is the theta extension.

    The boundary maps are recombined as (gamma_b1 - theta gamma_b0,
    -gamma_b0) on the B side and with theta^H on the A side; the Weyl
    function of the result is (theta - M(z))^{-1}.
    """
    h0, h1 = t.boundary_dims
    if h0 != h1:
        raise ShapeError("transformed triple requires equal boundary dims")
    theta = np.atleast_2d(np.asarray(theta, dtype=complex))
    if theta.shape != (h0, h0):
        raise ShapeError(f"theta must be {h0} x {h0}, got {theta.shape}")
    return DualPairTriple(
        bstar=t.bstar, astar=t.astar,
        gamma_b0=t.gamma_b1 - theta @ t.gamma_b0,
        gamma_b1=-t.gamma_b0,
        gamma_a0=t.gamma_a1 - theta.conj().T @ t.gamma_a0,
        gamma_a1=-t.gamma_a0,
    )


@dataclass
class DualIndexResult:
    index: int
    ma_theta: int
    ma_reference: int
    radius: float
    nu: int = None


def index_multiplicity_check(t, theta, z0, eps=None, n=DEFAULT_NODES,
                             cluster_tol=1e-7):
    """Index of theta - M(.) at z0 with both algebraic multiplicities.

    Under the isolation precondition the index equals
    ma_theta - ma_reference.  When z0 is a regular point of the trace-0
    restriction but an eigenvalue of the theta restriction, the peeled
    factorization of theta - M(.) is run as well and its nu must agree
    with the index.
    """
    theta = np.atleast_2d(np.asarray(theta, dtype=complex))
    a0 = as_matrix(extension_operator(t))
    at = as_matrix(extension_operator(t, theta=theta))
    clusters_t = spectra.spectrum_clusters(at, cluster_tol)
    clusters_0 = spectra.spectrum_clusters(a0, cluster_tol)

    def local_mult(clusters):
        return sum(m for c, m in clusters if abs(c - z0) <= cluster_tol)

    other = [abs(c - z0) for c, _ in clusters_t + clusters_0
             if abs(c - z0) > cluster_tol]
    gap = min(other) if other else np.inf
    if eps is None:
        eps = min(0.4 * gap, 0.5)
    if eps <= 0 or eps >= gap:
        raise PreconditionError(
            f"disk condition violated: eps = {eps} vs gap = {gap}")

    ma_t = 0
    if local_mult(clusters_t):
        ma_t = spectra.eigen_multiplicities(at, z0, eps, n).algebraic
    ma_0 = 0
    if local_mult(clusters_0):
        ma_0 = spectra.eigen_multiplicities(a0, z0, eps, n).algebraic

    m = weyl_function(t)
    h0 = m.shape[0]
    fun = MatrixFunction(lambda z: theta - m(z), (h0, h0),
                         deriv_fn=lambda z: -m.deriv(z))
    idx = spectra.index(fun, z0, eps, n)

    nu = None
    if ma_0 == 0 and ma_t > 0:
        fact = factorize.howland_factorize(fun, z0, deriv_radius=eps / 2.0)
        nu = fact.nu
        ma_fun = spectra.argument_principle_multiplicity(fun, z0, eps, n)
        if not (nu == ma_fun == idx):
            raise ToleranceError(
                f"multiplicity coincidence fails: nu = {nu}, "
                f"m_a = {ma_fun}, index = {idx}")
    return DualIndexResult(index=idx, ma_theta=ma_t, ma_reference=ma_0,
                           radius=float(eps), nu=nu)


def discrete_schrodinger_dual_pair(n, q=None):
    """Boundary triple for the discrete Schrodinger operator on a path.

    The parameter space carries the values u_0 .. u_{n+1}; the interior
    values are the ambient space, the action at site k is
    -u_{k-1} + 2 u_k - u_{k+1} + q_k u_k, and the A side uses the complex
    conjugate potential so that the two sides form a genuine dual pair.
    Boundary data: trace 0 is (u_0, u_{n+1}), trace 1 the inward
    differences (u_1 - u_0, u_n - u_{n+1}); with these signs the Green
    identity holds exactly.

    For n = 1 the parameter space is 3-dimensional, so the stacked
    boundary maps cannot reach all of C^4 and the surjectivity part of the
    triple definition necessarily fails; all identity checks remain valid.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if q is None:
        q = np.zeros(n)
    q = np.asarray(q, dtype=complex).ravel()
    if q.shape != (n,):
        raise ValueError(f"potential must have length {n}, got {q.shape}")

    m = n + 2
    embed = np.zeros((n, m), dtype=complex)
    embed[:, 1:n + 1] = np.eye(n)

    def action_for(pot):
        t = np.zeros((n, m), dtype=complex)
        for i in range(n):
            t[i, i] = -1.0
            t[i, i + 1] = 2.0 + pot[i]
            t[i, i + 2] = -1.0
        return t

    gamma0 = np.zeros((2, m), dtype=complex)
    gamma0[0, 0] = 1.0
    gamma0[1, n + 1] = 1.0
    gamma1 = np.zeros((2, m), dtype=complex)
    gamma1[0, 0] = -1.0
    gamma1[0, 1] = 1.0
    gamma1[1, n] = 1.0
    gamma1[1, n + 1] = -1.0

    triple = DualPairTriple(
        bstar=ParameterizedOperator(embed=embed, action=action_for(q)),
        astar=ParameterizedOperator(embed=embed, action=action_for(q.conj())),
        gamma_b0=gamma0, gamma_b1=gamma1,
        gamma_a0=gamma0, gamma_a1=gamma1,
    )
    resid = check_green_identity(triple)
    if resid > 1e-12:
        raise ToleranceError(
            f"builder Green identity residual {resid:.3e} exceeds 1e-12")
    # Both reference restrictions must be representable with spectra, so
    # that their resolvent sets are nonempty.
    np.linalg.eigvals(as_matrix(extension_operator(triple)))
    np.linalg.eigvals(as_matrix(extension_operator(triple, side="a")))
    return triple
