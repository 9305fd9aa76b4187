"""Matrix-valued analytic/meromorphic functions as evaluators.

A MatrixFunction is a pointwise evaluator ``z -> M(z)`` with an optional
analytic derivative; products, inverses and pencils keep the algebra
closed.  Everything downstream only ever needs point values on contours.
"""

import numpy as np

from . import contour as _contour
from .errors import EvaluationAtSpectrumError, NonInvertibleError, ShapeError
from .tolerances import INVERSION_RTOL

__all__ = [
    "MatrixFunction", "constant", "from_pencil", "resolvent", "product",
    "inverse", "derivative_at",
]


class MatrixFunction:
    """Evaluator for a matrix-valued function of one complex variable.

    Parameters
    ----------
    eval_fn : callable
        Maps a complex point to an array of shape ``shape``.
    shape : tuple
        (rows, cols) of every value.
    deriv_fn : callable, optional
        Analytic derivative with the same shape.  When absent, callers fall
        back to Cauchy differentiation via :func:`derivative_at`.
    singular_hints : sequence of complex, optional
        Advisory list of known singularity locations.
    """

    def __init__(self, eval_fn, shape, deriv_fn=None, singular_hints=()):
        self._eval = eval_fn
        self.shape = (int(shape[0]), int(shape[1]))
        self._deriv = deriv_fn
        self.singular_hints = tuple(singular_hints)

    @property
    def dim(self):
        """Matrix size for square functions."""
        self.require_square()
        return self.shape[0]

    @property
    def has_derivative(self):
        return self._deriv is not None

    def require_square(self):
        if self.shape[0] != self.shape[1]:
            raise ShapeError(f"square function required, shape {self.shape}")

    def __call__(self, z):
        val = np.asarray(self._eval(complex(z)), dtype=complex)
        if val.shape != self.shape:
            raise ShapeError(
                f"evaluator returned shape {val.shape}, declared {self.shape}")
        return val

    def deriv(self, z):
        """Stored analytic derivative; raises if none was declared."""
        if self._deriv is None:
            raise ValueError("no stored derivative; use derivative_at")
        val = np.asarray(self._deriv(complex(z)), dtype=complex)
        if val.shape != self.shape:
            raise ShapeError(
                f"derivative returned shape {val.shape}, declared {self.shape}")
        return val


def constant(m):
    """Constant function z -> m with zero derivative."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    zero = np.zeros_like(m)
    return MatrixFunction(lambda z: m, m.shape, deriv_fn=lambda z: zero)


def from_pencil(a, b):
    """Linear pencil z -> a - z*b with exact derivative -b."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ShapeError(f"pencil needs equal square shapes, got {a.shape} "
                         f"and {b.shape}")
    return MatrixFunction(lambda z: a - z * b, a.shape,
                          deriv_fn=lambda z: -b)


def _solve_checked(m, rhs, z, what):
    """Linear solve that refuses numerically singular matrices."""
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0 or s[-1] < INVERSION_RTOL * s[0]:
        if what == "resolvent":
            raise EvaluationAtSpectrumError(
                f"evaluation at spectrum: z = {z}", z=z)
        raise NonInvertibleError(f"non-invertible at z = {z}", z=z)
    return np.linalg.solve(m, rhs)


def resolvent(t):
    """Resolvent function z -> (t - z I)^{-1} with derivative R(z)^2."""
    t = np.atleast_2d(np.asarray(t, dtype=complex))
    if t.shape[0] != t.shape[1]:
        raise ShapeError(f"square matrix required, got {t.shape}")
    n = t.shape[0]
    eye = np.eye(n, dtype=complex)

    def ev(z):
        return _solve_checked(t - z * eye, eye, z, "resolvent")

    def dv(z):
        r = ev(z)
        return r @ r

    return MatrixFunction(ev, (n, n), deriv_fn=dv)


def product(f, g):
    """Pointwise product f(z) g(z); derivative f'g + fg' when both exist."""
    if f.shape[1] != g.shape[0]:
        raise ShapeError(f"inner dimensions differ: {f.shape} x {g.shape}")
    shape = (f.shape[0], g.shape[1])

    def ev(z):
        return f(z) @ g(z)

    dv = None
    if f.has_derivative and g.has_derivative:
        def dv(z):
            return f.deriv(z) @ g(z) + f(z) @ g.deriv(z)

    hints = f.singular_hints + g.singular_hints
    return MatrixFunction(ev, shape, deriv_fn=dv, singular_hints=hints)


def inverse(f):
    """Pointwise inverse z -> f(z)^{-1}; derivative -f^{-1} f' f^{-1}."""
    f.require_square()
    n = f.shape[0]
    eye = np.eye(n, dtype=complex)

    def ev(z):
        return _solve_checked(f(z), eye, z, "inverse")

    dv = None
    if f.has_derivative:
        def dv(z):
            fi = ev(z)
            return -fi @ f.deriv(z) @ fi

    return MatrixFunction(ev, (n, n), deriv_fn=dv,
                          singular_hints=f.singular_hints)


def derivative_at(f, z, r, n=64):
    """f'(z), from the stored derivative or by Cauchy differentiation.

    The fallback integrates f(zeta)/(zeta - z)^2 over C(z; r), which
    requires f to be analytic on the closed disk of radius r around z.
    """
    if f.has_derivative:
        return f.deriv(z)
    c = _contour.make_circle(z, r, n)
    return _contour.cauchy_integral(lambda zeta: f(zeta) / (zeta - z) ** 2, c)
