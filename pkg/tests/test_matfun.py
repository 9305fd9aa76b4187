import numpy as np
import pytest

from merospec.errors import (EvaluationAtSpectrumError, NonInvertibleError,
                             ShapeError)
from merospec.matfun import (MatrixFunction, constant, derivative_at,
                             from_pencil, inverse, product, resolvent)

J2 = np.array([[0.0, 1.0], [0.0, 0.0]])


def test_pencil_values_and_derivative():
    f = from_pencil(J2, np.eye(2))
    np.testing.assert_allclose(f(0.0), J2)
    g = from_pencil(np.eye(2), np.eye(2))
    np.testing.assert_allclose(g(1.0), np.zeros((2, 2)))
    for z in (0.0, 1.3 - 0.2j):
        np.testing.assert_allclose(f.deriv(z), -np.eye(2))


def test_pencil_shape_mismatch():
    with pytest.raises(ShapeError):
        from_pencil(np.eye(2), np.eye(3))


def test_resolvent_values():
    r = resolvent(np.diag([1.0, 2.0]))
    np.testing.assert_allclose(r(0.0), np.diag([1.0, 0.5]))
    np.testing.assert_allclose(r.deriv(0.0), np.diag([1.0, 0.25]))
    with pytest.raises(EvaluationAtSpectrumError):
        r(1.0)


def test_product_and_identity():
    zid = MatrixFunction(lambda z: z * np.eye(2), (2, 2),
                         deriv_fn=lambda z: np.eye(2))
    sq = product(zid, zid)
    np.testing.assert_allclose(sq(2.0), 4.0 * np.eye(2))
    np.testing.assert_allclose(sq.deriv(2.0), 4.0 * np.eye(2))
    ident = constant(np.eye(2))
    both = product(ident, zid)
    for z in (0.3, -1j):
        np.testing.assert_allclose(both(z), zid(z))


def test_product_shape_mismatch():
    f = constant(np.ones((2, 3)))
    with pytest.raises(ShapeError):
        product(f, f)


def test_inverse_values_and_involution():
    f = MatrixFunction(lambda z: np.diag([z, 1.0 + 0j]), (2, 2),
                       deriv_fn=lambda z: np.diag([1.0 + 0j, 0.0]))
    fi = inverse(f)
    np.testing.assert_allclose(fi(2.0), np.diag([0.5, 1.0]))
    with pytest.raises(NonInvertibleError):
        fi(0.0)
    fii = inverse(fi)
    for z in (2.0, 0.7 - 0.3j):
        np.testing.assert_allclose(fii(z), f(z), rtol=1e-10)


def test_inverse_derivative_formula():
    f = MatrixFunction(lambda z: np.array([[1.0, z], [0.0, 1.0]]), (2, 2),
                       deriv_fn=lambda z: np.array([[0.0, 1.0], [0.0, 0.0]]))
    fi = inverse(f)
    h = 1e-6
    fd = (fi(0.5 + h) - fi(0.5 - h)) / (2 * h)
    np.testing.assert_allclose(fi.deriv(0.5), fd, rtol=1e-6)


def test_derivative_at_examples():
    f = from_pencil(np.diag([3.0, -1.0]), np.eye(2))
    np.testing.assert_allclose(derivative_at(f, 0.7j, 0.2), -np.eye(2))

    sq = MatrixFunction(lambda z: np.array([[z ** 2]]), (1, 1))
    assert abs(derivative_at(sq, 1.0, 0.1)[0, 0] - 2.0) < 1e-10

    r = resolvent(np.diag([1.0]))
    assert abs(derivative_at(r, 0.0, 0.25)[0, 0] - 1.0) < 1e-10


def test_stored_derivative_matches_cauchy_fallback():
    rng = np.random.default_rng(7)
    t = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    r = resolvent(t)
    bare = MatrixFunction(r._eval, r.shape)  # same evaluator, no derivative
    for _ in range(4):
        z = 3.0 + rng.standard_normal() + 1j * (3.0 + rng.standard_normal())
        stored = r.deriv(z)
        fallback = derivative_at(bare, z, 0.3)
        assert np.linalg.norm(stored - fallback) <= 1e-8 * np.linalg.norm(stored)


def test_derivative_matches_finite_difference():
    rng = np.random.default_rng(3)
    t = rng.standard_normal((4, 4))
    r = resolvent(t)
    z = 0.4 + 2.1j
    h = 1e-6
    fd = (r(z + h) - r(z - h)) / (2 * h)
    assert np.linalg.norm(r.deriv(z) - fd) <= 1e-6 * np.linalg.norm(fd)


def test_inverse_of_product_is_reversed_product_of_inverses():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    f = from_pencil(a, np.eye(3))
    g = resolvent(a + 4 * np.eye(3))
    left = inverse(product(f, g))
    right = product(inverse(g), inverse(f))
    for z in (0.2 + 9.0j, -7.5):
        np.testing.assert_allclose(left(z), right(z), rtol=1e-10, atol=1e-12)


def test_rectangular_rejects_square_only_operations():
    f = constant(np.ones((2, 3)))
    with pytest.raises(ShapeError):
        inverse(f)
    with pytest.raises(ShapeError):
        _ = f.dim


def test_declared_shape_enforced():
    f = MatrixFunction(lambda z: np.eye(3), (2, 2))
    with pytest.raises(ShapeError):
        f(0.0)
