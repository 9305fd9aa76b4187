import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from merospec.contour import (cauchy_integral, make_circle, scalar_winding,
                              winding_from_samples)
from merospec.errors import ContourError


def test_make_circle_rejects_bad_arguments():
    with pytest.raises(ValueError):
        make_circle(0, 1.0, 4)
    with pytest.raises(ValueError):
        make_circle(0, -1.0, 16)
    with pytest.raises(ValueError):
        make_circle(0, 0.0, 16)


def test_make_circle_eighth_roots():
    c = make_circle(0, 1.0, 8)
    for target in (1, 1j, -1, -1j):
        assert np.min(np.abs(c.nodes - target)) < 1e-14


def test_make_circle_first_node_at_angle_zero():
    c = make_circle(2 + 1j, 0.5, 16)
    assert abs(c.nodes[0] - (2.5 + 1j)) < 1e-14


def test_make_circle_nodes_on_circle_in_order():
    c = make_circle(0.3 - 0.2j, 0.7, 32)
    radii = np.abs(c.nodes - c.center)
    np.testing.assert_allclose(radii, 0.7, rtol=1e-14)
    angles = np.angle(c.nodes - c.center) % (2 * np.pi)
    assert np.all(np.diff(angles) > 0)


def test_cauchy_residue_of_inverse():
    c = make_circle(0, 1.0, 64)
    val = cauchy_integral(lambda z: np.array([[1.0 / z]]), c)
    assert abs(val[0, 0] - 1.0) < 1e-12


def test_cauchy_analytic_integrand_vanishes():
    c = make_circle(0, 1.0, 64)
    val = cauchy_integral(lambda z: np.array([[1.0 + 0j]]), c)
    assert abs(val[0, 0]) < 1e-12


def test_cauchy_resolvent_projection():
    t = np.diag([1.0, 2.0])
    c = make_circle(1.0, 0.5, 64)
    val = -cauchy_integral(lambda z: np.linalg.inv(t - z * np.eye(2)), c)
    np.testing.assert_allclose(val, np.diag([1.0, 0.0]), atol=1e-10)


def test_cauchy_reports_failing_node():
    c = make_circle(0, 1.0, 8)

    def bad(z):
        if abs(z - 1j) < 1e-9:
            raise ZeroDivisionError("boom")
        return np.eye(1)

    with pytest.raises(ContourError, match="node 2"):
        cauchy_integral(bad, c)


@pytest.mark.parametrize("h, center, radius, expected", [
    (lambda z: z, 0, 1.0, 1),
    (lambda z: 1.0 / z, 0, 1.0, -1),
    (lambda z: (z - 0.3) ** 2, 0.3, 0.1, 2),
    (lambda z: (z - 0.1) ** 3 / (z + 0.2), 0, 0.5, 2),
])
def test_scalar_winding_values(h, center, radius, expected):
    assert scalar_winding(h, make_circle(center, radius, 256)) == expected


def test_scalar_winding_zero_on_contour():
    c = make_circle(0, 1.0, 64)
    with pytest.raises(ContourError, match="zero/pole on contour"):
        scalar_winding(lambda z: z - 1.0, c)


def test_scalar_winding_under_resolved():
    c = make_circle(0, 1.0, 8)
    with pytest.raises(ContourError, match="under-resolved"):
        scalar_winding(lambda z: z ** 3, c)


@settings(max_examples=30, deadline=None)
@given(re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_winding_invariant_under_nonvanishing_factor(re, im):
    const = complex(re, im)
    if abs(const) < 1e-3:
        const = 1.0 + 0j
    c = make_circle(0, 1.0, 128)
    base = scalar_winding(lambda z: z ** 2, c)
    assert scalar_winding(lambda z: const * z ** 2, c) == base
    assert scalar_winding(lambda z: np.exp(z) * z ** 2, c) == base


def test_winding_additivity():
    c = make_circle(0, 0.5, 256)
    h1 = lambda z: z ** 2
    h2 = lambda z: (z - 0.1) / (z + 0.2)
    w1 = scalar_winding(h1, c)
    w2 = scalar_winding(h2, c)
    w12 = scalar_winding(lambda z: h1(z) * h2(z), c)
    assert w12 == w1 + w2


def test_winding_from_samples_closed_loop():
    th = 2 * np.pi * np.arange(200) / 200
    assert winding_from_samples(np.exp(3j * th)) == 3
    assert winding_from_samples(np.exp(-2j * th) * (2 + 0j)) == -2


def test_quadrature_error_drops_fast_with_node_doubling():
    # Residue of 1/z plus a term analytic up to |z| = 2: each doubling of N
    # must gain at least 1e3 until the error floor.
    exact = 1.0
    errs = []
    for n in (16, 32, 64):
        c = make_circle(0, 1.0, n)
        val = cauchy_integral(lambda z: np.array([[1.0 / z + 1.0 / (z - 2.0)]]), c)
        errs.append(abs(val[0, 0] - exact))
    assert errs[1] < errs[0] / 1e3
    assert errs[2] < 1e-12 or errs[2] < errs[1] / 1e3
    assert errs[-1] <= 1e-12
