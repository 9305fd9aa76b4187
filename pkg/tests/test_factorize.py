import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from merospec import factorize as fz
from merospec import laurent, spectra
from merospec.errors import FactorizationError
from merospec.families import (diagonal_power_function, jordan_block,
                               rational_family)
from merospec.matfun import MatrixFunction, from_pencil, inverse

E11 = np.diag([1.0, 0.0]).astype(complex)
E22 = np.diag([0.0, 1.0]).astype(complex)


def test_step_on_diagonal_function():
    f = diagonal_power_function(0.0, [1, 0])
    p1, q1, a1 = fz.howland_step(f, 0.0)
    np.testing.assert_allclose(p1, E11, atol=1e-12)
    np.testing.assert_allclose(q1, E22, atol=1e-12)
    np.testing.assert_allclose(a1(0.0), np.diag([-1.0, 1.0]), atol=1e-12)
    # reconstruction [q1 - z p1] a1(z) == f(z)
    for z in (0.2, -0.1 + 0.3j):
        rec = (q1 - z * p1) @ a1(z)
        np.testing.assert_allclose(rec, f(z), atol=1e-12)


def test_step_on_scalar_multiple_of_identity():
    f = diagonal_power_function(0.0, [1, 1])
    p1, q1, a1 = fz.howland_step(f, 0.0)
    np.testing.assert_allclose(q1, np.zeros((2, 2)), atol=1e-12)
    np.testing.assert_allclose(p1, np.eye(2), atol=1e-12)
    for z in (0.0, 0.4j, 1.0):
        np.testing.assert_allclose(a1(z), -np.eye(2), atol=1e-12)


def test_step_on_jordan_pencil():
    f = from_pencil(jordan_block(0, 2), np.eye(2))
    p1, _, a1 = fz.howland_step(f, 0.0)
    np.testing.assert_allclose(p1, E22, atol=1e-12)
    assert int(np.rint(np.trace(p1).real)) == 1
    for z in (0.1, 0.2j):
        rec = (np.eye(2) - p1 - z * p1) @ a1(z)
        assert np.linalg.norm(rec - f(z)) < 1e-10


def test_step_refuses_invertible_value():
    f = diagonal_power_function(0.0, [0, 0])
    with pytest.raises(FactorizationError, match="nothing to factor"):
        fz.howland_step(f, 0.0)


@pytest.mark.parametrize("exps, n0, p_seq, nu, partial", [
    ([1, 0], 1, [1], 1, [1]),
    ([1, 2], 2, [2, 1], 3, [1, 2]),
    ([3, 0], 3, [1, 1, 1], 3, [3]),
    ([2, 2, 0], 2, [2, 2], 4, [2, 2]),
])
def test_factorize_diagonal_powers(exps, n0, p_seq, nu, partial):
    fact = fz.howland_factorize(diagonal_power_function(0.0, exps), 0.0)
    assert fact.n0 == n0
    assert [p for _, _, p in fact.steps] == p_seq
    assert fact.nu == nu
    assert fact.partial_multiplicities == partial


def test_factorize_jordan_pencil():
    f = from_pencil(jordan_block(0, 2), np.eye(2))
    fact = fz.howland_factorize(f, 0.0)
    assert fact.n0 == 2
    assert [p for _, _, p in fact.steps] == [1, 1]
    assert fact.nu == 2
    assert fact.partial_multiplicities == [2]


def test_reconstruction_on_two_circles():
    for member in rational_family(seed=31, count=8, analytic_only=True):
        fact = fz.howland_factorize(member.fun, member.z0)
        for radius in (0.12, 0.3):
            for k in range(10):
                z = member.z0 + radius * np.exp(2j * np.pi * k / 10)
                val = member.fun(z)
                rec = fact.factor_product_at(z)
                rel = np.linalg.norm(rec - val) / max(np.linalg.norm(val), 1e-30)
                assert rel <= 1e-8


def test_tail_pole_order_drops_by_one_per_step():
    # peeling one factor reduces the pole order of the inverse by one
    f = diagonal_power_function(0.0, [1, 2])
    assert laurent.principal_part(inverse(f), 0, 0.3).pole_order == 2
    _, _, a1 = fz.howland_step(f, 0.0)
    assert laurent.principal_part(inverse(a1), 0, 0.3).pole_order == 1


@pytest.mark.parametrize("exps, expected", [
    ([1, 0], 1),
    ([1, 2], 3),
])
def test_block_determinant_multiplicity_diagonal(exps, expected):
    f = diagonal_power_function(0.0, exps)
    assert fz.nu_via_block_determinant(f, 0.0, 0.05) == expected


def test_block_determinant_multiplicity_jordan():
    f = from_pencil(jordan_block(0, 2), np.eye(2))
    assert fz.nu_via_block_determinant(f, 0.0, 0.05) == 2


def test_simple_pole_criterion():
    f1 = diagonal_power_function(0.0, [1, 0])
    assert fz.simple_pole_criterion(fz.howland_factorize(f1, 0.0), f1)

    f2 = diagonal_power_function(0.0, [1, 2])
    assert not fz.simple_pole_criterion(fz.howland_factorize(f2, 0.0), f2)

    f3 = from_pencil(jordan_block(0, 2), np.eye(2))
    assert not fz.simple_pole_criterion(fz.howland_factorize(f3, 0.0), f3)


def _nu_block_with_retry(fun, z0):
    for eps in (0.08, 0.04, 0.02, 0.01):
        try:
            return fz.nu_via_block_determinant(fun, z0, eps)
        except Exception:
            continue
    raise AssertionError("no usable radius found")


def test_all_multiplicity_routes_agree_on_family():
    for member in rational_family(seed=99, count=12, analytic_only=True):
        fact = fz.howland_factorize(member.fun, member.z0)
        nu_block = _nu_block_with_retry(member.fun, member.z0)
        ma = spectra.argument_principle_multiplicity(member.fun, member.z0, 0.1)
        oracle = spectra.det_winding_oracle(member.fun, member.z0, 0.1)
        assert fact.nu == nu_block == ma == oracle == member.winding
        if member.partial_multiplicities is not None:
            assert fact.partial_multiplicities == member.partial_multiplicities


def test_first_rank_is_kernel_dimension_and_monotone():
    for member in rational_family(seed=13, count=8, analytic_only=True):
        fact = fz.howland_factorize(member.fun, member.z0)
        ranks = [p for _, _, p in fact.steps]
        assert all(ranks[i] >= ranks[i + 1] for i in range(len(ranks) - 1))
        a0 = member.fun(member.z0)
        s = np.linalg.svd(a0, compute_uv=False)
        dim_ker = int(np.count_nonzero(s <= 1e-8 * max(s[0], 1e-300)))
        assert ranks[0] == dim_ker
        assert fact.nu >= fact.n0
        assert fact.nu >= dim_ker


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=8))
def test_conjugate_partition_involution(parts):
    p = sorted(parts, reverse=True)
    conj = fz.conjugate_partition(p)
    back = fz.conjugate_partition(sorted(conj, reverse=True))
    assert back == sorted(p)
    assert sum(conj) == sum(p)


def test_step_limit_bounds_the_iteration():
    high_order = diagonal_power_function(0.0, [8])
    with pytest.raises(FactorizationError, match="step limit"):
        fz.howland_factorize(high_order, 0.0, step_limit=4)
