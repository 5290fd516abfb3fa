import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import jacobi_series
from zeromodes.specfun import (
    JacobiParams,
    gudermannian_phase,
    jacobi_poly,
    jacobi_poly_derivative,
)

finite = st.floats(-50, 50, allow_nan=False)
coef = st.floats(-3, 3, allow_nan=False)
complex_param = st.builds(complex, coef, coef)
small_z = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)),
                    st.floats(0, 2), st.floats(0, 2 * math.pi))


def test_phase_values():
    assert gudermannian_phase(0.0) == 0.0
    assert gudermannian_phase(1e4) == pytest.approx(math.pi / 2, abs=0)
    assert gudermannian_phase(-1e4) == pytest.approx(-math.pi / 2, abs=0)
    # independent 30-digit evaluation
    assert gudermannian_phase(1.0) == pytest.approx(0.865769483239658624, abs=1e-15)
    assert gudermannian_phase(1.0) == pytest.approx(2 * math.atan(math.tanh(0.5)), abs=1e-15)


def test_phase_large_argument_no_overflow():
    with np.errstate(all="raise"):
        out = gudermannian_phase(np.array([-800.0, 701.0, 1e6]))
    np.testing.assert_array_equal(out, [-math.pi / 2, math.pi / 2, math.pi / 2])


@given(finite)
def test_phase_is_odd(x):
    assert gudermannian_phase(-x) == -gudermannian_phase(x)


def test_jacobi_degree_zero_and_one():
    a, b = 0.3 - 1.2j, -0.7 + 0.4j
    assert jacobi_poly(JacobiParams(a, b, 0), 2.5 + 1j) == 1
    z = 0.4 - 0.9j
    expected = (a - b) / 2 + (a + b + 2) * z / 2
    assert jacobi_poly(JacobiParams(a, b, 1), z) == pytest.approx(expected, abs=1e-15)


def test_jacobi_at_one_matches_binomial():
    # P_n^{(a,b)}(1) = binomial(n + a, n)
    assert jacobi_poly(JacobiParams(1, 1, 2), 1.0) == pytest.approx(math.comb(3, 2))
    for n in range(6):
        assert jacobi_poly(JacobiParams(2, 0.5, n), 1.0) == pytest.approx(math.comb(n + 2, n))


def test_jacobi_matches_mpmath():
    for n in range(7):
        for a, b, z in [(0.5 - 1j, -1.5 + 2j, 0.3j), (-4.5 - 1j, -3.5 + 1j, 1j * math.sinh(1.3))]:
            ref = complex(mp.jacobi(n, a, b, z))
            got = jacobi_poly(JacobiParams(a, b, n), z)
            assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=200)
@given(complex_param, complex_param, st.integers(0, 10), small_z)
def test_recurrence_matches_series(a, b, n, z):
    ref = jacobi_series(a, b, n, z)
    got = jacobi_poly(JacobiParams(a, b, n), z)
    # near-cancelling sums have no meaningful relative accuracy; compare to term size
    scale = max(1.0, abs(ref), jacobi_series(abs(a), abs(b), n, -abs(z)).real)
    assert abs(got - ref) <= 1e-10 * scale


@given(st.floats(-1, 5), st.floats(-1, 5), st.integers(0, 8), st.floats(-3, 3))
def test_real_parameters_give_real_values(a, b, n, x):
    val = jacobi_poly(JacobiParams(a, b, n), x)
    assert abs(val.imag) <= 1e-12


def test_degenerate_recurrence_uses_binomial_sum():
    # a + b = -2 makes the k = 2 recurrence denominator vanish
    a, b = -0.5 + 0.25j, -1.5 - 0.25j
    for n in range(2, 6):
        z = 0.7 + 0.2j
        assert jacobi_poly(JacobiParams(a, b, n), z) == pytest.approx(jacobi_series(a, b, n, z), rel=1e-12)


def test_vectorised_argument():
    p = JacobiParams(-1.5 - 1j, 1.5 + 1j, 3)
    zs = 1j * np.sinh(np.linspace(-3, 3, 7))
    np.testing.assert_allclose(jacobi_poly(p, zs), [jacobi_poly(p, z) for z in zs], rtol=1e-14)


def test_derivative_examples():
    a, b = 0.3 + 0.2j, -1.1 + 0.5j
    assert jacobi_poly_derivative(JacobiParams(a, b, 0), 1.7) == 0
    for z in (0.0, 1.3 - 0.4j):
        assert jacobi_poly_derivative(JacobiParams(a, b, 1), z) == pytest.approx((a + b + 2) / 2)
    legendre2 = JacobiParams(0, 0, 2)
    h = 1e-6
    fd = (jacobi_poly(legendre2, h) - jacobi_poly(legendre2, -h)) / (2 * h)
    assert abs(fd) < 1e-9
    assert jacobi_poly_derivative(legendre2, 0.0) == 0


@settings(max_examples=200)
@given(complex_param, complex_param, st.integers(1, 10), small_z)
def test_derivative_matches_central_difference(a, b, n, z):
    p = JacobiParams(a, b, n)
    h = 1e-6
    fd = (jacobi_poly(p, z + h) - jacobi_poly(p, z - h)) / (2 * h)
    got = jacobi_poly_derivative(p, z)
    scale = max(1.0, abs(got), jacobi_series(abs(a) + 1, abs(b) + 1, n, -abs(z) - 1).real)
    assert abs(got - fd) <= 1e-6 * scale


def test_second_derivative_matches_difference_of_first():
    p = JacobiParams(-3.2 - 1j, -2.1 + 1j, 4)
    z, h = 0.8j, 1e-5
    fd = (jacobi_poly_derivative(p, z + h) - jacobi_poly_derivative(p, z - h)) / (2 * h)
    assert jacobi_poly_derivative(p, z, order=2) == pytest.approx(fd, rel=1e-8)
    assert jacobi_poly_derivative(p, z, order=5) == 0


def test_invalid_degree():
    with pytest.raises(ValueError):
        JacobiParams(0, 0, -1)
    with pytest.raises(ValueError):
        JacobiParams(float("inf"), 0, 1)
