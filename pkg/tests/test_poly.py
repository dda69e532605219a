import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lidstone.poly import (
    Polynomial,
    antiderivative_vanishing_at,
    derivative,
    falling_factorial,
    format_polynomial,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
polys = st.lists(rationals, max_size=12).map(Polynomial)
Z = Polynomial([0, 1])


@pytest.mark.parametrize("a, b, out", [(3, 2, 6), (2, 5, 0), (5, 0, 1), (0, 0, 1)])
def test_falling_factorial(a, b, out):
    assert falling_factorial(a, b) == out


def test_derivative_examples():
    assert derivative(Z ** 3, 2) == 6 * Z
    assert derivative(Z ** 3, 4).is_zero
    w1 = Fraction(3, 7)
    omega = (Z * Z - 2 * w1 * Z) / 2
    assert derivative(omega, 1) == Z - w1


def test_antiderivative_examples():
    w0 = Fraction(-2, 5)
    assert antiderivative_vanishing_at(Polynomial([1]), 1, w0) == Z - w0
    assert antiderivative_vanishing_at(Z, 2, 0) == Z ** 3 / 6
    w1 = Fraction(5, 3)
    assert antiderivative_vanishing_at(Z - w1, 1, 0) == ((Z - w1) ** 2 - w1 ** 2) / 2


@given(polys, st.integers(0, 6), rationals)
def test_antiderivative_then_derivative(p, k, b):
    q = antiderivative_vanishing_at(p, k, b)
    assert derivative(q, k) == p
    assert all(q.derivative_at(i, b) == 0 for i in range(k))


@given(polys, polys, rationals, rationals, st.integers(0, 5))
def test_derivative_linear(p, q, a, b, k):
    assert derivative(p * a + q * b, k) == derivative(p, k) * a + derivative(q, k) * b


def test_trailing_zeros_trimmed():
    p = Polynomial([1, 2, 0, 0])
    assert p.degree == 1 and Polynomial([0, 0]).degree == -1


def test_format():
    assert format_polynomial((Z ** 3 - Z) / 6) == "(-1/6)z + (1/6)z^3"
    assert format_polynomial(Polynomial()) == "0"


def test_non_finite_rejected():
    with pytest.raises(FloatingPointError):
        Polynomial([1.0, float("nan")])


def test_approx_matches_exact_evaluation():
    rng = random.Random(7)
    for _ in range(30):
        deg = rng.randint(0, 50)
        p = Polynomial(Fraction(rng.randint(-99, 99), rng.randint(1, 20)) for _ in range(deg + 1))
        z = Fraction(rng.randint(-1000, 1000), 100)
        exact = p(z)
        approx = p.to_approx()(complex(z))
        scale = sum(abs(float(c)) * abs(float(z)) ** i for i, c in enumerate(p.coeffs)) or 1.0
        assert abs(approx - float(exact)) <= 1e-12 * scale
        assert abs(p.evaluate_many([complex(z)])[0] - float(exact)) <= 1e-12 * scale


def test_compose_linear():
    p = Z ** 2 + 1
    assert p.compose_linear(2, -1) == (2 * Z - 1) ** 2 + 1
