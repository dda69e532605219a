from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lidstone.scalars import (
    GaussianRational,
    exact_det,
    exact_inverse,
    format_exact,
    gaussian,
    parse_exact,
    to_exact,
)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)
gaussians = st.builds(gaussian, rationals, rationals)
nonzero = gaussians.filter(lambda x: x != 0)


def test_gaussian_narrows_to_fraction():
    assert gaussian(3, 0) == Fraction(3)
    assert type(gaussian(3, 0)) is Fraction
    i = gaussian(0, 1)
    assert i * i == -1 and type(i * i) is Fraction


def test_invariant_rejects_zero_imag():
    with pytest.raises(ValueError):
        GaussianRational(1, 0)


def test_normalized_parts():
    x = gaussian(Fraction(4, 8), Fraction(-6, 4))
    assert (x.re.numerator, x.re.denominator) == (1, 2)
    assert (x.im.numerator, x.im.denominator) == (-3, 2)


@given(nonzero, nonzero)
def test_field_inverse(a, b):
    assert (a / b) * (b / a) == 1


@given(gaussians, gaussians, gaussians)
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(gaussians)
def test_format_parse_roundtrip(x):
    assert parse_exact(format_exact(x)) == x


@pytest.mark.parametrize("text, value", [
    ("-3/4", Fraction(-3, 4)),
    ("i", gaussian(0, 1)),
    ("-2i", gaussian(0, -2)),
    ("1/2+1/3i", gaussian(Fraction(1, 2), Fraction(1, 3))),
    ("5-i", gaussian(5, -1)),
])
def test_parse(text, value):
    assert parse_exact(text) == value


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_exact("1/2x")


def test_float_mixing_goes_approximate():
    assert isinstance(gaussian(1, 1) * 0.5, complex)
    with pytest.raises(TypeError):
        to_exact(0.5)


def test_det_and_inverse():
    m = [[2, 1, 0], [1, 3, gaussian(0, 1)], [0, 1, 4]]
    det = exact_det(m)
    assert det == 2 * (12 - gaussian(0, 1)) - 4
    inv = exact_inverse(m)
    for i in range(3):
        for j in range(3):
            assert sum(m[i][k] * inv[k][j] for k in range(3)) == int(i == j)
    with pytest.raises(ZeroDivisionError):
        exact_inverse([[1, 2], [2, 4]])
