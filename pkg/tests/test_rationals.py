from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kellerlab.rationals import GaussianRational, I, ONE, ZERO, gr

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
gaussians = st.builds(GaussianRational, rationals, rationals)


def test_construction_normalizes():
    c = GaussianRational(Fraction(2, 4), Fraction(-3, -6))
    assert c.re == Fraction(1, 2) and c.im == Fraction(1, 2)
    assert c.re.denominator > 0


def test_float_embedding_is_exact():
    z = 0.1 + 0.25j
    c = GaussianRational.from_complex(z)
    assert float(c.re) == 0.1 and float(c.im) == 0.25
    assert c.im == Fraction(1, 4)


@given(gaussians, gaussians, gaussians)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(gaussians)
def test_multiplicative_inverse(a):
    if not a.is_zero():
        assert a / a == ONE
        assert a * (ONE / a) == ONE


def test_i_squared():
    assert I * I == -ONE


def test_powers():
    x = gr("3/2", "1/2")
    assert x ** 0 == ONE
    assert x ** 3 == x * x * x
    assert x ** -2 == ONE / (x * x)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_abs_squared():
    assert gr(3, 4).abs_squared() == Fraction(25)
    assert gr("1/2", "1/2").to_complex() == 0.5 + 0.5j
