from fractions import Fraction

import pytest
from hypothesis import given

from strongnil import QQ, QQ_EPS, DualScalar

from helpers import small_fractions


def test_dual_multiplication_rule():
    # (a + b eps)(c + d eps) = ac + (ad + bc) eps
    x = DualScalar.of(2, 3)
    y = DualScalar.of(5, -1)
    assert x * y == DualScalar.of(10, -2 + 15)


def test_eps_squares_to_zero():
    eps = QQ_EPS.eps
    assert not eps * eps
    assert eps * eps == QQ_EPS.zero


@given(small_fractions, small_fractions)
def test_pure_eps_products_vanish(b, d):
    assert not DualScalar.of(0, b) * DualScalar.of(0, d)


def test_mixed_scalar_arithmetic():
    x = DualScalar.of(1, 2)
    assert x + 1 == DualScalar.of(2, 2)
    assert 3 * x == DualScalar.of(3, 6)
    assert 1 - x == DualScalar.of(0, -2)
    assert -x == DualScalar.of(-1, -2)


def test_zero_test_and_one():
    assert not QQ_EPS.zero
    assert QQ_EPS.one
    assert QQ.zero == Fraction(0)
    assert QQ.one == Fraction(1)


def test_coercion_rules():
    assert QQ.coerce(Fraction(2, 4)) == Fraction(1, 2)
    assert QQ_EPS.coerce(3) == DualScalar.of(3, 0)
    with pytest.raises(TypeError):
        QQ.coerce(QQ_EPS.eps)
    with pytest.raises(TypeError):
        QQ.coerce(0.5)  # floats would smuggle rounding into exact arithmetic
