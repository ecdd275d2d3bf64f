import pytest
from hypothesis import given, settings

from strongnil import ParseError, Polynomial, QQ, QQ_EPS, parse_poly
from strongnil.variables import xvar, xvars, yvar

from helpers import dual_polys, rational_polys


def test_fixture_component_parses():
    p = parse_poly("3*x2*x1^2 - 2*x3*x1")
    assert str(p) == "3*x1^2*x2 - 2*x1*x3"
    assert p.total_degree() == 3


def test_zero_literal():
    p = parse_poly("0")
    assert not p
    assert p.terms == {}


def test_cancellation_in_source():
    assert not parse_poly("x1^2 - x1^2")


def test_rational_coefficients():
    p = parse_poly("1/2*x1 - 3/4")
    assert str(p) == "1/2*x1 - 3/4"


def test_parenthesised_products_are_expanded():
    assert parse_poly("(x1 + x2)*(x1 - x2)") == parse_poly("x1^2 - x2^2")
    assert parse_poly("2*(x1 + 1)") == parse_poly("2*x1 + 2")


def test_leading_sign():
    assert parse_poly("-x1 + 2") == parse_poly("2 - x1")


def test_tuple_and_parameter_variables():
    p = parse_poly("y2_3*t1 - x1")
    assert p.variables() == {yvar(2, 3), xvar(1), __import__("strongnil").tvar(1)}


def test_implicit_multiplication_rejected():
    with pytest.raises(ParseError) as err:
        parse_poly("2x1")
    assert err.value.position == 1


def test_unknown_variable_with_position():
    with pytest.raises(ParseError) as err:
        parse_poly("x1 + z3")
    assert "z3" in str(err.value)
    assert err.value.position == 5


def test_allowed_variable_set_is_enforced():
    with pytest.raises(ParseError):
        parse_poly("x5", allowed_vars=xvars(4))
    assert parse_poly("x4", allowed_vars=xvars(4)) == Polynomial.variable(QQ, xvar(4))


def test_division_is_only_for_coefficients():
    with pytest.raises(ParseError):
        parse_poly("x1/2")


def test_unbalanced_parenthesis():
    with pytest.raises(ParseError):
        parse_poly("(x1 + 2")


def test_trailing_garbage():
    with pytest.raises(ParseError):
        parse_poly("x1 )")


def test_zero_denominator():
    with pytest.raises(ParseError):
        parse_poly("1/0")


def test_eps_requires_dual_ring():
    with pytest.raises(ParseError):
        parse_poly("eps")
    p = parse_poly("eps", QQ_EPS)
    assert p == Polynomial.constant(QQ_EPS, QQ_EPS.eps)


def test_eps_squared_is_zero_through_parser():
    assert not parse_poly("eps^2", QQ_EPS)
    assert not parse_poly("eps*eps", QQ_EPS)


def test_dual_mixed_coefficient_round_trip():
    p = parse_poly("x1 + 2*eps*x1 - eps", QQ_EPS)
    assert parse_poly(str(p), QQ_EPS) == p


@settings(max_examples=80, deadline=None)
@given(rational_polys())
def test_print_parse_round_trip(p):
    assert parse_poly(str(p)) == p


@settings(max_examples=60, deadline=None)
@given(dual_polys())
def test_print_parse_round_trip_dual(p):
    assert parse_poly(str(p), QQ_EPS) == p
