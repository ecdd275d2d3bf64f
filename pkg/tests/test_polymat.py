import random
from fractions import Fraction

import pytest

from strongnil import (
    Monomial,
    PolyMatrix,
    Polynomial,
    QMatrix,
    QQ,
    coefficient_matrices,
    conjugate,
    constant_column_kernel,
    fresh_tuple_product,
    jacobian,
    mat_mul,
    nilpotency_index,
    parse_poly,
    rename_to_tuple,
    trace,
    triangularize,
)
from strongnil.fixtures import dual_matrix, h4, h5, nc3_commutative
from strongnil.variables import xvar, yvar

from helpers import random_poly, random_strict_block_matrix, random_unimodular


def pmat(rows, ring=QQ):
    return PolyMatrix.from_strings(rows, ring)


# -- products -----------------------------------------------------------------


def test_product_with_identity_and_zero():
    m = pmat([["x1", "2"], ["0", "x2^2"]])
    assert mat_mul(m, PolyMatrix.identity(2)) == m
    assert mat_mul(m, PolyMatrix.zeros(2)).is_zero()


def test_h4_jacobian_squares_to_zero():
    j = jacobian(h4())
    assert (j @ j).is_zero()


def test_product_size_mismatch():
    with pytest.raises(ValueError):
        mat_mul(PolyMatrix.identity(2), PolyMatrix.identity(3))


def test_product_associativity_random():
    rng = random.Random(5)
    for _ in range(5):
        a, b, c = (
            PolyMatrix([[random_poly(rng, max_terms=2) for _ in range(2)] for _ in range(2)])
            for _ in range(3)
        )
        assert (a @ b) @ c == a @ (b @ c)


# -- nilpotency index -----------------------------------------------------------


def test_zero_matrix_index_one():
    assert nilpotency_index(PolyMatrix.zeros(3)) == 1


def test_h5_regular_index_three():
    assert nilpotency_index(jacobian(h5(3))) == 3


def test_dual_matrix_index_exceeds_size():
    assert nilpotency_index(dual_matrix(3)) == 4


def test_not_nilpotent_returns_none():
    assert nilpotency_index(pmat([["x1"]])) is None
    assert nilpotency_index(PolyMatrix.identity(2)) is None


def test_dual_search_bound_is_twice_the_size():
    from strongnil import QQ_EPS

    # The dual identity is not nilpotent; the search stops at 2m.
    assert nilpotency_index(PolyMatrix.identity(2, QQ_EPS)) is None
    # An explicit bound below the true index also reports None.
    assert nilpotency_index(dual_matrix(3), max_r=2) is None
    assert nilpotency_index(dual_matrix(3), max_r=4) == 4


# -- fresh tuple products ---------------------------------------------------------


def test_single_factor_is_a_renaming():
    m = pmat([["x1", "0"], ["x2", "x1*x2"]])
    assert fresh_tuple_product(m, 1) == rename_to_tuple(m, 1)


def test_h4_three_fold_product_vanishes():
    assert fresh_tuple_product(jacobian(h4()), 3).is_zero()


def test_h4_two_fold_product_entry():
    # Hand expansion of the bottom-left entry of the 2-fold product:
    # 3*y2_1^2 * 2*y1_1 + (-2*y2_1) * 3*y1_1^2.
    product = fresh_tuple_product(jacobian(h4()), 2)
    assert not product.is_zero()
    expected = parse_poly("6*y2_1^2*y1_1 - 6*y2_1*y1_1^2")
    assert product.entry(3, 0) == expected


def test_fresh_product_requires_x_variables():
    m = PolyMatrix([[Polynomial.variable(QQ, yvar(1, 1))]])
    with pytest.raises(ValueError):
        fresh_tuple_product(m, 2)
    with pytest.raises(ValueError):
        fresh_tuple_product(pmat([["x1"]]), 0)


def test_fresh_product_monotone_in_r():
    rng = random.Random(21)
    for _ in range(10):
        m, _, _ = random_strict_block_matrix(rng, max_size=4)
        for r in range(1, m.size + 1):
            if fresh_tuple_product(m, r).is_zero():
                assert fresh_tuple_product(m, r + 1).is_zero()
                break


def test_fresh_product_zeroness_invariant_under_label_reversal():
    rng = random.Random(22)
    for _ in range(8):
        m, _, _ = random_strict_block_matrix(rng, max_size=4)
        for r in range(1, m.size + 1):
            forward = fresh_tuple_product(m, r).is_zero()
            reversed_product = rename_to_tuple(m, 1)
            for j in range(2, r + 1):
                reversed_product = reversed_product @ rename_to_tuple(m, j)
            assert forward == reversed_product.is_zero()


# -- coefficient decomposition -----------------------------------------------------


def test_constant_matrix_decomposition():
    m = pmat([["2", "0"], ["0", "-1/3"]])
    decomposition = coefficient_matrices(m)
    assert list(decomposition) == [Monomial()]
    assert decomposition[Monomial()] == QMatrix([["2", "0"], ["0", "-1/3"]])


def test_scalar_variable_decomposition():
    m = pmat([["x1", "0"], ["0", "x1"]])
    decomposition = coefficient_matrices(m)
    mono = Monomial([(xvar(1), 1)])
    assert list(decomposition) == [mono]
    assert decomposition[mono] == QMatrix.identity(2)


def test_h4_jacobian_decomposition_and_reconstruction():
    j = jacobian(h4())
    decomposition = coefficient_matrices(j)
    monomials = {str(mono) for mono in decomposition}
    assert monomials == {"x1", "x1^2", "x1*x2", "x3"}
    rebuilt = PolyMatrix.zeros(4)
    for mono, c in decomposition.items():
        term = PolyMatrix(
            [
                [Polynomial.term(QQ, c.entries[i][k], mono) for k in range(4)]
                for i in range(4)
            ]
        )
        rebuilt = rebuilt + term
    assert rebuilt == j


def test_reconstruction_random():
    rng = random.Random(8)
    for _ in range(10):
        m = PolyMatrix([[random_poly(rng) for _ in range(3)] for _ in range(3)])
        rebuilt = PolyMatrix.zeros(3)
        for mono, c in coefficient_matrices(m).items():
            rebuilt = rebuilt + PolyMatrix(
                [
                    [Polynomial.term(QQ, c.entries[i][k], mono) for k in range(3)]
                    for i in range(3)
                ]
            )
        assert rebuilt == m


# -- constant column kernel -----------------------------------------------------------


def test_kernel_of_zero_matrix_is_full():
    vecs = constant_column_kernel(PolyMatrix.zeros(3))
    assert len(vecs) == 3


def test_kernel_of_identity_is_trivial():
    assert constant_column_kernel(PolyMatrix.identity(3)) == []


def test_h4_constant_kernel_is_e4():
    vecs = constant_column_kernel(jacobian(h4()))
    assert vecs == [(Fraction(0), Fraction(0), Fraction(0), Fraction(1))]


def test_kernel_vectors_kill_the_matrix():
    rng = random.Random(13)
    for _ in range(10):
        m, _, _ = random_strict_block_matrix(rng, max_size=4)
        for v in constant_column_kernel(m):
            assert all(not e for e in m.apply(v))


def test_kernel_requires_rational_ring():
    with pytest.raises(ValueError):
        constant_column_kernel(dual_matrix(2))


# -- trace ---------------------------------------------------------------------------


def test_trace_of_identity():
    assert trace(PolyMatrix.identity(4)) == Polynomial.constant(QQ, 4)


def test_trace_of_strictly_lower_triangular():
    m = pmat([["0", "0"], ["x1^2", "0"]])
    assert not trace(m)


def test_pair_trace_of_counterexample_matrix():
    # Direct expansion: the diagonal of M|y2 * M|y1 is
    # (0, y2_1*y1_1 - y1_1^2, -y2_1^2 + y2_1*y1_1), summing to
    # -(y2_1 - y1_1)^2.
    m = nc3_commutative()
    t = trace(fresh_tuple_product(m, 2))
    assert t == parse_poly("-(y2_1 - y1_1)^2")
    assert t == parse_poly("2*y2_1*y1_1 - y2_1^2 - y1_1^2")


def test_trace_commutes_for_products():
    rng = random.Random(17)
    for _ in range(10):
        a = PolyMatrix([[random_poly(rng, max_terms=2) for _ in range(3)] for _ in range(3)])
        b = PolyMatrix([[random_poly(rng, max_terms=2) for _ in range(3)] for _ in range(3)])
        assert trace(a @ b) == trace(b @ a)


# -- conjugation ------------------------------------------------------------------------


def test_conjugate_by_identity():
    j = jacobian(h4())
    assert conjugate(j, QMatrix.identity(4)) == j


def test_conjugate_round_trip():
    from strongnil import invert

    j = jacobian(h4())
    rng = random.Random(19)
    t = random_unimodular(rng, 4)
    assert conjugate(conjugate(j, t), invert(t)) == j


def test_conjugated_h4_recovers_blocks():
    j = jacobian(h4())
    rng = random.Random(23)
    for _ in range(3):
        t = random_unimodular(rng, 4)
        cert = triangularize(conjugate(j, t))
        assert cert.blocks == (1, 2, 1)


def test_conjugate_rejects_singular():
    from strongnil import SingularMatrixError

    with pytest.raises(SingularMatrixError):
        conjugate(jacobian(h4()), QMatrix.zeros(4, 4))
