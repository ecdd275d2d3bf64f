"""Shared builders and independent oracles for the test suite.

The oracles here (plain Gaussian elimination, cofactor determinants,
exhaustive minor ranks, stagewise kernel blocks) are deliberately separate
implementations from the package code paths they check.
"""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from strongnil import (
    Monomial,
    PolyMap,
    PolyMatrix,
    Polynomial,
    QMatrix,
    QQ,
    QQ_EPS,
    conjugate,
)
from strongnil.rings import DualScalar
from strongnil.variables import xvar, xvars

# -- independent rational elimination ---------------------------------------


def brute_row_reduce(rows):
    """Forward elimination only; returns (matrix, pivot columns)."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return rows, []
    cols = len(rows[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def brute_kernel(rows, cols):
    """Null-space basis by textbook back substitution (not canonicalized)."""
    reduced, pivots = brute_row_reduce(rows)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -reduced[i][f] / reduced[i][pc]
        basis.append(tuple(v))
    return basis


def rank_of_columns(columns):
    if not columns:
        return 0
    rows = [[col[i] for col in columns] for i in range(len(columns[0]))]
    _, pivots = brute_row_reduce(rows)
    return len(pivots)


# -- independent polynomial determinant and rank ------------------------------


def det_cofactor(grid):
    """Laplace expansion along the first row (exact, exponential, tiny inputs)."""
    n = len(grid)
    if n == 1:
        return grid[0][0]
    ring = grid[0][0].ring
    total = Polynomial.zero(ring)
    for j in range(n):
        entry = grid[0][j]
        if not entry:
            continue
        minor = [row[:j] + row[j + 1 :] for row in grid[1:]]
        term = entry * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def minor_rank(matrix):
    """Largest k with a nonvanishing k x k minor, by exhaustive enumeration."""
    from itertools import combinations

    grid = [list(row) for row in matrix.rows]
    n = len(grid)
    for k in range(n, 0, -1):
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                sub = [[grid[i][j] for j in cols] for i in rows]
                if det_cofactor(sub):
                    return k
    return 0


# -- independent stagewise block oracle ---------------------------------------


def stacked_coefficient_rows(matrix):
    monomials = sorted({mono for row in matrix.rows for e in row for mono in e.terms})
    rows = []
    for mono in monomials:
        for r in matrix.rows:
            rows.append([e.coefficient(mono) for e in r])
    return rows


def oracle_blocks(matrix):
    """Stagewise constant-kernel block sizes, or None when a stage gets stuck.

    Recomputes what a triangularization must find, using the brute
    elimination above for every kernel and completion decision.
    """
    blocks_bottom_up = []
    current = matrix
    while True:
        k = current.size
        kern = brute_kernel(stacked_coefficient_rows(current), k)
        if not kern:
            return None
        s = len(kern)
        blocks_bottom_up.append(s)
        if s == k:
            break
        chosen = []
        for i in range(k):
            candidate = tuple(Fraction(1 if j == i else 0) for j in range(k))
            if rank_of_columns(chosen + [candidate] + kern) > len(chosen) + s:
                chosen.append(candidate)
            if len(chosen) == k - s:
                break
        t = QMatrix.from_columns(chosen + kern)
        current = conjugate(current, t).leading_submatrix(k - s)
    return tuple(reversed(blocks_bottom_up))


# -- random builders -----------------------------------------------------------


def random_poly(rng: random.Random, nvars=3, max_terms=3, max_deg=2, ring=QQ):
    p = Polynomial.zero(ring)
    for _ in range(rng.randint(0, max_terms)):
        coeff = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
        deg = rng.randint(0, max_deg)
        mono = Monomial((xvar(rng.randint(1, nvars)), 1) for _ in range(deg))
        p = p + Polynomial.term(ring, coeff, mono)
    return p


def random_unimodular(rng: random.Random, m: int, steps: int = 4) -> QMatrix:
    grid = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
    for _ in range(steps):
        i, j = rng.randrange(m), rng.randrange(m)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for col in range(m):
            grid[i][col] += c * grid[j][col]
    if rng.random() < 0.5 and m >= 2:
        i, j = rng.sample(range(m), 2)
        grid[i], grid[j] = grid[j], grid[i]
    return QMatrix(grid)


def random_strict_block_matrix(rng: random.Random, max_size=5, nvars=3, max_deg=2):
    """A random strictly block-lower-triangular polynomial matrix and its
    unimodular conjugate (strongly nilpotent by construction)."""
    m = rng.randint(2, max_size)
    blocks = []
    remaining = m
    while remaining:
        b = rng.randint(1, remaining)
        blocks.append(b)
        remaining -= b
    zero = Polynomial.zero(QQ)
    rows = [[zero] * m for _ in range(m)]
    offsets = [0]
    for b in blocks:
        offsets.append(offsets[-1] + b)
    for bi in range(1, len(blocks)):
        for i in range(offsets[bi], offsets[bi + 1]):
            for j in range(0, offsets[bi]):
                if rng.random() < 0.6:
                    coeff = Fraction(rng.choice([-2, -1, 1, 2, 3]))
                    deg = rng.randint(1, max_deg)
                    mono = Monomial((xvar(rng.randint(1, nvars)), 1) for _ in range(deg))
                    rows[i][j] = rows[i][j] + Polynomial.term(QQ, coeff, mono)
    strict = PolyMatrix(rows, QQ)
    r_mat = random_unimodular(rng, m)
    return conjugate(strict, r_mat), strict, blocks


def random_shape2_map(rng: random.Random, max_n=5):
    """First s components zero, the rest polynomials in x1..xs only."""
    n = rng.randint(2, max_n)
    s = rng.randint(1, n - 1)
    comps = [Polynomial.zero(QQ) for _ in range(s)]
    for _ in range(s, n):
        comps.append(random_poly(rng, nvars=s, max_terms=3, max_deg=3))
    return PolyMap(n, comps), s


def qt5_index3() -> PolyMap:
    """A dimension-5 quasi-translation whose Jacobian has strong index 3."""
    return PolyMap.from_strings(
        5, ["0", "x1^2", "x1^3", "x1^2*x2 - x1*x3", "(x1*x2 - x3)^2"]
    )


def transvection(m: int, i: int, j: int, c) -> QMatrix:
    """Identity plus c at entry (i, j); a sparse invertible conjugator."""
    grid = [[Fraction(1 if a == b else 0) for b in range(m)] for a in range(m)]
    grid[i][j] = Fraction(c)
    return QMatrix(grid)


def permutation_matrix(order) -> QMatrix:
    m = len(order)
    return QMatrix(
        [[Fraction(1 if order[i] == j else 0) for j in range(m)] for i in range(m)]
    )


# -- hypothesis strategies -------------------------------------------------------


small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def monomials(draw, nvars=3, max_exp=3, max_vars=2):
    variables = draw(
        st.lists(st.sampled_from(xvars(nvars)), max_size=max_vars, unique=True)
    )
    return Monomial((v, draw(st.integers(1, max_exp))) for v in variables)


@st.composite
def rational_polys(draw, nvars=3, max_terms=4):
    p = Polynomial.zero(QQ)
    for _ in range(draw(st.integers(0, max_terms))):
        p = p + Polynomial.term(QQ, draw(small_fractions), draw(monomials(nvars)))
    return p


@st.composite
def dual_polys(draw, nvars=2, max_terms=3):
    p = Polynomial.zero(QQ_EPS)
    for _ in range(draw(st.integers(0, max_terms))):
        coeff = DualScalar(draw(small_fractions), draw(small_fractions))
        p = p + Polynomial.term(QQ_EPS, coeff, draw(monomials(nvars)))
    return p
