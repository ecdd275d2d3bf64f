"""Square matrices of commutative polynomials.

Provides products, powers, fresh-tuple products (each factor gets its own
disjoint tuple of variables), coefficient-matrix extraction, constant column
kernels, traces, conjugation by constant matrices, and the regular
nilpotency index.  Everything is exact and immutable.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .linalg import QMatrix, invert, kernel_basis
from .poly import Monomial, Polynomial
from .rings import QQ, Ring
from .variables import KIND_X


class PolyMatrix:
    """An immutable m x m matrix of polynomials over one coefficient ring."""

    __slots__ = ("size", "ring", "rows")

    def __init__(self, rows: Sequence[Sequence[Polynomial]], ring: Ring | None = None):
        grid = tuple(tuple(row) for row in rows)
        m = len(grid)
        if m == 0 or any(len(row) != m for row in grid):
            raise ValueError("a polynomial matrix must be square and nonempty")
        for row in grid:
            for entry in row:
                if not isinstance(entry, Polynomial):
                    raise TypeError("entries must be Polynomial values")
        if ring is None:
            ring = grid[0][0].ring
        if any(entry.ring is not ring for row in grid for entry in row):
            raise ValueError("all entries must share one coefficient ring")
        self.size = m
        self.ring = ring
        self.rows = grid

    @classmethod
    def zeros(cls, m: int, ring: Ring = QQ) -> "PolyMatrix":
        z = Polynomial.zero(ring)
        return cls([[z] * m for _ in range(m)], ring)

    @classmethod
    def identity(cls, m: int, ring: Ring = QQ) -> "PolyMatrix":
        z = Polynomial.zero(ring)
        one = Polynomial.constant(ring, 1)
        return cls([[one if i == j else z for j in range(m)] for i in range(m)], ring)

    @classmethod
    def from_qmatrix(cls, q: QMatrix, ring: Ring = QQ) -> "PolyMatrix":
        return cls(
            [[Polynomial.constant(ring, v) for v in row] for row in q.entries], ring
        )

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], ring: Ring = QQ, allowed_vars=None) -> "PolyMatrix":
        from .parser import parse_poly

        return cls([[parse_poly(s, ring, allowed_vars) for s in row] for row in rows], ring)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.rows[i][j]

    def is_zero(self) -> bool:
        return all(not entry for row in self.rows for entry in row)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring is other.ring
            and self.rows == other.rows
        )

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_compatible(other)
        return PolyMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.ring,
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_compatible(other)
        return PolyMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.ring,
        )

    def __neg__(self):
        return PolyMatrix([[-e for e in row] for row in self.rows], self.ring)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_compatible(other)
        m = self.size
        zero = Polynomial.zero(self.ring)
        out = []
        for i in range(m):
            row_i = self.rows[i]
            out_row = []
            for j in range(m):
                acc = zero
                for k in range(m):
                    left = row_i[k]
                    if not left:
                        continue
                    right = other.rows[k][j]
                    if not right:
                        continue
                    acc = acc + left * right
                out_row.append(acc)
            out.append(out_row)
        return PolyMatrix(out, self.ring)

    def _check_compatible(self, other: "PolyMatrix"):
        if not isinstance(other, PolyMatrix):
            raise TypeError("expected a PolyMatrix")
        if self.size != other.size:
            raise ValueError("size mismatch")
        if self.ring is not other.ring:
            raise ValueError("coefficient ring mismatch")

    def power(self, k: int) -> "PolyMatrix":
        if k < 1:
            raise ValueError("power must be >= 1")
        result = self
        for _ in range(k - 1):
            result = result @ self
        return result

    def apply(self, vec: Sequence[object]) -> list[Polynomial]:
        """Matrix times column vector; scalar entries are coerced to constants."""
        if len(vec) != self.size:
            raise ValueError("vector length mismatch")
        column = [
            v if isinstance(v, Polynomial) else Polynomial.constant(self.ring, v)
            for v in vec
        ]
        out = []
        for row in self.rows:
            acc = Polynomial.zero(self.ring)
            for entry, v in zip(row, column):
                if entry and v:
                    acc = acc + entry * v
            out.append(acc)
        return out

    def substitute(self, assignment: Mapping) -> "PolyMatrix":
        return PolyMatrix(
            [[e.substitute(assignment) for e in row] for row in self.rows], self.ring
        )

    def leading_submatrix(self, k: int) -> "PolyMatrix":
        return PolyMatrix([row[:k] for row in self.rows[:k]], self.ring)

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.rows]

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"PolyMatrix[{body}]"


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return a @ b


def trace(m: PolyMatrix) -> Polynomial:
    acc = Polynomial.zero(m.ring)
    for i in range(m.size):
        acc = acc + m.rows[i][i]
    return acc


def rename_to_tuple(m: PolyMatrix, j: int) -> PolyMatrix:
    """Rename every x_i in every entry to y<j>_i."""
    return PolyMatrix([[e.rename_to_tuple(j) for e in row] for row in m.rows], m.ring)


def nilpotency_index(m: PolyMatrix, max_r: int | None = None) -> int | None:
    """Least r with M^r = 0, or None when the search bound is passed.

    Over the rationals the bound is the matrix size (a nilpotent matrix over
    a field of fractions cannot need more); over the dual numbers the bound
    doubles, because a nonreduced coefficient ring can push the index to
    m + 1.
    """
    if max_r is None:
        max_r = m.size if m.ring is QQ else 2 * m.size
    power = m
    for r in range(1, max_r + 1):
        if power.is_zero():
            return r
        if r < max_r:
            power = power @ m
    return None


def _require_x_only(m: PolyMatrix) -> None:
    for row in m.rows:
        for entry in row:
            for var in entry.variables():
                if var.kind != KIND_X:
                    raise ValueError("matrix must be over x-variables only")


def fresh_tuple_product(m: PolyMatrix, r: int) -> PolyMatrix:
    """The product M|_{x=y^(r)} * ... * M|_{x=y^(1)} in r*n fresh variables.

    Factor j gets its own tuple of variables, so the product vanishes exactly
    when every substitution instance of the r-fold product vanishes.  The
    highest tuple label sits leftmost; relabeling tuples is a ring
    automorphism, so the vanishing of the product does not depend on that
    convention.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    _require_x_only(m)
    product = rename_to_tuple(m, r)
    for j in range(r - 1, 0, -1):
        product = product @ rename_to_tuple(m, j)
    return product


def coefficient_matrices(m: PolyMatrix) -> dict[Monomial, QMatrix]:
    """Decompose M as a sum of constant matrices times monomials.

    The result maps each monomial occurring anywhere in M to the rational
    matrix of its coefficients; reconstruction Sum_mu C_mu * mu gives back M
    exactly.  Zero coefficient matrices are never stored.
    """
    if m.ring is not QQ:
        raise ValueError("coefficient matrices require the rational ring")
    monomials = sorted({mono for row in m.rows for e in row for mono in e.terms})
    out: dict[Monomial, QMatrix] = {}
    for mono in monomials:
        grid = [[e.coefficient(mono) for e in row] for row in m.rows]
        out[mono] = QMatrix(grid)
    return out


def grid_constant_kernel(rows: Sequence[Sequence[Polynomial]], cols: int) -> list:
    """Constant vectors v with G v = 0 for a rectangular polynomial grid.

    Stacks the coefficient matrix of every monomial and takes the rational
    kernel; a constant vector kills the grid exactly when it kills every
    coefficient matrix.
    """
    monomials = sorted({mono for row in rows for e in row for mono in e.terms})
    stacked: list[list] = []
    for mono in monomials:
        for row in rows:
            stacked.append([e.coefficient(mono) for e in row])
    return kernel_basis(stacked, cols=cols)


def constant_column_kernel(m: PolyMatrix) -> list:
    """Basis of {v constant : M v = 0}, canonical and maximal."""
    if m.ring is not QQ:
        raise ValueError("constant column kernels require the rational ring")
    return grid_constant_kernel(m.rows, m.size)


def conjugate(m: PolyMatrix, t: QMatrix) -> PolyMatrix:
    """Exact T^{-1} M T for an invertible constant matrix T."""
    if t.rows != t.cols or t.rows != m.size:
        raise ValueError("conjugating matrix must be square of the same size")
    t_inv = invert(t)
    left = PolyMatrix.from_qmatrix(t_inv, m.ring)
    right = PolyMatrix.from_qmatrix(t, m.ring)
    return left @ m @ right


def has_strict_block_lower_shape(m: PolyMatrix, blocks: Sequence[int]) -> bool:
    """True when every entry on or above the block diagonal vanishes.

    ``blocks`` lists the diagonal zero-block sizes from top-left to
    bottom-right; entries strictly below the block diagonal are
    unconstrained.
    """
    if any(b < 1 for b in blocks) or sum(blocks) != m.size:
        raise ValueError("block sizes must be positive and sum to the matrix size")
    offsets = [0]
    for b in blocks:
        offsets.append(offsets[-1] + b)
    k = len(blocks)
    for bi in range(k):
        for bj in range(bi, k):
            for i in range(offsets[bi], offsets[bi + 1]):
                for j in range(offsets[bj], offsets[bj + 1]):
                    if m.rows[i][j]:
                        return False
    return True
