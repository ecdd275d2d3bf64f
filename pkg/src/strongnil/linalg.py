"""Exact dense linear algebra over the rationals, plus fraction-free
elimination for matrices of polynomials.

QMatrix holds exact Fraction entries; all results are exact, there is no
floating point anywhere.  Kernel bases are normalized to the reduced echelon
form of the null space so certificates are reproducible.  Ranks and
determinants of polynomial matrices use fraction-free (Bareiss) elimination
with exact polynomial division, never numeric evaluation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .poly import Polynomial, exact_div
from .rings import QQ, as_fraction

Vector = tuple[Fraction, ...]


class SingularMatrixError(ValueError):
    """Attempted to invert a singular matrix."""


class QMatrix:
    """An immutable rectangular matrix of exact rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[object]]):
        grid = tuple(tuple(as_fraction(v) for v in row) for row in entries)
        if not grid:
            raise ValueError("a matrix needs at least one row")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise ValueError("ragged rows")
        self.entries = grid
        self.rows = len(grid)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]]) -> "QMatrix":
        m = len(columns[0])
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(m)])

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("size mismatch in matrix product")
        return QMatrix(
            [
                [
                    sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)), Fraction(0))
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ]
        )

    def apply(self, vec: Sequence[object]) -> Vector:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [as_fraction(x) for x in vec]
        return tuple(
            sum((row[k] * v[k] for k in range(self.cols)), Fraction(0)) for row in self.entries
        )

    def transpose(self) -> "QMatrix":
        return QMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def rref(self) -> tuple["QMatrix", tuple[int, ...]]:
        rows, pivots = _rref(list(map(list, self.entries)), self.cols)
        return QMatrix(rows) if rows else self, tuple(pivots)

    def rank(self) -> int:
        _, pivots = _rref(list(map(list, self.entries)), self.cols)
        return len(pivots)

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.entries]

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in row) for row in self.entries)
        return f"QMatrix[{body}]"


def _rref(rows: list[list[Fraction]], cols: int) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        factor = rows[r][c]
        rows[r] = [v / factor for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def kernel_basis(matrix: QMatrix | Sequence[Sequence[object]], cols: int | None = None) -> list[Vector]:
    """Basis of the right null space {v : A v = 0}.

    The basis is canonical: it is the reduced echelon form of the null space,
    so each vector's leading entry is 1 and the result is deterministic.  An
    empty list of rows (with ``cols`` given) is the zero map, whose kernel is
    the full space.
    """
    if isinstance(matrix, QMatrix):
        rows = list(map(list, matrix.entries))
        cols = matrix.cols
    else:
        rows = [list(map(as_fraction, row)) for row in matrix]
        if cols is None:
            if not rows:
                raise ValueError("cols is required for an empty row list")
            cols = len(rows[0])
    reduced, pivots = _rref(rows, cols)
    free = [c for c in range(cols) if c not in pivots]
    vectors: list[list[Fraction]] = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -reduced[i][f]
        vectors.append(v)
    if not vectors:
        return []
    canonical, _ = _rref(vectors, cols)
    return [tuple(row) for row in canonical]


def complete_basis(kernel_vecs: Sequence[Sequence[object]], m: int) -> QMatrix:
    """An invertible m x m matrix whose last columns are the given vectors.

    The leading columns are chosen greedily from the standard basis (lowest
    index first), so on simple inputs the result is the identity.  Raises
    ValueError when the input vectors are dependent.
    """
    vecs = [tuple(as_fraction(x) for x in v) for v in kernel_vecs]
    k = len(vecs)
    if any(len(v) != m for v in vecs):
        raise ValueError("kernel vectors must have length m")
    if k > m:
        raise ValueError("more vectors than the dimension")
    if k and QMatrix.from_columns(vecs).rank() != k:
        raise ValueError("dependent input vectors")
    chosen: list[Vector] = []
    rank_now = k
    for i in range(m):
        if len(chosen) == m - k:
            break
        candidate = tuple(Fraction(1 if j == i else 0) for j in range(m))
        trial = chosen + [candidate] + vecs
        r = QMatrix.from_columns(trial).rank()
        if r > rank_now:
            chosen.append(candidate)
            rank_now = r
    t = QMatrix.from_columns(chosen + vecs) if (chosen or vecs) else QMatrix.identity(m)
    if t.rank() != m:
        raise ValueError("failed to complete to a basis")  # unreachable
    return t


def invert(matrix: QMatrix) -> QMatrix:
    """Exact inverse; raises SingularMatrixError when none exists."""
    if matrix.rows != matrix.cols:
        raise ValueError("only square matrices can be inverted")
    n = matrix.rows
    augmented = [
        list(matrix.entries[i]) + [Fraction(1 if j == i else 0) for j in range(n)]
        for i in range(n)
    ]
    reduced, pivots = _rref(augmented, 2 * n)
    if list(pivots) != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return QMatrix([row[n:] for row in reduced])


def block_diagonal(a: QMatrix, b: QMatrix) -> QMatrix:
    out = [
        list(row) + [Fraction(0)] * b.cols for row in a.entries
    ] + [
        [Fraction(0)] * a.cols + list(row) for row in b.entries
    ]
    return QMatrix(out)


def stack_rows(blocks: Iterable[Sequence[Sequence[object]]]) -> list[list[Fraction]]:
    out: list[list[Fraction]] = []
    for block in blocks:
        for row in block:
            out.append([as_fraction(v) for v in row])
    return out


# -- fraction-free elimination over the polynomial ring ----------------------


def _poly_grid(matrix) -> list[list[Polynomial]]:
    rows = getattr(matrix, "rows", matrix)
    grid = [list(row) for row in rows]
    for row in grid:
        for entry in row:
            if not isinstance(entry, Polynomial):
                raise TypeError("expected a grid of Polynomial entries")
            if entry.ring is not QQ:
                raise ValueError("fraction-free elimination requires the rational ring")
    return grid


def poly_rank(matrix) -> int:
    """Rank over the fraction field of the polynomial ring.

    Fraction-free elimination with symbolic pivots: the update
    ``a[i][j] := (pivot * a[i][j] - a[i][col] * a[row][j]) / previous_pivot``
    keeps every intermediate entry a genuine minor of the input, so the
    division is exact and no probabilistic evaluation is involved.  The rank
    equals the size of the largest nonvanishing minor.
    """
    grid = _poly_grid(matrix)
    if not grid:
        return 0
    nrows, ncols = len(grid), len(grid[0])
    previous: Polynomial | None = None
    row = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(row, nrows):
            if grid[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        grid[row], grid[pivot_row] = grid[pivot_row], grid[row]
        pivot = grid[row][col]
        for i in range(row + 1, nrows):
            lead = grid[i][col]
            for c in range(col + 1, ncols):
                numerator = pivot * grid[i][c] - lead * grid[row][c]
                grid[i][c] = exact_div(numerator, previous) if previous is not None else numerator
            grid[i][col] = Polynomial.zero(pivot.ring)
        previous = pivot
        row += 1
        if row == nrows:
            break
    return row


def poly_det(matrix) -> Polynomial:
    """Exact determinant of a square polynomial matrix (fraction-free)."""
    grid = _poly_grid(matrix)
    n = len(grid)
    if any(len(row) != n for row in grid):
        raise ValueError("determinant needs a square matrix")
    ring = grid[0][0].ring
    sign = 1
    previous: Polynomial | None = None
    for col in range(n):
        pivot_row = None
        for i in range(col, n):
            if grid[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            return Polynomial.zero(ring)
        if pivot_row != col:
            grid[col], grid[pivot_row] = grid[pivot_row], grid[col]
            sign = -sign
        pivot = grid[col][col]
        for i in range(col + 1, n):
            lead = grid[i][col]
            for c in range(col + 1, n):
                numerator = pivot * grid[i][c] - lead * grid[col][c]
                grid[i][c] = exact_div(numerator, previous) if previous is not None else numerator
            grid[i][col] = Polynomial.zero(ring)
        previous = pivot
    result = grid[n - 1][n - 1]
    return result if sign > 0 else -result
