"""Strong nilpotency: indices, triangularization certificates, verification.

A matrix of polynomials is strongly nilpotent when the product of r copies,
each with its variables renamed to a fresh tuple, vanishes for some r; the
least such r is the strong nilpotency index.  Strongly nilpotent matrices
are exactly the ones a constant change of basis brings to a strictly
block-lower-triangular form whose first-subdiagonal blocks have linearly
independent columns over the rationals, and the number of diagonal zero
blocks of that form equals the index.

``strong_index_direct`` decides the index by expanding the fresh-tuple
products.  ``triangularize`` constructs the block form instead: at each
stage it takes the full constant column kernel (maximality of the trailing
block size comes from taking all of it), completes it to a basis, conjugates
and recurses on the leading principal submatrix.  The two routes must agree;
tests treat them as oracles for each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import QMatrix, SingularMatrixError, block_diagonal, complete_basis, invert
from .poly import Monomial, Polynomial
from .polymat import (
    PolyMatrix,
    conjugate,
    constant_column_kernel,
    fresh_tuple_product,
    grid_constant_kernel,
    has_strict_block_lower_shape,
    nilpotency_index,
    rename_to_tuple,
    trace,
)
from .rings import QQ

PolyGrid = tuple[tuple[Polynomial, ...], ...]


@dataclass(frozen=True)
class ProductWitness:
    """A nonzero entry of the m-fold fresh-tuple product."""

    row: int
    col: int
    monomial: Monomial
    coefficient: object
    entry: Polynomial


@dataclass(frozen=True)
class StageWitness:
    """Stage at which a nonzero submatrix had a trivial constant column kernel."""

    stage: int
    submatrix_size: int


@dataclass(frozen=True)
class StrongNilpotencyVerdict:
    strongly_nilpotent: bool
    index: int | None = None
    witness: ProductWitness | StageWitness | None = None


@dataclass(frozen=True)
class TriangularizationCertificate:
    """(T, block sizes, subdiagonal blocks) witnessing the strict block form.

    In T^{-1} M T every entry on or above the block diagonal is zero and the
    i-th subdiagonal block A_i (with blocks[i] columns and blocks[i+1] rows)
    has only the trivial constant vector in its column kernel.
    """

    T: QMatrix
    blocks: tuple[int, ...]
    subdiag: tuple[PolyGrid, ...]

    @property
    def index(self) -> int:
        return len(self.blocks)


class NotStronglyNilpotentError(ValueError):
    """A strongly nilpotent matrix was required."""

    def __init__(self, verdict: StrongNilpotencyVerdict):
        super().__init__("matrix is not strongly nilpotent")
        self.verdict = verdict


@dataclass(frozen=True)
class IndexBoundsReport:
    matrix_size: int
    regular_index: int
    strong_index: int
    bounds_ok: bool


def _first_nonzero_witness(product: PolyMatrix) -> ProductWitness:
    for i, row in enumerate(product.rows):
        for j, entry in enumerate(row):
            if entry:
                mono, coeff = entry.leading()
                return ProductWitness(i, j, mono, coeff, entry)
    raise ValueError("no nonzero entry")  # caller guarantees one exists


def strong_index_direct(m: PolyMatrix) -> StrongNilpotencyVerdict:
    """Decide strong nilpotency by expanding fresh-tuple products.

    Searches r = 1..m with early exit (the index of a strongly nilpotent
    matrix never exceeds its size); on failure the verdict carries a nonzero
    entry of the m-fold product as a witness.
    """
    if m.ring is not QQ:
        raise ValueError("strong nilpotency analysis requires the rational ring")
    product: PolyMatrix | None = None
    for r in range(1, m.size + 1):
        factor = rename_to_tuple(m, r)
        product = factor if product is None else factor @ product
        if product.is_zero():
            return StrongNilpotencyVerdict(True, r, None)
    assert product is not None
    return StrongNilpotencyVerdict(False, None, _first_nonzero_witness(product))


def triangularize(m: PolyMatrix):
    """Construct a TriangularizationCertificate, or a negative verdict.

    Stage by stage: compute the constant column kernel; a trivial kernel on a
    nonzero submatrix proves the matrix is not strongly nilpotent (returned
    as a StrongNilpotencyVerdict value, not an exception).  Otherwise the
    kernel becomes the trailing columns of the stage basis and the leading
    principal submatrix is processed recursively.  Blocks accumulate from the
    bottom-right, so the first stage contributes the last block.
    """
    if m.ring is not QQ:
        raise ValueError("triangularization requires the rational ring")

    def recurse(a: PolyMatrix, stage: int):
        k = a.size
        kern = constant_column_kernel(a)
        if not kern:
            # a == 0 would have a full kernel, so a is nonzero here
            return StageWitness(stage, k)
        s = len(kern)
        if s == k:
            return QMatrix.identity(k), [k]
        t_stage = complete_basis(kern, k)
        conjugated = conjugate(a, t_stage)
        leading = conjugated.leading_submatrix(k - s)
        inner = recurse(leading, stage + 1)
        if isinstance(inner, StageWitness):
            return inner
        t_inner, blocks = inner
        t_total = t_stage @ block_diagonal(t_inner, QMatrix.identity(s))
        return t_total, blocks + [s]

    result = recurse(m, 1)
    if isinstance(result, StageWitness):
        return StrongNilpotencyVerdict(False, None, result)
    t, blocks = result
    conjugated = conjugate(m, t)
    offsets = [0]
    for b in blocks:
        offsets.append(offsets[-1] + b)
    subdiag = tuple(
        tuple(
            tuple(conjugated.rows[i][offsets[bi - 1] : offsets[bi]])
            for i in range(offsets[bi], offsets[bi + 1])
        )
        for bi in range(1, len(blocks))
    )
    return TriangularizationCertificate(t, tuple(blocks), subdiag)


def verify_certificate(m: PolyMatrix, cert: TriangularizationCertificate) -> bool:
    """Check a certificate against the matrix it claims to describe.

    Verifies invertibility of T, the strict block shape of the conjugate,
    that the declared subdiagonal blocks match it and have trivial constant
    column kernels, and that the fresh-tuple products pin the index exactly.
    Size inconsistencies raise; a wrong-but-well-formed certificate returns
    False.
    """
    blocks = cert.blocks
    r = len(blocks)
    if any(b < 1 for b in blocks) or sum(blocks) != m.size:
        raise ValueError("block sizes must be positive and sum to the matrix size")
    if cert.T.rows != m.size or cert.T.cols != m.size:
        raise ValueError("T has the wrong size")
    if len(cert.subdiag) != r - 1:
        raise ValueError("expected one subdiagonal block per adjacent block pair")
    for i, block in enumerate(cert.subdiag):
        if len(block) != blocks[i + 1] or any(len(row) != blocks[i] for row in block):
            raise ValueError("subdiagonal block shape mismatch")
    try:
        invert(cert.T)
    except SingularMatrixError:
        return False
    conjugated = conjugate(m, cert.T)
    if not has_strict_block_lower_shape(conjugated, blocks):
        return False
    offsets = [0]
    for b in blocks:
        offsets.append(offsets[-1] + b)
    for bi in range(1, r):
        declared = cert.subdiag[bi - 1]
        actual = tuple(
            tuple(conjugated.rows[i][offsets[bi - 1] : offsets[bi]])
            for i in range(offsets[bi], offsets[bi + 1])
        )
        if declared != actual:
            return False
        if grid_constant_kernel(declared, blocks[bi - 1]):
            return False  # columns of A_i must be independent over the rationals
    if not fresh_tuple_product(m, r).is_zero():
        return False
    if r >= 2 and fresh_tuple_product(m, r - 1).is_zero():
        return False
    return True


def index_bounds_report(m: PolyMatrix) -> IndexBoundsReport:
    """Regular and strong indices plus the gap bound check.

    When the two indices differ, the strong index must lie in [3, m-1];
    otherwise they are equal.  Raises NotStronglyNilpotentError when the
    matrix is not strongly nilpotent.
    """
    verdict = strong_index_direct(m)
    if not verdict.strongly_nilpotent:
        raise NotStronglyNilpotentError(verdict)
    strong = verdict.index
    regular = nilpotency_index(m)
    assert regular is not None  # strongly nilpotent implies nilpotent
    ok = (strong == regular) or (3 <= strong <= m.size - 1)
    return IndexBoundsReport(m.size, regular, strong, ok)


def pair_trace_obstruction(m: PolyMatrix) -> Polynomial | None:
    """trace(M|_{x=y^(2)} * M|_{x=y^(1)}) when nonzero, else None.

    Any matrix conjugate to a strictly block-lower-triangular form makes this
    trace vanish (the product of two strictly block-triangular matrices has
    zero diagonal blocks), so a nonzero value certifies that the matrix is
    not strongly nilpotent.  A zero value is inconclusive.
    """
    t = trace(fresh_tuple_product(m, 2))
    return t if t else None
