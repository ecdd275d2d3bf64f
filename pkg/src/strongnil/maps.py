"""Polynomial maps: Jacobians, composition, and the structural analyses.

A PolyMap is an n-tuple of polynomials in x1..xn over the rationals.  The
analyses here cover:

* the four equivalent characterizations of "the strong nilpotency index of
  the Jacobian is at most r" (``equivalence_suite``),
* quasi-translations (x + H invertible with inverse x - H, equivalently
  J(H) * H = 0) and the five equivalent conditions for their Jacobians to
  have strong nilpotency index at most two (``qt_index2_suite``),
* rank-one Keller maps x + H with det J(x+H) a nonzero constant
  (``rank1_analysis``), and the index-two consequence for quasi-translations
  of degree or rank one (``rank_or_degree_one_check``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import QMatrix, invert, poly_det, poly_rank
from .poly import NEG_INFINITY, Polynomial
from .polymat import PolyMatrix, has_strict_block_lower_shape, nilpotency_index, rename_to_tuple
from .rings import QQ
from .strong import (
    StrongNilpotencyVerdict,
    TriangularizationCertificate,
    strong_index_direct,
    triangularize,
)
from .variables import VarId, tvar, xvar, yvar


class PreconditionError(ValueError):
    """An analysis was invoked outside its stated preconditions."""


class InternalInconsistencyError(RuntimeError):
    """Two criteria that must agree disagreed; indicates a bug."""


class PolyMap:
    """An n-tuple H of polynomials in the variables x1..xn."""

    __slots__ = ("n", "components")

    def __init__(self, n: int, components: Sequence[Polynomial]):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        comps = tuple(components)
        if len(comps) != n:
            raise ValueError("component count must equal the dimension")
        universe = {xvar(i) for i in range(1, n + 1)}
        for c in comps:
            if not isinstance(c, Polynomial) or c.ring is not QQ:
                raise TypeError("components must be rational polynomials")
            if not c.variables() <= universe:
                raise ValueError("components may only use x1..xn")
        self.n = n
        self.components = comps

    @classmethod
    def from_strings(cls, n: int, texts: Sequence[str]) -> "PolyMap":
        from .parser import parse_poly
        from .variables import xvars

        allowed = xvars(n)
        return cls(n, [parse_poly(t, QQ, allowed) for t in texts])

    def __eq__(self, other):
        return (
            isinstance(other, PolyMap)
            and self.n == other.n
            and self.components == other.components
        )

    def is_zero(self) -> bool:
        return all(not c for c in self.components)

    def degree(self):
        """Largest component degree; NEG_INFINITY for the zero map."""
        return max(c.total_degree() for c in self.components)

    def degree_info(self):
        """(degree, homogeneous): homogeneous means every nonzero component is,
        all with one common total degree."""
        degrees = set()
        homogeneous = True
        for c in self.components:
            d, h = c.degree_info()
            if d == NEG_INFINITY:
                continue
            homogeneous = homogeneous and h
            degrees.add(d)
        if not degrees:
            return (NEG_INFINITY, True)
        return (max(degrees), homogeneous and len(degrees) == 1)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.components]

    def __repr__(self):
        return f"PolyMap({', '.join(self.to_strings())})"


def identity_map(n: int) -> PolyMap:
    return PolyMap(n, [Polynomial.variable(QQ, xvar(i)) for i in range(1, n + 1)])


def map_add(f: PolyMap, g: PolyMap) -> PolyMap:
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    return PolyMap(f.n, [a + b for a, b in zip(f.components, g.components)])


def map_sub(f: PolyMap, g: PolyMap) -> PolyMap:
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    return PolyMap(f.n, [a - b for a, b in zip(f.components, g.components)])


def jacobian(h: PolyMap) -> PolyMatrix:
    """The matrix of formal partials (d H_i / d x_j)."""
    rows = [
        [c.derivative(xvar(j)) for j in range(1, h.n + 1)]
        for c in h.components
    ]
    return PolyMatrix(rows, QQ)


def _apply_components(components: Sequence[Polynomial], vec: Sequence[Polynomial]):
    assignment = {xvar(i + 1): vec[i] for i in range(len(vec))}
    return [c.substitute(assignment) for c in components]


def compose(f: PolyMap, g: PolyMap) -> PolyMap:
    """Componentwise substitution (f o g)(x) = f(g(x))."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    return PolyMap(f.n, _apply_components(f.components, g.components))


def conjugate_map(h: PolyMap, t: QMatrix) -> PolyMap:
    """T^{-1} H(T x); its Jacobian is (T^{-1} J(H) T) with x replaced by T x."""
    n = h.n
    if t.rows != n or t.cols != n:
        raise ValueError("conjugating matrix must be n x n")
    t_inv = invert(t)
    tx = [
        sum(
            (Polynomial.variable(QQ, xvar(j + 1)).scale(t.entries[i][j]) for j in range(n)),
            Polynomial.zero(QQ),
        )
        for i in range(n)
    ]
    h_of_tx = _apply_components(h.components, tx)
    out = []
    for i in range(n):
        acc = Polynomial.zero(QQ)
        for j in range(n):
            coeff = t_inv.entries[i][j]
            if coeff:
                acc = acc + h_of_tx[j].scale(coeff)
        out.append(acc)
    return PolyMap(n, out)


# -- the four equivalent characterizations of strong index <= r --------------


@dataclass(frozen=True)
class StatementResult:
    statement: int
    r: int
    holds: bool
    info: dict


@dataclass(frozen=True)
class EquivalenceSuiteReport:
    r: int
    statements: dict
    agree: bool

    @property
    def all_true(self) -> bool:
        return all(self.statements.values())


def _tuple_vars(j: int, n: int) -> list[VarId]:
    return [yvar(j, i) for i in range(1, n + 1)]


def _nested_argument(h: PolyMap, j: int, with_t: bool) -> list[Polynomial]:
    """t^(j) H(y^(j) + t^(j-1) H( ... (y^(2) + t^(1) H(y^(1))) ... )).

    Without t, every parameter is 1.  The t^(i) are extra commuting scalar
    indeterminates, so "constant in y^(1)" is decidable as a zero Jacobian.
    """
    n = h.n
    vec = [Polynomial.variable(QQ, v) for v in _tuple_vars(1, n)]
    for level in range(2, j + 1):
        image = _apply_components(h.components, vec)
        if with_t:
            t_poly = Polynomial.variable(QQ, tvar(level - 1))
            image = [t_poly * c for c in image]
        vec = [
            Polynomial.variable(QQ, v) + c
            for v, c in zip(_tuple_vars(level, n), image)
        ]
    image = _apply_components(h.components, vec)
    if with_t:
        t_poly = Polynomial.variable(QQ, tvar(j))
        image = [t_poly * c for c in image]
    return image


def _jacobian_wrt(vec: Sequence[Polynomial], variables: Sequence[VarId]):
    return [[c.derivative(v) for v in variables] for c in vec]


def _chain_statement_vanishes(h: PolyMap, r: int, j: int, with_t: bool) -> bool:
    """Does the Jacobian w.r.t. y^(1) of the chain expression vanish?

    The expression is the product of the Jacobian factors in tuples r..j+1
    applied to the nested argument for level j.
    """
    vec = _nested_argument(h, j, with_t)
    jh = jacobian(h)
    for level in range(j + 1, r + 1):
        factor = rename_to_tuple(jh, level)
        vec = factor.apply(vec)
    grid = _jacobian_wrt(vec, _tuple_vars(1, h.n))
    return all(not entry for row in grid for entry in row)


def equivalent_statement_holds(
    h: PolyMap, r: int, statement: int, j: int | None = None
) -> StatementResult:
    """Evaluate one of the four characterizations of strong index <= r.

    1: the r-fold fresh-tuple product of J(H) vanishes.
    2: some constant conjugation brings J(T^{-1}H(Tx)) to strict block-lower
       form with exactly min(r, n) diagonal zero blocks.
    3: for all j in 1..r (or the given j), the nested t-parameterized chain
       expression is constant in y^(1).
    4: as 3 with all parameters set to 1, existential over j.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if statement not in (1, 2, 3, 4):
        raise ValueError("statement must be 1, 2, 3 or 4")
    if j is not None and not 1 <= j <= r:
        raise ValueError("j must lie in 1..r")

    if statement == 1:
        from .polymat import fresh_tuple_product

        product = fresh_tuple_product(jacobian(h), r)
        if product.is_zero():
            return StatementResult(1, r, True, {})
        for i, row in enumerate(product.rows):
            for c, entry in enumerate(row):
                if entry:
                    return StatementResult(1, r, False, {"witness_entry": (i, c, str(entry))})

    if statement == 2:
        result = triangularize(jacobian(h))
        r_prime = min(r, h.n)
        if isinstance(result, StrongNilpotencyVerdict):
            return StatementResult(2, r, False, {"reason": "not strongly nilpotent"})
        if result.index > r_prime:
            return StatementResult(
                2, r, False, {"reason": f"minimal block count {result.index} exceeds {r_prime}"}
            )
        blocks = _refine_blocks(result.blocks, r_prime)
        conjugated_jac = jacobian(conjugate_map(h, result.T))
        holds = has_strict_block_lower_shape(conjugated_jac, blocks)
        return StatementResult(2, r, holds, {"blocks": list(blocks)})

    if statement == 3:
        candidates = [j] if j is not None else list(range(1, r + 1))
        failed = [jj for jj in candidates if not _chain_statement_vanishes(h, r, jj, True)]
        return StatementResult(3, r, not failed, {"checked_j": candidates, "failed_j": failed})

    candidates = [j] if j is not None else list(range(1, r + 1))
    for jj in candidates:
        if _chain_statement_vanishes(h, r, jj, False):
            return StatementResult(4, r, True, {"witness_j": jj})
    return StatementResult(4, r, False, {"checked_j": candidates})


def _refine_blocks(blocks: Sequence[int], target: int) -> tuple[int, ...]:
    """Split zero blocks (first splittable one each step) to reach the target count."""
    out = list(blocks)
    if target < len(out) or target > sum(out):
        raise ValueError("cannot refine to the requested block count")
    while len(out) < target:
        idx = next(i for i, s in enumerate(out) if s >= 2)
        out[idx : idx + 1] = [1, out[idx] - 1]
    return tuple(out)


def equivalence_suite(h: PolyMap, r: int) -> EquivalenceSuiteReport:
    """Evaluate all four characterizations and flag any disagreement.

    A disagreement would indicate an implementation bug, never a property of
    the input (the four statements are equivalent in characteristic zero).
    """
    values = {s: equivalent_statement_holds(h, r, s).holds for s in (1, 2, 3, 4)}
    return EquivalenceSuiteReport(r, values, len(set(values.values())) == 1)


# -- quasi-translations -------------------------------------------------------


def is_quasi_translation(h: PolyMap) -> bool:
    """True when x + H has inverse x - H, decided as J(H) * H = 0.

    Both criteria (the matrix identity and the two-sided composition check)
    are evaluated; a disagreement raises InternalInconsistencyError because
    they are provably the same condition.
    """
    jh = jacobian(h)
    direct = all(not c for c in jh.apply(list(h.components)))
    x = identity_map(h.n)
    plus = map_add(x, h)
    minus = map_sub(x, h)
    inverse_pair = compose(plus, minus) == x and compose(minus, plus) == x
    if direct != inverse_pair:
        raise InternalInconsistencyError(
            "J(H)*H = 0 and the composition criterion disagree"
        )
    return direct


@dataclass(frozen=True)
class QTIndex2Report:
    """The anchor condition and the four equivalent statements for a
    quasi-translation whose Jacobian has strong nilpotency index <= 2."""

    anchor: bool  # J(H) * J(H)|_{x=y} = 0
    statement1: bool  # J(H) * H(y) = 0
    statement2: bool  # exists T, s: first s components 0, rest in x1..xs
    statement3: bool  # H(x + t H(y)) = H
    statement4: bool  # H(x + H(y)) = H
    s: int | None
    T: QMatrix | None
    all_agree: bool

    @property
    def all_true(self) -> bool:
        return self.anchor and self.statement1 and self.statement2 and self.statement3 and self.statement4


def qt_index2_suite(h: PolyMap) -> QTIndex2Report:
    """Evaluate the index-two conditions for a quasi-translation.

    Raises PreconditionError when x + H is not a quasi-translation.  The
    statement-2 witness (T, s) comes from the triangularization certificate;
    the other statements are decided by direct expansion over doubled
    variables (plus one scalar parameter for statement 3).
    """
    if not is_quasi_translation(h):
        raise PreconditionError("x + H is not a quasi-translation: J(H)*H != 0")
    n = h.n
    jh = jacobian(h)
    jh_y = rename_to_tuple(jh, 1)
    anchor = (jh @ jh_y).is_zero()

    h_y = [c.rename_to_tuple(1) for c in h.components]
    statement1 = all(not c for c in jh.apply(h_y))

    t_poly = Polynomial.variable(QQ, tvar(1))
    shifted_t = [
        Polynomial.variable(QQ, xvar(i + 1)) + t_poly * h_y[i] for i in range(n)
    ]
    statement3 = _apply_components(h.components, shifted_t) == list(h.components)

    shifted = [Polynomial.variable(QQ, xvar(i + 1)) + h_y[i] for i in range(n)]
    statement4 = _apply_components(h.components, shifted) == list(h.components)

    statement2 = False
    s_value: int | None = None
    t_value: QMatrix | None = None
    result = triangularize(jh)
    if isinstance(result, TriangularizationCertificate) and result.index <= 2:
        s = result.blocks[0] if result.index == 2 else 0
        h_hat = conjugate_map(h, result.T)
        zero_part = all(not h_hat.components[i] for i in range(s))
        allowed = {xvar(i) for i in range(1, s + 1)}
        tail_part = all(
            h_hat.components[i].variables() <= allowed for i in range(s, n)
        )
        statement2 = zero_part and tail_part
        if statement2:
            s_value = s
            t_value = result.T

    flags = {anchor, statement1, statement2, statement3, statement4}
    return QTIndex2Report(
        anchor=anchor,
        statement1=statement1,
        statement2=statement2,
        statement3=statement3,
        statement4=statement4,
        s=s_value,
        T=t_value,
        all_agree=len(flags) == 1,
    )


# -- rank-one Keller maps -----------------------------------------------------


@dataclass(frozen=True)
class Rank1Report:
    """Rank / determinant preconditions and the implication chain
    (no linear terms) => (det J(x+H) = 1) => (index two)."""

    rank: int
    det: Polynomial
    precondition_ok: bool
    no_linear_terms: bool | None = None
    det_is_one: bool | None = None
    index_two: bool | None = None
    chain_ok: bool | None = None


def rank1_analysis(h: PolyMap) -> Rank1Report:
    """Analyze a rank-one Keller map x + H.

    Preconditions (rank J(H) = 1 and det J(x+H) a nonzero constant) are
    measured exactly and reported; when they fail the three statements are
    left unevaluated.
    """
    jh = jacobian(h)
    rank = poly_rank(jh)
    f = map_add(identity_map(h.n), h)
    det = poly_det(jacobian(f))
    keller = det.is_constant() and bool(det)
    if rank != 1 or not keller:
        return Rank1Report(rank, det, False)
    no_linear = not any(
        mono.degree() == 1 for c in h.components for mono in c.terms
    )
    det_is_one = det == Polynomial.constant(QQ, 1)
    index_two = (jh @ rename_to_tuple(jh, 1)).is_zero()
    chain_ok = ((not no_linear) or det_is_one) and ((not det_is_one) or index_two)
    return Rank1Report(rank, det, True, no_linear, det_is_one, index_two, chain_ok)


def rank_or_degree_one_check(h: PolyMap) -> bool:
    """For a nonzero quasi-translation of degree <= 1 or rank one, confirm
    that the Jacobian has strong nilpotency index at most two by expansion."""
    if h.is_zero():
        raise PreconditionError("H must be nonzero")
    if not is_quasi_translation(h):
        raise PreconditionError("x + H is not a quasi-translation")
    jh = jacobian(h)
    if h.degree() > 1 and poly_rank(jh) != 1:
        raise PreconditionError("requires degree <= 1 or rank J(H) = 1")
    return (jh @ rename_to_tuple(jh, 1)).is_zero()


# -- aggregate report ---------------------------------------------------------


@dataclass(frozen=True)
class MapAnalysisReport:
    map: PolyMap
    degree: object
    homogeneous: bool
    jacobian: PolyMatrix
    rank: int
    det_jf: Polynomial
    keller: bool
    regular_index: int | None
    strong: StrongNilpotencyVerdict
    certificate: TriangularizationCertificate | None
    quasi_translation: bool
    equivalence: EquivalenceSuiteReport | None
    qt_suite: QTIndex2Report | None
    rank1: Rank1Report | None


def analyze_map(h: PolyMap, r: int | None = None) -> MapAnalysisReport:
    """Run every applicable analysis on one map.

    The equivalence suite runs at the given r, defaulting to the strong
    nilpotency index when there is one; suites whose preconditions fail are
    reported as None.
    """
    jh = jacobian(h)
    degree, homogeneous = h.degree_info()
    rank = poly_rank(jh)
    det = poly_det(jacobian(map_add(identity_map(h.n), h)))
    keller = det.is_constant() and bool(det)
    regular = nilpotency_index(jh)
    verdict = strong_index_direct(jh)
    cert = None
    if verdict.strongly_nilpotent:
        result = triangularize(jh)
        if isinstance(result, TriangularizationCertificate):
            cert = result
    suite_r = r if r is not None else verdict.index
    equivalence = equivalence_suite(h, suite_r) if suite_r else None
    qt = is_quasi_translation(h)
    qt_report = qt_index2_suite(h) if qt else None
    rank1 = rank1_analysis(h) if (rank == 1 and keller) else None
    return MapAnalysisReport(
        map=h,
        degree=degree,
        homogeneous=homogeneous,
        jacobian=jh,
        rank=rank,
        det_jf=det,
        keller=keller,
        regular_index=regular,
        strong=verdict,
        certificate=cert,
        quasi_translation=qt,
        equivalence=equivalence,
        qt_suite=qt_report,
        rank1=rank1,
    )
