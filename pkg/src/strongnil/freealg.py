"""Noncommutative polynomials: rational-weighted words over indexed letters.

Multiplication concatenates words, so x1*x2 and x2*x1 are different values.
Letters across distinct fresh tuples are kept fully noncommuting as well;
for homogeneous matrices the vanishing of r-fold products is insensitive to
that choice, which is exactly what ``nc_homogeneous_index_theorem_check``
verifies via the word-splitting correspondence.  Abelianization maps every
word to a commutative monomial and is a ring homomorphism onto the
commutative polynomial layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poly import Monomial, NEG_INFINITY, Polynomial, _check_budget
from .rings import as_fraction, QQ
from .variables import KIND_X, KIND_Y, VarId, yvar

Word = tuple[VarId, ...]

EMPTY_WORD: Word = ()


class FreePoly:
    """A finite rational combination of words in noncommuting letters."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        clean: dict[Word, Fraction] = {}
        if terms:
            for word, coeff in terms.items():
                c = as_fraction(coeff)
                if not c:
                    continue
                word = tuple(word)
                for letter in word:
                    if not isinstance(letter, VarId) or letter.kind not in (KIND_X, KIND_Y):
                        raise ValueError("letters must be x- or y-variables")
                prev = clean.get(word)
                c = c if prev is None else prev + c
                if c:
                    clean[word] = c
                else:
                    clean.pop(word, None)
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[Word, Fraction]) -> "FreePoly":
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def zero(cls) -> "FreePoly":
        return cls._raw({})

    @classmethod
    def constant(cls, value) -> "FreePoly":
        c = as_fraction(value)
        return cls._raw({EMPTY_WORD: c} if c else {})

    @classmethod
    def letter(cls, var: VarId) -> "FreePoly":
        if var.kind not in (KIND_X, KIND_Y):
            raise ValueError("letters must be x- or y-variables")
        return cls._raw({(var,): Fraction(1)})

    def _coerce(self, other):
        if isinstance(other, FreePoly):
            return other
        if isinstance(other, (int, Fraction)):
            return FreePoly.constant(other)
        return None

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FreePoly.constant(other)
        if not isinstance(other, FreePoly):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for word, c in other.terms.items():
            prev = out.get(word)
            s = c if prev is None else prev + c
            if s:
                out[word] = s
            elif prev is not None:
                del out[word]
        return FreePoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return FreePoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, FreePoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return FreePoly.zero()
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2  # concatenation: order is significant
                c = c1 * c2
                prev = out.get(word)
                s = c if prev is None else prev + c
                if s:
                    out[word] = s
                elif prev is not None:
                    del out[word]
        _check_budget(len(out))
        return FreePoly._raw(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are not defined")
        result = FreePoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, value) -> "FreePoly":
        c = as_fraction(value)
        if not c:
            return FreePoly.zero()
        return FreePoly._raw({w: coeff * c for w, coeff in self.terms.items()})

    def degree(self):
        """Longest word length; NEG_INFINITY when zero."""
        if not self.terms:
            return NEG_INFINITY
        return max(len(w) for w in self.terms)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def rename_to_tuple(self, j: int) -> "FreePoly":
        """Replace each letter x_i by y<j>_i; requires pure x-words."""
        out = {}
        for word, coeff in self.terms.items():
            letters = []
            for v in word:
                if v.kind != KIND_X:
                    raise ValueError("renaming requires x-letters only")
                letters.append(yvar(j, v.index))
            out[tuple(letters)] = coeff
        return FreePoly._raw(out)

    def abelianize(self) -> Polynomial:
        """Image in the commutative polynomial ring (letters made commuting)."""
        out = Polynomial.zero(QQ)
        for word, coeff in self.terms.items():
            counts: dict[VarId, int] = {}
            for v in word:
                counts[v] = counts.get(v, 0) + 1
            out = out + Polynomial.term(QQ, coeff, Monomial(counts.items()))
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=lambda w: (len(w), w), reverse=True)
        pieces = []
        for k, word in enumerate(ordered):
            coeff = self.terms[word]
            negative = coeff < 0
            magnitude = -coeff if negative else coeff
            factors = []
            i = 0
            while i < len(word):
                j = i
                while j < len(word) and word[j] == word[i]:
                    j += 1
                run = j - i
                factors.append(word[i].name + (f"^{run}" if run > 1 else ""))
                i = j
            if not factors or magnitude != 1:
                factors.insert(0, str(magnitude))
            term = "*".join(factors)
            if k == 0:
                pieces.append(f"-{term}" if negative else term)
            else:
                pieces.append(f" - {term}" if negative else f" + {term}")
        return "".join(pieces)

    def __repr__(self):
        return f"FreePoly({self})"


def parse_free(text: str, allowed_vars: Iterable[VarId] | None = None) -> FreePoly:
    """Parse a noncommutative polynomial; factor order is preserved."""
    from .parser import ParseError, _Parser
    from .variables import parse_var_name

    allowed = None if allowed_vars is None else set(allowed_vars)

    def make_const(value: Fraction) -> FreePoly:
        return FreePoly.constant(value)

    def make_var(name: str, pos: int) -> FreePoly:
        var = parse_var_name(name)
        if var is None or var.kind not in (KIND_X, KIND_Y):
            raise ParseError(f"unknown letter {name!r}", pos)
        if allowed is not None and var not in allowed:
            raise ParseError(f"letter {name!r} is not allowed here", pos)
        return FreePoly.letter(var)

    return _Parser(text, make_const, make_var).parse()


class FreePolyMatrix:
    """A square matrix of noncommutative polynomials."""

    __slots__ = ("size", "rows")

    def __init__(self, rows: Sequence[Sequence[FreePoly]]):
        grid = tuple(tuple(row) for row in rows)
        m = len(grid)
        if m == 0 or any(len(row) != m for row in grid):
            raise ValueError("a matrix must be square and nonempty")
        for row in grid:
            for entry in row:
                if not isinstance(entry, FreePoly):
                    raise TypeError("entries must be FreePoly values")
        self.size = m
        self.rows = grid

    @classmethod
    def zeros(cls, m: int) -> "FreePolyMatrix":
        z = FreePoly.zero()
        return cls([[z] * m for _ in range(m)])

    @classmethod
    def identity(cls, m: int) -> "FreePolyMatrix":
        z = FreePoly.zero()
        one = FreePoly.constant(1)
        return cls([[one if i == j else z for j in range(m)] for i in range(m)])

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], allowed_vars=None) -> "FreePolyMatrix":
        return cls([[parse_free(s, allowed_vars) for s in row] for row in rows])

    def is_zero(self) -> bool:
        return all(not e for row in self.rows for e in row)

    def __eq__(self, other):
        return isinstance(other, FreePolyMatrix) and self.rows == other.rows

    def __matmul__(self, other: "FreePolyMatrix") -> "FreePolyMatrix":
        if not isinstance(other, FreePolyMatrix):
            raise TypeError("expected a FreePolyMatrix")
        if self.size != other.size:
            raise ValueError("size mismatch")
        m = self.size
        out = []
        for i in range(m):
            out_row = []
            for j in range(m):
                acc = FreePoly.zero()
                for k in range(m):
                    left = self.rows[i][k]
                    if not left:
                        continue
                    right = other.rows[k][j]
                    if not right:
                        continue
                    acc = acc + left * right  # entry products keep factor order
                out_row.append(acc)
            out.append(out_row)
        return FreePolyMatrix(out)

    def power(self, k: int) -> "FreePolyMatrix":
        if k < 1:
            raise ValueError("power must be >= 1")
        result = self
        for _ in range(k - 1):
            result = result @ self
        return result

    def rename_to_tuple(self, j: int) -> "FreePolyMatrix":
        return FreePolyMatrix([[e.rename_to_tuple(j) for e in row] for row in self.rows])

    def abelianize(self):
        from .polymat import PolyMatrix

        return PolyMatrix([[e.abelianize() for e in row] for row in self.rows], QQ)

    def trace(self) -> FreePoly:
        acc = FreePoly.zero()
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.rows]

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"FreePolyMatrix[{body}]"


def nc_mat_mul(a: FreePolyMatrix, b: FreePolyMatrix) -> FreePolyMatrix:
    return a @ b


def _uniform_degree(m: FreePolyMatrix):
    """Common total degree of the nonzero entries, or None for a zero matrix.

    Raises ValueError when entries are inhomogeneous or of mixed degrees
    (graded weightings other than word length are not supported).
    """
    degrees = set()
    for row in m.rows:
        for e in row:
            if not e:
                continue
            if not e.is_homogeneous():
                raise ValueError(
                    "entries must be homogeneous of one common degree (weighted gradings are unsupported)"
                )
            degrees.add(e.degree())
    if not degrees:
        return None
    if len(degrees) > 1:
        raise ValueError(
            "entries must be homogeneous of one common degree (weighted gradings are unsupported)"
        )
    return degrees.pop()


def nc_nilpotency_index(m: FreePolyMatrix, max_r: int | None = None) -> int | None:
    """Least r with M^r = 0 in the free algebra, or None past the bound.

    The default bound is the matrix size; for inhomogeneous matrices no
    theoretical bound applies, so callers may widen it.
    """
    bound = max_r if max_r is not None else m.size
    power = m
    for r in range(1, bound + 1):
        if power.is_zero():
            return r
        if r < bound:
            power = power @ m
    return None


def nc_fresh_tuple_product(m: FreePolyMatrix, r: int) -> FreePolyMatrix:
    """Product of r copies with letters renamed to fresh noncommuting tuples.

    Tuple r is leftmost; letters from distinct tuples do not commute (the
    simplest choice, and for homogeneous matrices equivalent to any partially
    commuting variant as far as vanishing is concerned).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    for row in m.rows:
        for e in row:
            for word in e.terms:
                for v in word:
                    if v.kind != KIND_X:
                        raise ValueError("matrix must be over x-letters only")
    product = m.rename_to_tuple(r)
    for j in range(r - 1, 0, -1):
        product = product @ m.rename_to_tuple(j)
    return product


def nc_strong_nilpotency_index(m: FreePolyMatrix, max_r: int | None = None) -> int | None:
    """Least r <= bound with the r-fold fresh-tuple product zero, else None."""
    bound = max_r if max_r is not None else m.size
    product: FreePolyMatrix | None = None
    for r in range(1, bound + 1):
        factor = m.rename_to_tuple(r)
        product = factor if product is None else factor @ product
        if product.is_zero():
            return r
    return None


def _split_word(word: Word, r: int, d: int) -> Word:
    """x_{i_1}..x_{i_{rd}} -> y^(r) letters for the first d positions, then
    y^(r-1), down to y^(1) for the last d positions."""
    letters = []
    for chunk in range(r):
        label = r - chunk
        for pos in range(chunk * d, (chunk + 1) * d):
            letters.append(yvar(label, word[pos].index))
    return tuple(letters)


def _split_poly(p: FreePoly, r: int, d: int) -> FreePoly:
    out: dict[Word, Fraction] = {}
    for word, coeff in p.terms.items():
        if len(word) != r * d:
            raise ValueError("word length does not match the grading")
        out[_split_word(word, r, d)] = coeff
    return FreePoly._raw(out)


@dataclass(frozen=True)
class HomogeneousIndexReport:
    degree: int | None
    nilpotency_index: int | None
    strong_index: int | None
    indices_agree: bool
    splitting_ok: bool


def nc_homogeneous_index_theorem_check(m: FreePolyMatrix) -> HomogeneousIndexReport:
    """For a uniformly homogeneous matrix, confirm that the plain nilpotency
    index and the strong nilpotency index coincide.

    Also verifies the word-splitting correspondence: chunking each degree-r*d
    word of M^k into r blocks of d letters and relabeling by tuple must
    reproduce the k-fold fresh-tuple product term by term.
    """
    d = _uniform_degree(m)
    if d == 0:
        raise ValueError("entries must have degree >= 1")
    n_index = nc_nilpotency_index(m)
    s_index = nc_strong_nilpotency_index(m)
    splitting_ok = True
    if d is not None:
        upper = n_index if n_index is not None else m.size
        power = m
        for k in range(1, upper + 1):
            product = nc_fresh_tuple_product(m, k)
            split = FreePolyMatrix(
                [[_split_poly(e, k, d) for e in row] for row in power.rows]
            )
            if split != product:
                splitting_ok = False
                break
            if k < upper:
                power = power @ m
    return HomogeneousIndexReport(
        degree=d,
        nilpotency_index=n_index,
        strong_index=s_index,
        indices_agree=n_index == s_index,
        splitting_ok=splitting_ok,
    )


def counterexample_matrix() -> FreePolyMatrix:
    """The fixed 3 x 3 inhomogeneous matrix showing that the index
    correspondence needs homogeneity."""
    return FreePolyMatrix.from_strings(
        [
            ["0", "0", "0"],
            ["x2", "x1", "-1"],
            ["2*x1*x2", "x1^2", "-x1"],
        ]
    )


@dataclass(frozen=True)
class CounterexampleReport:
    matrix: FreePolyMatrix
    nilpotency_index: int | None
    commutative_nilpotency_index: int | None
    pair_trace: Polynomial
    nc_pair_trace: FreePoly
    strongly_nilpotent: bool
    fresh_products_nonzero: dict


def nc_counterexample_report() -> CounterexampleReport:
    """Analyze the fixed inhomogeneous matrix.

    Its cube vanishes in both the free and the commutative reading, yet it is
    not strongly nilpotent: the trace of the 2-fold fresh-tuple product is
    nonzero, and every fresh-tuple product up to the matrix size is nonzero.
    """
    from .polymat import nilpotency_index
    from .strong import pair_trace_obstruction, strong_index_direct

    m = counterexample_matrix()
    commutative = m.abelianize()
    pair = pair_trace_obstruction(commutative)
    verdict = strong_index_direct(commutative)
    products = {
        r: not nc_fresh_tuple_product(m, r).is_zero() for r in range(1, m.size + 1)
    }
    return CounterexampleReport(
        matrix=m,
        nilpotency_index=nc_nilpotency_index(m),
        commutative_nilpotency_index=nilpotency_index(commutative),
        pair_trace=pair if pair is not None else Polynomial.zero(QQ),
        nc_pair_trace=nc_fresh_tuple_product(m, 2).trace(),
        strongly_nilpotent=verdict.strongly_nilpotent,
        fresh_products_nonzero=products,
    )
