"""Sparse multivariate polynomials with exact coefficients.

A polynomial is a canonical term map ``Monomial -> coefficient`` over a fixed
ring (QQ or QQ_EPS).  Zero coefficients are never stored, so two polynomials
are equal exactly when their term maps are equal and the zero polynomial has
an empty map.  Monomials are compared lexicographically along the global
variable order, which makes leading terms and printed output deterministic.

All values are immutable after construction and every operation is a pure
function, so polynomials can be shared freely between threads or tasks.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Mapping

from .rings import QQ, DualScalar, Ring
from .variables import KIND_X, VarId, yvar

NEG_INFINITY = float("-inf")


class TermLimitError(RuntimeError):
    """Raised when an intermediate result exceeds the configured term cap."""


_term_limit: int | None = None


def set_term_limit(limit: int | None) -> None:
    """Cap the term count of intermediate products (None disables the cap)."""
    global _term_limit
    if limit is not None and limit < 1:
        raise ValueError("term limit must be positive or None")
    _term_limit = limit


def get_term_limit() -> int | None:
    return _term_limit


def _check_budget(count: int) -> None:
    if _term_limit is not None and count > _term_limit:
        raise TermLimitError(
            f"intermediate polynomial has {count} terms, exceeding the cap of {_term_limit}"
        )


@functools.total_ordering
class Monomial:
    """A power product of variables; exponents are strictly positive."""

    __slots__ = ("powers", "_hash")

    def __init__(self, powers: Iterable[tuple[VarId, int]] = ()):
        merged: dict[VarId, int] = {}
        for var, exp in powers:
            exp = int(exp)
            if exp == 0:
                continue
            merged[var] = merged.get(var, 0) + exp
        for var, exp in merged.items():
            if exp < 0:
                raise ValueError(f"negative exponent for {var}")
        pairs = tuple(sorted(((v, e) for v, e in merged.items() if e), key=lambda p: p[0]))
        self.powers = pairs
        self._hash = hash(pairs)

    @classmethod
    def _raw(cls, pairs: tuple[tuple[VarId, int], ...]) -> "Monomial":
        m = object.__new__(cls)
        m.powers = pairs
        m._hash = hash(pairs)
        return m

    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    def exponent(self, var: VarId) -> int:
        for v, e in self.powers:
            if v == var:
                return e
        return 0

    def variables(self) -> set[VarId]:
        return {v for v, _ in self.powers}

    def is_constant(self) -> bool:
        return not self.powers

    def mul(self, other: "Monomial") -> "Monomial":
        if not self.powers:
            return other
        if not other.powers:
            return self
        a, b = self.powers, other.powers
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            va, ea = a[i]
            vb, eb = b[j]
            if va == vb:
                out.append((va, ea + eb))
                i += 1
                j += 1
            elif va < vb:
                out.append(a[i])
                i += 1
            else:
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return Monomial._raw(tuple(out))

    def divide(self, other: "Monomial") -> "Monomial | None":
        """Exact monomial quotient self / other, or None when not divisible."""
        rem = dict(self.powers)
        for v, e in other.powers:
            have = rem.get(v, 0) - e
            if have < 0:
                return None
            if have:
                rem[v] = have
            else:
                rem.pop(v, None)
        return Monomial._raw(tuple(sorted(rem.items(), key=lambda p: p[0])))

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.powers == other.powers

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Monomial"):
        # Lexicographic: walk variables in increasing global order; at the
        # first variable whose exponents differ, the larger exponent wins.
        a, b = self.powers, other.powers
        i = j = 0
        while i < len(a) and j < len(b):
            va, ea = a[i]
            vb, eb = b[j]
            if va == vb:
                if ea != eb:
                    return ea < eb
                i += 1
                j += 1
            elif va < vb:
                return False  # self has a positive exponent where other has 0
            else:
                return True
        if i < len(a):
            return False
        return j < len(b)

    def __str__(self):
        if not self.powers:
            return "1"
        return "*".join(v.name + (f"^{e}" if e > 1 else "") for v, e in self.powers)

    def __repr__(self):
        return f"Monomial({self})"


MONOMIAL_ONE = Monomial()


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, object] = {}
        if terms:
            for mono, coeff in terms.items():
                c = ring.coerce(coeff)
                if c:
                    prev = clean.get(mono)
                    c = c if prev is None else prev + c
                    if c:
                        clean[mono] = c
                    else:
                        clean.pop(mono, None)
        self.ring = ring
        self.terms = clean

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "Polynomial":
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    @classmethod
    def zero(cls, ring: Ring = QQ) -> "Polynomial":
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring: Ring, value) -> "Polynomial":
        c = ring.coerce(value)
        return cls._raw(ring, {MONOMIAL_ONE: c} if c else {})

    @classmethod
    def variable(cls, ring: Ring, var: VarId) -> "Polynomial":
        return cls._raw(ring, {Monomial._raw(((var, 1),)): ring.one})

    @classmethod
    def term(cls, ring: Ring, coeff, mono: Monomial) -> "Polynomial":
        c = ring.coerce(coeff)
        return cls._raw(ring, {mono: c} if c else {})

    # -- ring plumbing -------------------------------------------------

    def _coerce_operand(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring:
                raise ValueError(f"mixed coefficient rings: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, DualScalar)):
            return Polynomial.constant(self.ring, other)
        return None

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, DualScalar)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for mono, c in other.terms.items():
            prev = out.get(mono)
            s = c if prev is None else prev + c
            if s:
                out[mono] = s
            elif prev is not None:
                del out[mono]
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, DualScalar)):
            return self.scale(other)
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return Polynomial.zero(self.ring)
        out: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                if not c:  # possible over the dual numbers: eps * eps = 0
                    continue
                m = m1.mul(m2)
                prev = out.get(m)
                s = c if prev is None else prev + c
                if s:
                    out[m] = s
                elif prev is not None:
                    del out[m]
        _check_budget(len(out))
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative polynomial powers are not defined")
        result = Polynomial.constant(self.ring, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, value) -> "Polynomial":
        c = self.ring.coerce(value)
        if not c:
            return Polynomial.zero(self.ring)
        out = {}
        for m, coeff in self.terms.items():
            s = coeff * c
            if s:
                out[m] = s
        return Polynomial._raw(self.ring, out)

    # -- structure -----------------------------------------------------

    def coefficient(self, mono: Monomial):
        return self.terms.get(mono, self.ring.zero)

    def constant_coefficient(self):
        return self.terms.get(MONOMIAL_ONE, self.ring.zero)

    def is_constant(self) -> bool:
        return all(m.is_constant() for m in self.terms)

    def variables(self) -> set[VarId]:
        out: set[VarId] = set()
        for m in self.terms:
            out.update(m.variables())
        return out

    def total_degree(self):
        """Largest term degree; NEG_INFINITY for the zero polynomial."""
        if not self.terms:
            return NEG_INFINITY
        return max(m.degree() for m in self.terms)

    def degree_info(self):
        """(total degree, homogeneous flag); the zero polynomial is homogeneous."""
        if not self.terms:
            return (NEG_INFINITY, True)
        degrees = {m.degree() for m in self.terms}
        return (max(degrees), len(degrees) == 1)

    def leading(self):
        """(monomial, coefficient) of the lexicographically largest term."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        mono = max(self.terms)
        return mono, self.terms[mono]

    # -- substitution and renaming --------------------------------------

    def substitute(self, assignment: Mapping[VarId, object]) -> "Polynomial":
        """Replace variables by polynomials; unassigned variables stay put.

        The assignment values may be polynomials over the same ring or plain
        scalars.  Substitution is a ring homomorphism.
        """
        if not assignment or not self.terms:
            return self
        ring = self.ring
        images: dict[VarId, Polynomial] = {}
        for var, value in assignment.items():
            if isinstance(value, Polynomial):
                if value.ring is not ring:
                    raise ValueError("substitution value over a different ring")
                images[var] = value
            else:
                images[var] = Polynomial.constant(ring, value)
        power_cache: dict[tuple[VarId, int], Polynomial] = {}
        result = Polynomial.zero(ring)
        for mono, coeff in self.terms.items():
            kept: list[tuple[VarId, int]] = []
            acc: Polynomial | None = None
            for var, exp in mono.powers:
                img = images.get(var)
                if img is None:
                    kept.append((var, exp))
                    continue
                key = (var, exp)
                p = power_cache.get(key)
                if p is None:
                    p = img ** exp
                    power_cache[key] = p
                acc = p if acc is None else acc * p
            base = Polynomial.term(ring, coeff, Monomial._raw(tuple(kept)))
            result = result + (base if acc is None else base * acc)
        return result

    def rename_to_tuple(self, j: int) -> "Polynomial":
        """Replace every x_i by y<j>_i.  Requires a pure x-variable polynomial."""
        if j < 1:
            raise ValueError("tuple index must be >= 1")
        out = {}
        for mono, coeff in self.terms.items():
            pairs = []
            for var, exp in mono.powers:
                if var.kind != KIND_X:
                    raise ValueError(f"cannot rename {var}: only x-variables may occur")
                pairs.append((yvar(j, var.index), exp))
            # x_i -> y<j>_i preserves the relative variable order
            out[Monomial._raw(tuple(pairs))] = coeff
        return Polynomial._raw(self.ring, out)

    def derivative(self, var: VarId) -> "Polynomial":
        """Formal partial derivative with respect to one variable."""
        out: dict[Monomial, object] = {}
        for mono, coeff in self.terms.items():
            e = mono.exponent(var)
            if not e:
                continue
            pairs = tuple(
                (v, ee - 1 if v == var else ee)
                for v, ee in mono.powers
                if not (v == var and ee == 1)
            )
            reduced = Monomial._raw(tuple((v, ee) for v, ee in pairs if ee))
            c = coeff * e
            prev = out.get(reduced)
            s = c if prev is None else prev + c
            if s:
                out[reduced] = s
            elif prev is not None:
                del out[reduced]
        return Polynomial._raw(self.ring, out)

    # -- printing --------------------------------------------------------

    def __str__(self):
        return poly_to_string(self)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_to_string(p: Polynomial) -> str:
    """Render a polynomial in the textual grammar; parse(str(p)) == p."""
    if not p.terms:
        return "0"
    # Over the dual numbers each coefficient splits into a rational part and
    # an eps part, printed as separate terms so that the text stays parseable.
    parts: list[tuple[Fraction, bool, Monomial]] = []
    for mono in sorted(p.terms, reverse=True):
        coeff = p.terms[mono]
        if isinstance(coeff, DualScalar):
            if coeff.a:
                parts.append((coeff.a, False, mono))
            if coeff.b:
                parts.append((coeff.b, True, mono))
        else:
            parts.append((coeff, False, mono))
    pieces: list[str] = []
    for k, (coeff, has_eps, mono) in enumerate(parts):
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        factors: list[str] = []
        if has_eps:
            factors.append("eps")
        factors.extend(v.name + (f"^{e}" if e > 1 else "") for v, e in mono.powers)
        if not factors or magnitude != 1:
            factors.insert(0, str(magnitude))
        term = "*".join(factors)
        if k == 0:
            pieces.append(f"-{term}" if negative else term)
        else:
            pieces.append(f" - {term}" if negative else f" + {term}")
    return "".join(pieces)


def exact_div(p: Polynomial, d: Polynomial) -> Polynomial:
    """Exact polynomial quotient p / d over the rationals.

    Raises ValueError when the division is not exact.  Used by the
    fraction-free elimination, where exactness is guaranteed.
    """
    if p.ring is not QQ or d.ring is not QQ:
        raise ValueError("exact division is only defined over the rationals")
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    if not p:
        return p
    if d.is_constant():
        return p.scale(Fraction(1) / d.constant_coefficient())
    d_mono, d_coeff = d.leading()
    quotient: dict[Monomial, object] = {}
    rem = p
    while rem:
        r_mono, r_coeff = rem.leading()
        q_mono = r_mono.divide(d_mono)
        if q_mono is None:
            raise ValueError("polynomial division is not exact")
        q_coeff = r_coeff / d_coeff
        quotient[q_mono] = q_coeff
        rem = rem - d * Polynomial.term(QQ, q_coeff, q_mono)
    return Polynomial._raw(QQ, quotient)
