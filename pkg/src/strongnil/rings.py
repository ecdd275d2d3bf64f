"""Exact coefficient rings: the rationals and the dual numbers over them.

Coefficients are either ``fractions.Fraction`` values (always reduced, never
rounded) or ``DualScalar`` values a + b*eps with eps^2 = 0.  Both kinds
support +, -, *, equality and a truthiness zero test, which is the whole
interface the polynomial layer relies on.  Dual scalars deliberately have no
division: the dual numbers are not a field and nothing here needs it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# The exact rational scalar type used throughout the package.
Scalar = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact Fraction.

    Floats are rejected: silently converting them would smuggle binary
    rounding into an exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) or isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class DualScalar:
    """A dual number a + b*eps with eps^2 = 0, both parts exact rationals."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(a, b=0) -> "DualScalar":
        return DualScalar(as_fraction(a), as_fraction(b))

    def __add__(self, other):
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return DualScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return DualScalar(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return DualScalar(other.a - self.a, other.b - self.b)

    def __mul__(self, other):
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        # (a + b*eps)(c + d*eps) = ac + (ad + bc)*eps
        return DualScalar(self.a * other.a, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __neg__(self):
        return DualScalar(-self.a, -self.b)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*eps"
        return f"({self.a} + {self.b}*eps)"


def _as_dual(value):
    if isinstance(value, DualScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return DualScalar(Fraction(value), _ZERO)
    return None


class Ring:
    """Descriptor for a coefficient ring; the two instances are QQ and QQ_EPS."""

    name: str
    zero: object
    one: object

    def coerce(self, value):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class _RationalField(Ring):
    name = "Q"
    zero = _ZERO
    one = _ONE

    def coerce(self, value):
        if isinstance(value, DualScalar):
            raise TypeError("dual-number coefficient in a rational-ring polynomial")
        return as_fraction(value)


class _DualNumberRing(Ring):
    name = "Q[eps]"
    zero = DualScalar(_ZERO, _ZERO)
    one = DualScalar(_ONE, _ZERO)
    eps = DualScalar(_ZERO, _ONE)

    def coerce(self, value):
        if isinstance(value, DualScalar):
            return value
        return DualScalar(as_fraction(value), _ZERO)


QQ = _RationalField()
QQ_EPS = _DualNumberRing()

RINGS_BY_NAME = {QQ.name: QQ, QQ_EPS.name: QQ_EPS}
