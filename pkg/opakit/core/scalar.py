from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath

RationalLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "QuadExt", "ExactScalar"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value: Union[RationalLike, str]) -> Fraction:
    """
    Convert an integer, Fraction or "p/q" string to a Fraction.

    Floats are refused: exact arithmetic never starts from a binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not rational scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Render a rational as "p" or "p/q"."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _precision_for(*values: Fraction) -> int:
    bits = 0
    for v in values:
        bits += v.numerator.bit_length() + v.denominator.bit_length()
    return 2 * bits + 96


class QuadExt:
    """
    An element a + b*sqrt(2) of the real quadratic field Q(sqrt 2).

    Both components are stored as reduced Fractions, so structural equality is
    value equality. Instances are immutable.

    Attributes:
        a: Rational part
        b: Coefficient of sqrt(2)
    """

    __slots__ = ("_a", "_b")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0) -> None:
        self._a = as_rational(a)
        self._b = as_rational(b)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction) -> "QuadExt":
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        return obj

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @staticmethod
    def coerce(value: object) -> Optional["QuadExt"]:
        if isinstance(value, QuadExt):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return QuadExt._raw(Fraction(value), _ZERO)
        return None

    def is_zero(self) -> bool:
        return not self._a and not self._b

    def is_rational(self) -> bool:
        return not self._b

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: object) -> "QuadExt":
        o = QuadExt.coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self._a + o._a, self._b + o._b)

    __radd__ = __add__

    def __sub__(self, other: object) -> "QuadExt":
        o = QuadExt.coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self._a - o._a, self._b - o._b)

    def __rsub__(self, other: object) -> "QuadExt":
        o = QuadExt.coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "QuadExt":
        return QuadExt._raw(-self._a, -self._b)

    def __mul__(self, other: object) -> "QuadExt":
        o = QuadExt.coerce(other)
        if o is None:
            return NotImplemented
        if not self._b and not o._b:
            return QuadExt._raw(self._a * o._a, _ZERO)
        return QuadExt._raw(
            self._a * o._a + 2 * self._b * o._b,
            self._a * o._b + self._b * o._a,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm a^2 - 2 b^2, zero only for the zero element."""
        return self._a * self._a - 2 * self._b * self._b

    def inverse(self) -> "QuadExt":
        if self.is_zero():
            raise ZeroDivisionError("Division by zero in Q(sqrt 2)")
        if not self._b:
            return QuadExt._raw(1 / self._a, _ZERO)
        n = self.norm()
        return QuadExt._raw(self._a / n, -self._b / n)

    def __truediv__(self, other: object) -> "QuadExt":
        o = QuadExt.coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "QuadExt":
        o = QuadExt.coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(2), decided by comparing a^2 with 2 b^2."""
        a, b = self._a, self._b
        if not b:
            return (a > 0) - (a < 0)
        if not a:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs; a^2 == 2 b^2 is impossible for rationals
        if a > 0:
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def __eq__(self, other: object) -> bool:
        o = QuadExt.coerce(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b

    def __hash__(self) -> int:
        if not self._b:
            return hash(self._a)
        return hash((self._a, self._b))

    def _compare(self, other: object, test: Callable[[int], bool]) -> bool:
        o = QuadExt.coerce(other)
        if o is None:
            return NotImplemented
        return test((self - o).sign())

    def __lt__(self, other: object) -> bool:
        return self._compare(other, lambda s: s < 0)

    def __le__(self, other: object) -> bool:
        return self._compare(other, lambda s: s <= 0)

    def __gt__(self, other: object) -> bool:
        return self._compare(other, lambda s: s > 0)

    def __ge__(self, other: object) -> bool:
        return self._compare(other, lambda s: s >= 0)

    def to_mpf(self, prec: Optional[int] = None) -> mpmath.mpf:
        prec = prec or _precision_for(self._a, self._b)
        with mpmath.workprec(prec):
            value = mpmath.mpf(self._a.numerator) / self._a.denominator
            if self._b:
                value += (
                    mpmath.mpf(self._b.numerator)
                    / self._b.denominator
                    * mpmath.sqrt(2)
                )
            return +value

    def to_float(self) -> float:
        """
        Correctly rounded double nearest to the exact value.

        Raises:
            OverflowError: If the magnitude exceeds the double range
        """
        if not self._b:
            return float(self._a)
        result = float(self.to_mpf())
        if math.isinf(result):
            raise OverflowError(f"{self} is outside the double range")
        return result

    def __float__(self) -> float:
        return self.to_float()

    def __str__(self) -> str:
        if not self._b:
            return format_rational(self._a)
        if self._b == 1:
            sqrt_part = "s2"
        elif self._b == -1:
            sqrt_part = "-s2"
        else:
            sqrt_part = f"{format_rational(self._b)}*s2"
        if not self._a:
            return sqrt_part
        sep = "" if sqrt_part.startswith("-") else "+"
        return f"{format_rational(self._a)}{sep}{sqrt_part}"

    def __repr__(self) -> str:
        return f"QuadExt({self})"


_Q0 = QuadExt._raw(_ZERO, _ZERO)
_Q1 = QuadExt._raw(_ONE, _ZERO)


class ExactScalar:
    """
    An element re + i*im of Q(sqrt 2) + i Q(sqrt 2).

    This is the coefficient field of exact-mode polynomials. Arithmetic with
    ints, Fractions and QuadExt values promotes them; arithmetic with a Python
    float or complex demotes the result to a complex double.

    Attributes:
        re: Real part
        im: Imaginary part
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re: Union[RationalLike, QuadExt] = 0, im: Union[RationalLike, QuadExt] = 0) -> None:
        self._re = re if isinstance(re, QuadExt) else QuadExt(re)
        self._im = im if isinstance(im, QuadExt) else QuadExt(im)

    @classmethod
    def _raw(cls, re: QuadExt, im: QuadExt) -> "ExactScalar":
        obj = object.__new__(cls)
        obj._re = re
        obj._im = im
        return obj

    @classmethod
    def from_parts(cls, a: RationalLike = 0, b: RationalLike = 0, c: RationalLike = 0, e: RationalLike = 0) -> "ExactScalar":
        """Build (a + b*sqrt 2) + i*(c + e*sqrt 2)."""
        return cls._raw(QuadExt(a, b), QuadExt(c, e))

    @property
    def re(self) -> QuadExt:
        return self._re

    @property
    def im(self) -> QuadExt:
        return self._im

    @staticmethod
    def coerce(value: object) -> Optional["ExactScalar"]:
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, QuadExt):
            return ExactScalar._raw(value, _Q0)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return ExactScalar._raw(QuadExt._raw(Fraction(value), _ZERO), _Q0)
        return None

    def is_zero(self) -> bool:
        return self._re.is_zero() and self._im.is_zero()

    def is_real(self) -> bool:
        return self._im.is_zero()

    def is_rational(self) -> bool:
        return self._im.is_zero() and self._re.is_rational()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: object) -> Union["ExactScalar", complex]:
        o = ExactScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            return NotImplemented
        return ExactScalar._raw(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, other: object) -> Union["ExactScalar", complex]:
        o = ExactScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) - other
            return NotImplemented
        return ExactScalar._raw(self._re - o._re, self._im - o._im)

    def __rsub__(self, other: object) -> Union["ExactScalar", complex]:
        o = ExactScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other - complex(self)
            return NotImplemented
        return ExactScalar._raw(o._re - self._re, o._im - self._im)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar._raw(-self._re, -self._im)

    def __mul__(self, other: object) -> Union["ExactScalar", complex]:
        o = ExactScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        if self._im.is_zero() and o._im.is_zero():
            return ExactScalar._raw(self._re * o._re, _Q0)
        return ExactScalar._raw(
            self._re * o._re - self._im * o._im,
            self._re * o._im + self._im * o._re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "ExactScalar":
        if self._im.is_zero():
            return self
        return ExactScalar._raw(self._re, -self._im)

    def abs2(self) -> QuadExt:
        """Squared modulus re^2 + im^2, an element of Q(sqrt 2)."""
        return self._re * self._re + self._im * self._im

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("Division by zero in Q(sqrt 2) + iQ(sqrt 2)")
        if self._im.is_zero():
            return ExactScalar._raw(self._re.inverse(), _Q0)
        inv = self.abs2().inverse()
        return ExactScalar._raw(self._re * inv, -self._im * inv)

    def __truediv__(self, other: object) -> Union["ExactScalar", complex]:
        o = ExactScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> Union["ExactScalar", complex]:
        o = ExactScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other / complex(self)
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "ExactScalar":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def real_sign(self) -> int:
        """
        Exact sign of a real scalar.

        Raises:
            ValueError: If the scalar has a non-zero imaginary part
        """
        if not self._im.is_zero():
            raise ValueError(f"{self} is not real")
        return self._re.sign()

    def __eq__(self, other: object) -> bool:
        o = ExactScalar.coerce(other)
        if o is None:
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self) -> int:
        if self._im.is_zero():
            return hash(self._re)
        return hash((self._re, self._im))

    def to_complex(self) -> complex:
        return complex(self._re.to_float(), self._im.to_float())

    def __complex__(self) -> complex:
        return self.to_complex()

    def __str__(self) -> str:
        if self._im.is_zero():
            return str(self._re)
        return f"({self._re},{self._im})"

    def __repr__(self) -> str:
        return f"ExactScalar({self})"


ZERO = ExactScalar._raw(_Q0, _Q0)
ONE = ExactScalar._raw(_Q1, _Q0)
SQRT2 = ExactScalar._raw(QuadExt._raw(_ZERO, _ONE), _Q0)
I = ExactScalar._raw(_Q0, _Q1)


def to_exact(value: object) -> ExactScalar:
    """
    Promote an int, Fraction, QuadExt or ExactScalar to ExactScalar.

    Raises:
        TypeError: For floats, complex numbers and anything else
    """
    result = ExactScalar.coerce(value)
    if result is None:
        raise TypeError(f"Cannot use {type(value).__name__} as an exact scalar")
    return result


def to_complex(value: object) -> complex:
    """Demote any supported scalar (exact or floating) to a complex double."""
    if isinstance(value, ExactScalar):
        return value.to_complex()
    if isinstance(value, QuadExt):
        return complex(value.to_float())
    if isinstance(value, Fraction):
        return complex(float(value))
    return complex(value)  # type: ignore[arg-type]


def is_exact_scalar(value: object) -> bool:
    return ExactScalar.coerce(value) is not None


def field_ops(x: object, y: object = None, op: str = "add") -> Union[ExactScalar, bool]:
    """
    Apply one field operation to exact scalars.

    "conj", "negate" and "is_zero" act on x alone; y may be None for them.

    Args:
        x: Left operand
        y: Right operand of the binary operations
        op: One of "add", "sub", "mul", "div", "eq", "conj", "negate", "is_zero"

    Returns:
        The exact result, or a bool for "eq" and "is_zero"

    Raises:
        ZeroDivisionError: For division by zero
        ValueError: For an unknown operation
    """
    a = to_exact(x)
    if op == "conj":
        return a.conjugate()
    if op == "negate":
        return -a
    if op == "is_zero":
        return a.is_zero()
    b = to_exact(y)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "eq":
        return a == b
    raise ValueError(f"Unknown field operation {op!r}")
