"""
Exact Number Module
Rationals and elements of a real quadratic field Q(sqrt m)

Rational is fractions.Fraction. QuadraticNumber holds a + b*sqrt(m) with rational a, b
and a square-free radicand m > 1. Rational values (b == 0) are normalised to m = 1 and
combine with any radicand.
"""

import math
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Dict, Union

from src.exceptions import MixedRadicands

Rational = Fraction


@lru_cache(maxsize=None)
def is_square_free(m: int) -> bool:
    """True if no prime square divides m"""
    if m < 1:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


def format_rational(q) -> str:
    """Canonical text form 'p/q' (or 'p' when the denominator is 1)"""
    return str(Fraction(q))


def parse_rational(text) -> Fraction:
    """Parse 'p/q', 'p' or an int; raises ValueError on anything else"""
    if isinstance(text, bool):
        raise ValueError(f"Not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Not a rational: {text!r}")
    value = Fraction(text.strip())
    if "." in text or "e" in text.lower():
        raise ValueError(f"Decimal notation is not exact: {text!r}")
    return value


def pochhammer(x, n: int) -> Fraction:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1"""
    if n < 0:
        raise ValueError(f"Pochhammer index must be non-negative, got {n}")
    return math.prod((Fraction(x) + i for i in range(n)), start=Fraction(1))


def generalized_binomial(x, k: int) -> Fraction:
    """binom(x, k) = x (x-1) ... (x-k+1) / k! for rational x"""
    if k < 0:
        return Fraction(0)
    return pochhammer(Fraction(x) - k + 1, k) / math.factorial(k)


@total_ordering
class QuadraticNumber:
    """Element a + b*sqrt(m) of Q(sqrt m)"""

    __slots__ = ("_a", "_b", "_m")

    def __init__(self, a=0, b=0, m: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        if b != 0:
            if not isinstance(m, int) or m < 2 or not is_square_free(m):
                raise ValueError(f"Radicand must be a square-free integer > 1, got {m}")
        else:
            m = 1
        self._a = a
        self._b = b
        self._m = m

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, m: int) -> "QuadraticNumber":
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._m = m if b != 0 else 1
        return obj

    @classmethod
    def coerce(cls, value) -> "QuadraticNumber":
        """Lift int / Fraction into the field; QuadraticNumber passes through"""
        if isinstance(value, QuadraticNumber):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls._make(Fraction(value), Fraction(0), 1)
        raise TypeError(f"Cannot interpret {value!r} as an exact number")

    @classmethod
    def sqrt(cls, m: int) -> "QuadraticNumber":
        return cls(0, 1, m)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def m(self) -> int:
        return self._m

    def is_rational(self) -> bool:
        return self._b == 0

    def to_fraction(self) -> Fraction:
        if self._b != 0:
            raise ValueError(f"{self} is irrational")
        return self._a

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber._make(self._a, -self._b, self._m)

    @property
    def norm(self) -> Fraction:
        """Field norm a^2 - m b^2"""
        return self._a * self._a - self._m * self._b * self._b

    def sign(self) -> int:
        """Sign of the real value, decided without floating point"""
        a, b = self._a, self._b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with m b^2
        return sa if a * a > self._m * b * b else sb

    @staticmethod
    def _radicand(x: "QuadraticNumber", y: "QuadraticNumber") -> int:
        if x._b == 0:
            return y._m
        if y._b == 0 or x._m == y._m:
            return x._m
        raise MixedRadicands(f"Cannot combine {x} (radicand {x._m}) with {y} (radicand {y._m})")

    def _other(self, other):
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadraticNumber._make(Fraction(other), Fraction(0), 1)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        m = self._radicand(self, other)
        return QuadraticNumber._make(self._a + other._a, self._b + other._b, m)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber._make(-self._a, -self._b, self._m)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        m = self._radicand(self, other)
        return QuadraticNumber._make(self._a - other._a, self._b - other._b, m)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        m = self._radicand(self, other)
        a = self._a * other._a + m * self._b * other._b
        b = self._a * other._b + self._b * other._a
        return QuadraticNumber._make(a, b, m)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        norm = self.norm
        if norm == 0:
            raise ZeroDivisionError("QuadraticNumber division by zero")
        return QuadraticNumber._make(self._a / norm, -self._b / norm, self._m)

    def __truediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QuadraticNumber._make(Fraction(1), Fraction(0), 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self._a != other._a or self._b != other._b:
            return False
        return self._b == 0 or self._m == other._m

    def __lt__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._m))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __float__(self):
        return float(self._a) + float(self._b) * math.sqrt(self._m)

    def __repr__(self):
        return f"QuadraticNumber({self._a!s}, {self._b!s}, {self._m})"

    def __str__(self):
        if self._b == 0:
            return str(self._a)
        root = f"√{self._m}"
        coeff = abs(self._b)
        term = root if coeff == 1 else f"{coeff}{root}"
        if self._a == 0:
            return term if self._b > 0 else f"-{term}"
        op = "+" if self._b > 0 else "-"
        return f"{self._a}{op}{term}"


def encode_value(value) -> Union[str, Dict[str, str]]:
    """Text form used in design files and reports"""
    q = QuadraticNumber.coerce(value)
    if q.is_rational():
        return format_rational(q.a)
    return {"a": format_rational(q.a), "b": format_rational(q.b)}


def decode_value(entry, radicand=None) -> QuadraticNumber:
    """Inverse of encode_value; dict entries need the design's radicand"""
    if isinstance(entry, dict):
        if set(entry) - {"a", "b"}:
            raise ValueError(f"Unexpected keys in {entry!r}")
        a = parse_rational(entry.get("a", "0"))
        b = parse_rational(entry.get("b", "0"))
        if b != 0 and radicand is None:
            raise ValueError(f"Irrational entry {entry!r} without a radicand")
        return QuadraticNumber(a, b, radicand if b != 0 else 1)
    return QuadraticNumber(parse_rational(entry))


_OPERATIONS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def quad_arith(lhs, rhs, op: str) -> QuadraticNumber:
    """Apply one of add, sub, mul, div to two field elements"""
    if op not in _OPERATIONS:
        raise ValueError(f"Unknown operation {op!r}")
    return _OPERATIONS[op](QuadraticNumber.coerce(lhs), QuadraticNumber.coerce(rhs))
