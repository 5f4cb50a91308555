"""
Jacobi Module
Exact Jacobi polynomials and the renormalised zonal functions Q_k^eps of a
rank-rho, degree-d geometry, with closed forms for their values at 1.

N = rho*d/2 and m = d/2 throughout.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Tuple

from src.exactnum import QuadraticNumber, generalized_binomial, pochhammer
from src.exceptions import InadmissibleGeometry, InputError

logger = logging.getLogger(__name__)

ZERO_DEGREE = float("-inf")


class Polynomial:
    """Dense univariate polynomial; coefficients[i] multiplies x**i"""

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Iterable = ()):
        coeffs = [Fraction(c) if isinstance(c, int) else c for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coeffs: Tuple = tuple(coeffs)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @property
    def coefficients(self) -> Tuple:
        return self._coeffs

    @property
    def degree(self):
        """Degree; ZERO_DEGREE (-inf) for the zero polynomial"""
        return len(self._coeffs) - 1 if self._coeffs else ZERO_DEGREE

    @property
    def leading_coefficient(self):
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def coefficient(self, i: int):
        return self._coeffs[i] if 0 <= i < len(self._coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial(self.coefficient(i) + other.coefficient(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self._coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Polynomial":
        return Polynomial(c * x for x in self._coeffs)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        result = Polynomial([1])
        for _ in range(k):
            result = result * self
        return result

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """self(inner(x))"""
        result = Polynomial()
        for c in reversed(self._coeffs):
            result = result * inner + c
        return result

    def evaluate(self, x):
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    __call__ = evaluate

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self._coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(len(self._coeffs) - 1, -1, -1):
            c = self._coeffs[k]
            if c == 0:
                continue
            text = str(c)
            if isinstance(c, QuadraticNumber) and not c.is_rational():
                text = f"({text})"
            if k == 0:
                terms.append(text)
            elif k == 1:
                terms.append(f"{text}*x")
            else:
                terms.append(f"{text}*x^{k}")
        return " + ".join(terms).replace("+ -", "- ")


RationalPolynomial = Polynomial


@dataclass(frozen=True)
class GeometryParams:
    """Rank rho and degree d of the Jordan algebra modelling the space"""

    rho: int
    degree: int

    def __post_init__(self):
        rho, d = self.rho, self.degree
        if not isinstance(rho, int) or not isinstance(d, int) or rho < 2 or d < 1:
            raise InadmissibleGeometry(f"Rank must be >= 2 and degree >= 1, got ({rho}, {d})")
        if rho == 2:
            return
        if d in (1, 2, 4) or (rho, d) == (3, 8):
            return
        raise InadmissibleGeometry(
            f"No projective space with rank {rho} and degree {d}: "
            "degree must be 1, 2 or 4 (or 8 with rank 3)"
        )

    @property
    def n_half(self) -> Fraction:
        """N = rho*d/2"""
        return Fraction(self.rho * self.degree, 2)

    @property
    def m_half(self) -> Fraction:
        """m = d/2"""
        return Fraction(self.degree, 2)

    @property
    def is_spherical(self) -> bool:
        return self.rho == 2

    @property
    def is_strictly_projective(self) -> bool:
        return self.rho >= 3

    @property
    def label(self) -> str:
        if self.rho == 2:
            return f"Ω_{self.degree + 1}"
        field = {1: "ℝ", 2: "ℂ", 4: "ℍ", 8: "𝕆"}[self.degree]
        return f"{field}P^{self.rho - 1}"

    def __str__(self):
        return f"({self.rho},{self.degree}) {self.label}"


@lru_cache(maxsize=None)
def jacobi_poly(k: int, alpha: Fraction, beta: Fraction) -> Polynomial:
    """Jacobi polynomial P_k^(alpha, beta)(y) from the explicit binomial sum"""
    if k < 0:
        raise ValueError(f"Degree must be non-negative, got {k}")
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha <= -1 or beta <= -1:
        raise ValueError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    half_minus = Polynomial([Fraction(-1, 2), Fraction(1, 2)])  # (y-1)/2
    half_plus = Polynomial([Fraction(1, 2), Fraction(1, 2)])  # (y+1)/2
    total = Polynomial()
    for j in range(k + 1):
        c = generalized_binomial(k + alpha, k - j) * generalized_binomial(k + beta, j)
        if c == 0:
            continue
        total = total + (half_minus ** j * half_plus ** (k - j)).scale(c)
    return total


def _normaliser(k: int, eps: int, geom: GeometryParams) -> Fraction:
    N, m = geom.n_half, geom.m_half
    denom = N + k + eps - 1
    if k == 0 and eps == 0:
        # (N-1)/(N-1), read as 1 on the circle too
        ratio = Fraction(1)
    else:
        ratio = (N + 2 * k + eps - 1) / denom
    return ratio * pochhammer(N, k + eps) / pochhammer(m, k + eps)


@lru_cache(maxsize=None)
def renorm_q(k: int, eps: int, geom: GeometryParams) -> Polynomial:
    """Q_k^eps(x): normalised Jacobi polynomial in x on [0, 1]"""
    if k < 0 or eps not in (0, 1):
        raise ValueError(f"Need k >= 0 and eps in {{0, 1}}, got k={k}, eps={eps}")
    N, m = geom.n_half, geom.m_half
    p = jacobi_poly(k, N - m - 1, m - 1 + eps)
    logger.debug(f"Building Q_{k}^{eps} on {geom}")
    return p.compose(Polynomial([-1, 2])).scale(_normaliser(k, eps, geom))


@lru_cache(maxsize=None)
def r_sum(s: int, eps: int, geom: GeometryParams) -> Polynomial:
    """R_s^eps = sum of Q_i^eps for i = 0..s; zero polynomial for s < 0"""
    total = Polynomial()
    for i in range(s + 1):
        total = total + renorm_q(i, eps, geom)
    return total


@lru_cache(maxsize=None)
def q_at_one(i: int, geom: GeometryParams) -> Fraction:
    """Q_i^0(1) in closed form: dimension of the i-th harmonic space"""
    if i < 0:
        raise ValueError(f"Index must be non-negative, got {i}")
    if i == 0:
        return Fraction(1)
    N, m = geom.n_half, geom.m_half
    return (
        (N + 2 * i - 1) / (N + i - 1)
        * pochhammer(N, i) * pochhammer(N - m, i)
        / (pochhammer(m, i) * math.factorial(i))
    )


def r_at_one(s: int, eps: int, geom: GeometryParams) -> Fraction:
    """R_{s-eps}^eps(1): cardinality of a tight design with s angles"""
    if s < 0 or eps not in (0, 1) or s - eps < 0:
        raise ValueError(f"Need s - eps >= 0 and eps in {{0, 1}}, got s={s}, eps={eps}")
    N, m = geom.n_half, geom.m_half
    return (
        pochhammer(N, s) * pochhammer(N - m + 1, s - eps)
        / (pochhammer(m, s) * math.factorial(s - eps))
    )


def q_ratio(i: int, geom: GeometryParams) -> Fraction:
    """Q_{i+1}^0(1) / Q_i^0(1) as the product of three factors"""
    N, m = geom.n_half, geom.m_half
    if N + 2 * i - 1 == 0:
        raise InputError(f"Ratio is undefined at i={i} on {geom.label}")
    return (
        (N + 2 * i + 1) / (N + 2 * i - 1)
        * (N - m + i) / (m + i)
        * (N + i - 1) / (i + 1)
    )
