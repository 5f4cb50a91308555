"""
Design Module
Finite designs given by exact Gram matrices: validation, angle sets, strength,
annihilator and tightness.

Gram entries are g(x, y) = <x, y> in [0, 1] with g(x, x) = 1. For points u, v on a
sphere the entry is (1 + u.v)/2.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.exactnum import QuadraticNumber, is_square_free
from src.exceptions import (
    BadDiagonal,
    BoundViolation,
    DesignFormatError,
    DimensionMismatch,
    DuplicatePoint,
    EntryOutOfRange,
    InvariantViolation,
    MixedRadicands,
    NotSymmetric,
    NotUnitVector,
)
from src.jacobi import GeometryParams, Polynomial, r_at_one, r_sum, renorm_q

logger = logging.getLogger(__name__)


class DesignSource(Enum):
    SPHERE_POINTS = "points"
    GRAM_DIRECT = "gram"


@dataclass(frozen=True)
class DesignInstance:
    """A validated finite set of primitive idempotents"""

    geom: GeometryParams
    gram: Tuple[Tuple[QuadraticNumber, ...], ...]
    radicand: Optional[int] = None
    source: DesignSource = DesignSource.GRAM_DIRECT
    points: Optional[Tuple[Tuple[QuadraticNumber, ...], ...]] = None
    squared_norm: QuadraticNumber = field(default_factory=lambda: QuadraticNumber(1))
    name: Optional[str] = None

    @property
    def size(self) -> int:
        return len(self.gram)


def _coerce(value, row: int, col: int) -> QuadraticNumber:
    try:
        return QuadraticNumber.coerce(value)
    except TypeError as e:
        raise DesignFormatError(f"Entry ({row}, {col}): {e}") from e


def validate_gram(
    matrix: Sequence[Sequence],
    geom: GeometryParams,
    radicand: Optional[int] = None,
    name: Optional[str] = None,
) -> DesignInstance:
    """
    Validate a Gram matrix and wrap it as a DesignInstance

    Args:
        matrix: square matrix of exact entries (int, Fraction or QuadraticNumber)
        geom: geometry the points live in
        radicand: declared radicand; inferred from the entries when omitted
        name: optional label

    Returns:
        DesignInstance with source GRAM_DIRECT
    """
    if radicand is not None and (radicand < 2 or not is_square_free(radicand)):
        raise DesignFormatError(f"Radicand must be a square-free integer >= 2, got {radicand}")
    n = len(matrix)
    if n < 2:
        raise DesignFormatError(f"A design needs at least 2 points, got {n}")
    rows = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise DesignFormatError(f"Row {i} has {len(row)} entries, expected {n}")
        rows.append(tuple(_coerce(v, i, j) for j, v in enumerate(row)))

    found = radicand
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v.is_rational():
                continue
            if found is None:
                found = v.m
            elif v.m != found:
                raise MixedRadicands(
                    f"Entry ({i}, {j}) = {v} has radicand {v.m}, expected {found}"
                )

    for i in range(n):
        if rows[i][i] != 1:
            raise BadDiagonal(f"Diagonal entry ({i}, {i}) = {rows[i][i]}, expected 1")

    first_seen: Dict[QuadraticNumber, Tuple[int, int]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = rows[i][j]
            if v != rows[j][i]:
                raise NotSymmetric(f"Entry ({i}, {j}) = {v} differs from ({j}, {i}) = {rows[j][i]}")
            if v not in first_seen:
                first_seen[v] = (i, j)

    for v, (i, j) in first_seen.items():
        if v == 1:
            raise DuplicatePoint(f"Points {i} and {j} coincide (entry ({i}, {j}) = 1)")
        if v < 0 or v > 1:
            raise EntryOutOfRange(f"Entry ({i}, {j}) = {v} is outside [0, 1)")

    logger.debug(f"Validated {n}x{n} Gram matrix on {geom}")
    return DesignInstance(geom=geom, gram=tuple(rows), radicand=found, name=name)


def gram_from_sphere_points(
    points: Sequence[Sequence],
    geom: GeometryParams,
    radicand: Optional[int] = None,
    squared_norm=1,
    name: Optional[str] = None,
) -> DesignInstance:
    """Gram matrix (1 + u.v/r)/2 of points on the sphere of squared radius r"""
    if not geom.is_spherical:
        raise DimensionMismatch(f"Point input needs a sphere (rank 2), got {geom}")
    r = QuadraticNumber.coerce(squared_norm)
    if r <= 0:
        raise NotUnitVector(f"Squared norm must be positive, got {r}")
    dim = geom.degree + 1
    vectors = []
    for i, p in enumerate(points):
        if len(p) != dim:
            raise DimensionMismatch(f"Point {i} has {len(p)} coordinates, expected {dim}")
        vectors.append(tuple(_coerce(c, i, k) for k, c in enumerate(p)))

    def dot(u, v):
        return sum((a * b for a, b in zip(u, v)), QuadraticNumber(0))

    for i, u in enumerate(vectors):
        if dot(u, u) != r:
            raise NotUnitVector(f"Point {i} has squared norm {dot(u, u)}, expected {r}")

    half = Fraction(1, 2)
    n = len(vectors)
    gram = [[QuadraticNumber(1)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            g = (dot(vectors[i], vectors[j]) / r + 1) * half
            gram[i][j] = gram[j][i] = g
    design = validate_gram(gram, geom, radicand, name=name)
    return replace(
        design,
        source=DesignSource.SPHERE_POINTS,
        points=tuple(vectors),
        squared_norm=r,
    )


@dataclass(frozen=True)
class AngleProfile:
    """Distinct off-diagonal Gram values of a design"""

    angles: Tuple[QuadraticNumber, ...]
    pair_counts: Tuple[int, ...]
    all_rational: bool
    strength: Optional[int] = None

    @property
    def s(self) -> int:
        return len(self.angles)

    @property
    def eps(self) -> int:
        return 1 if self.angles and self.angles[0] == 0 else 0

    @property
    def multiplicities(self) -> Dict[QuadraticNumber, int]:
        return dict(zip(self.angles, self.pair_counts))


def angle_set(design: DesignInstance) -> AngleProfile:
    """Collect distinct angles (ascending) with unordered pair counts"""
    counts: Counter = Counter()
    n = design.size
    for i in range(n):
        row = design.gram[i]
        for j in range(i + 1, n):
            counts[row[j]] += 1
    angles = tuple(sorted(counts))
    profile = AngleProfile(
        angles=angles,
        pair_counts=tuple(counts[a] for a in angles),
        all_rational=all(a.is_rational() for a in angles),
    )
    logger.info(f"Angle set: s={profile.s}, eps={profile.eps}, rational={profile.all_rational}")
    return profile


def design_sum(k: int, design: DesignInstance, profile: AngleProfile):
    """Sum of Q_k^0(g(x, y)) over all ordered pairs, grouped by angle"""
    q = renorm_q(k, 0, design.geom)
    total = design.size * q.evaluate(Fraction(1))
    for angle, count in zip(profile.angles, profile.pair_counts):
        total = total + 2 * count * q.evaluate(angle)
    return total


def compute_strength(design: DesignInstance, profile: Optional[AngleProfile] = None) -> int:
    """
    Largest t with vanishing design sums for k = 1..t

    Sums are tried up to 2s - eps + 1; reaching that far contradicts the absolute
    bound and raises BoundViolation.
    """
    if profile is None:
        profile = angle_set(design)
    limit = 2 * profile.s - profile.eps + 1
    for k in range(1, limit + 1):
        if design_sum(k, design, profile) != 0:
            logger.info(f"Strength t={k - 1}")
            return k - 1
    raise BoundViolation(
        f"Design sums vanish up to k={limit}, beyond the bound 2s-eps={limit - 1}"
    )


def with_strength(design: DesignInstance, profile: AngleProfile) -> AngleProfile:
    if profile.strength is not None:
        return profile
    return replace(profile, strength=compute_strength(design, profile))


@dataclass(frozen=True)
class AnnihilatorResult:
    ann: Polynomial
    indicator: Tuple[QuadraticNumber, ...]
    target: Polynomial
    tight: bool
    eps: int


def annihilator_polynomial(design: DesignInstance, profile: AngleProfile) -> Polynomial:
    """ann(x) = |X| prod (x - a)/(1 - a) over the angle set"""
    poly = Polynomial([design.size])
    for a in profile.angles:
        poly = poly * Polynomial([-a, 1]).scale(1 / (1 - a))
    if poly.evaluate(Fraction(1)) != design.size:
        raise InvariantViolation(f"ann(1) = {poly.evaluate(Fraction(1))}, expected {design.size}")
    for a in profile.angles:
        if poly.evaluate(a) != 0:
            raise InvariantViolation(f"ann does not vanish at angle {a}")
    return poly


def indicator_coefficients(ann: Polynomial, geom: GeometryParams) -> Tuple[QuadraticNumber, ...]:
    """Coefficients a_i with ann = sum a_i Q_i^0, by back-substitution from the top"""
    if ann.is_zero():
        return ()
    remainder = ann
    coeffs: List[QuadraticNumber] = [QuadraticNumber(0)] * (ann.degree + 1)
    for i in range(ann.degree, -1, -1):
        q = renorm_q(i, 0, geom)
        a_i = QuadraticNumber.coerce(remainder.coefficient(i)) / q.leading_coefficient
        coeffs[i] = a_i
        remainder = remainder - q.scale(a_i)
    if not remainder.is_zero():
        raise InvariantViolation(f"Back-substitution left remainder {remainder}")
    return tuple(coeffs)


def tight_target(s: int, eps: int, geom: GeometryParams) -> Polynomial:
    """x^eps R_{s-eps}^eps(x), the annihilator of a tight design"""
    r = r_sum(s - eps, eps, geom)
    return r * Polynomial.monomial(1) if eps else r


def annihilator(design: DesignInstance, profile: Optional[AngleProfile] = None) -> AnnihilatorResult:
    """Annihilator, its indicator coefficients and comparison with the tight target"""
    if profile is None:
        profile = angle_set(design)
    ann = annihilator_polynomial(design, profile)
    indicator = indicator_coefficients(ann, design.geom)
    rebuilt = Polynomial()
    for i, a_i in enumerate(indicator):
        rebuilt = rebuilt + renorm_q(i, 0, design.geom).scale(a_i)
    if rebuilt != ann:
        raise InvariantViolation("Indicator coefficients do not reconstruct the annihilator")
    target = tight_target(profile.s, profile.eps, design.geom)
    return AnnihilatorResult(
        ann=ann, indicator=indicator, target=target, tight=ann == target, eps=profile.eps
    )


@dataclass(frozen=True)
class TightnessReport:
    tight: bool
    strength: int
    expected_strength: int
    cardinality: int
    expected_cardinality: Fraction
    annihilator: AnnihilatorResult

    @property
    def strength_matches(self) -> bool:
        return self.strength == self.expected_strength

    @property
    def cardinality_matches(self) -> bool:
        return self.cardinality == self.expected_cardinality

    @property
    def confirmed(self) -> bool:
        """Annihilator, strength and size all agree with a tight design"""
        return self.tight and self.strength_matches and self.cardinality_matches


def tightness_check(design: DesignInstance, profile: Optional[AngleProfile] = None) -> TightnessReport:
    """Compare the annihilator with x^eps R_{s-eps}^eps and the absolute bounds"""
    if profile is None:
        profile = angle_set(design)
    profile = with_strength(design, profile)
    result = annihilator(design, profile)
    report = TightnessReport(
        tight=result.tight,
        strength=profile.strength,
        expected_strength=2 * profile.s - profile.eps,
        cardinality=design.size,
        expected_cardinality=r_at_one(profile.s, profile.eps, design.geom),
        annihilator=result,
    )
    if report.tight and not report.strength_matches:
        logger.warning(
            f"Annihilator matches the tight target but t={report.strength}, "
            f"expected {report.expected_strength}"
        )
    logger.info(f"Tightness: {report.tight} (t={report.strength}, |X|={design.size})")
    return report


@dataclass(frozen=True)
class DesignAnalysis:
    design: DesignInstance
    profile: AngleProfile
    tightness: TightnessReport

    @property
    def annihilator(self) -> AnnihilatorResult:
        return self.tightness.annihilator


def analyze_design(design: DesignInstance) -> DesignAnalysis:
    """Angle set, strength and tightness in one pass"""
    profile = with_strength(design, angle_set(design))
    return DesignAnalysis(design=design, profile=profile, tightness=tightness_check(design, profile))
