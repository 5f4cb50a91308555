"""
Rank Forms Module
Closed-form ranks of the idempotents of tight designs, the checks built on them
and the exhaustive parameter scan.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from src.exceptions import InadmissibleGeometry, InputError, NonIntegralRank
from src.jacobi import GeometryParams, q_at_one, q_ratio, r_at_one

logger = logging.getLogger(__name__)


def closed_form_ranks(geom: GeometryParams, s: int, eps: int) -> List[Fraction]:
    """Q_i^0(1) for i < s, then R_{s-eps}^eps(1) - R_{s-1}^0(1) for L_s"""
    ranks = [q_at_one(i, geom) for i in range(s)]
    ranks.append(r_at_one(s, eps, geom) - r_at_one(s - 1, 0, geom))
    return ranks


def equal_pairs(values: Sequence) -> List[Tuple[int, int]]:
    """All index pairs (i, j), i < j, with equal values"""
    groups: Dict = defaultdict(list)
    for i, v in enumerate(values):
        groups[v].append(i)
    pairs = [
        (idx[a], idx[b])
        for idx in groups.values()
        for a in range(len(idx))
        for b in range(a + 1, len(idx))
    ]
    return sorted(pairs)


@dataclass(frozen=True)
class RankProfile:
    geom: GeometryParams
    s: int
    eps: int
    ranks: Tuple[Fraction, ...]
    collisions: Tuple[Tuple[int, int], ...]

    @property
    def integral(self) -> bool:
        """False when no tight design with these parameters can exist"""
        top = self.ranks[-1]
        return top.denominator == 1 and top > 0

    @property
    def l1_shared(self) -> bool:
        return any(1 in pair for pair in self.collisions)


def _check_lower_ranks(geom: GeometryParams, ranks: Sequence[Fraction]) -> None:
    for i, r in enumerate(ranks):
        if r.denominator != 1 or r <= 0:
            raise NonIntegralRank(f"Q_{i}(1) = {r} on {geom} is not a positive integer")


def rank_profile(geom: GeometryParams, s: int, eps: int) -> RankProfile:
    """Closed-form ranks [L_0, ..., L_s] with their collisions"""
    if s < 1 or eps not in (0, 1):
        raise InputError(f"Need s >= 1 and eps in {{0, 1}}, got s={s}, eps={eps}")
    ranks = closed_form_ranks(geom, s, eps)
    _check_lower_ranks(geom, ranks[:-1])
    profile = RankProfile(
        geom=geom,
        s=s,
        eps=eps,
        ranks=tuple(ranks),
        collisions=tuple(equal_pairs(ranks)),
    )
    if not profile.integral:
        logger.debug(f"{geom}, s={s}, eps={eps}: rank L_s = {ranks[-1]} is not integral")
    return profile


def ascending_check(geom: GeometryParams, s_max: int) -> bool:
    """
    Q_0^0(1) < Q_1^0(1) < ... < Q_{s_max}^0(1), checked by direct comparison and
    again through the three-factor ratio of consecutive values.
    """
    if geom.n_half == 1:
        raise InputError("Harmonic dimensions are constant on the circle Ω_2")
    values = [q_at_one(i, geom) for i in range(s_max + 1)]
    direct = all(a < b for a, b in zip(values, values[1:]))
    by_ratio = all(
        q_ratio(i, geom) > 1 and values[i] * q_ratio(i, geom) == values[i + 1]
        for i in range(s_max)
    )
    if direct != by_ratio:
        logger.error(f"{geom}: direct comparison and ratio recurrence disagree")
    return direct and by_ratio


def f_poly(d: int, rho: int) -> Fraction:
    """f_d(rho) = rho^2 d^2 - 2 rho d^2 - 2d - 4"""
    return Fraction(rho * rho * d * d - 2 * rho * d * d - 2 * d - 4)


def special_case_31() -> Fraction:
    """(3/(N+5)) Q_3^0(1) - Q_1^0(1) on the real projective plane; equals 1"""
    geom = GeometryParams(3, 1)
    return 3 / (geom.n_half + 5) * q_at_one(3, geom) - q_at_one(1, geom)


def sphere_top_rank(d: int, s: int) -> int:
    """rank L_s = binom(d+s-2, s-1) for an eps = 1 tight design on a sphere"""
    return math.comb(d + s - 2, s - 1)


def projective_gap_bound(geom: GeometryParams) -> Fraction:
    """(2/(N+3)) Q_2^0(1) - Q_1^0(1): lower bound for rank L_s - rank L_1, s >= 2"""
    return 2 / (geom.n_half + 3) * q_at_one(2, geom) - q_at_one(1, geom)


def projective_gap_closed_form(geom: GeometryParams) -> Fraction:
    """Same bound written through f_d(rho)"""
    return Fraction(geom.rho - 1, geom.degree + 2) / 2 * f_poly(geom.degree, geom.rho)


def top_rank_difference_holds(geom: GeometryParams, s: int) -> bool:
    """R_{s-1}^1(1) - R_{s-1}^0(1) == (s/(N+2s-1)) Q_s^0(1)"""
    lhs = r_at_one(s, 1, geom) - r_at_one(s - 1, 0, geom)
    return lhs == s / (geom.n_half + 2 * s - 1) * q_at_one(s, geom)


def top_rank_monotone(geom: GeometryParams, s_max: int) -> bool:
    """s Q_s^0(1)/(N+2s-1) grows with s (constant on the circle)"""
    values = [
        s * q_at_one(s, geom) / (geom.n_half + 2 * s - 1) for s in range(1, s_max + 1)
    ]
    if geom.n_half == 1:
        return all(a == b for a, b in zip(values, values[1:]))
    return all(a < b for a, b in zip(values, values[1:]))


def admissible_geometries(
    degrees: Iterable[int], rho_max: int, include_octonion_plane: bool = True
) -> List[GeometryParams]:
    """Every (rho, d) with rho <= rho_max allowed by the Jordan classification"""
    found = set()
    for d in degrees:
        for rho in range(2, rho_max + 1):
            try:
                found.add(GeometryParams(rho, d))
            except InadmissibleGeometry:
                continue
    if include_octonion_plane and rho_max >= 3:
        found.add(GeometryParams(3, 8))
    return sorted(found, key=lambda g: (g.rho, g.degree))


def is_theorem_exception(rho: int, d: int, s: int, eps: int) -> bool:
    """Cells where the rank criterion cannot force rational angles"""
    if (rho, d) == (2, 1):
        return 2 * s - eps >= 4
    return (rho, d, s, eps) == (2, 2, 3, 1)


@dataclass(frozen=True)
class ScanCell:
    rho: int
    degree: int
    s: int
    eps: int
    top_rank: Fraction
    collisions: Tuple[Tuple[int, int], ...]

    @property
    def integral(self) -> bool:
        return self.top_rank.denominator == 1 and self.top_rank > 0

    @property
    def is_exception(self) -> bool:
        """L_1 shares its rank; the 1-design cell (s, eps) = (1, 1) is rational by construction"""
        if (self.s, self.eps) == (1, 1):
            return False
        return any(1 in pair for pair in self.collisions)

    @property
    def key(self) -> Tuple[int, int, int, int]:
        return (self.rho, self.degree, self.s, self.eps)


@dataclass
class ScanResult:
    cells: List[ScanCell]
    geometries: List[GeometryParams]
    s_max: int
    monotone: Dict[GeometryParams, bool] = field(default_factory=dict)

    @property
    def exceptions_found(self) -> List[Tuple[int, int, int, int]]:
        return [c.key for c in self.cells if c.is_exception]

    @property
    def expected_exceptions(self) -> List[Tuple[int, int, int, int]]:
        return [c.key for c in self.cells if is_theorem_exception(*c.key)]

    @property
    def matches_theorem(self) -> bool:
        return self.exceptions_found == self.expected_exceptions


def _scan_geometry(geom: GeometryParams, s_max: int) -> List[ScanCell]:
    lower = [q_at_one(i, geom) for i in range(s_max)]
    _check_lower_ranks(geom, lower)
    cells = []
    for s in range(1, s_max + 1):
        for eps in (0, 1):
            ranks = lower[:s] + [r_at_one(s, eps, geom) - r_at_one(s - 1, 0, geom)]
            cells.append(
                ScanCell(
                    rho=geom.rho,
                    degree=geom.degree,
                    s=s,
                    eps=eps,
                    top_rank=ranks[-1],
                    collisions=tuple(equal_pairs(ranks)),
                )
            )
    return cells


def scan_collisions(
    d_set: Iterable[int],
    rho_max: int,
    s_max: int,
    include_octonion_plane: bool = True,
) -> ScanResult:
    """Rank profiles of every admissible cell, in (rho, d, s, eps) order"""
    if rho_max < 2 or s_max < 1:
        raise InputError(f"Need rho_max >= 2 and s_max >= 1, got {rho_max}, {s_max}")
    geometries = admissible_geometries(d_set, rho_max, include_octonion_plane)
    logger.info(f"Scanning {len(geometries)} geometries up to s={s_max}")
    cells: List[ScanCell] = []
    monotone: Dict[GeometryParams, bool] = {}
    for geom in geometries:
        cells.extend(_scan_geometry(geom, s_max))
        monotone[geom] = top_rank_monotone(geom, s_max)
    result = ScanResult(cells=cells, geometries=geometries, s_max=s_max, monotone=monotone)
    logger.info(
        f"Scan done: {len(cells)} cells, {len(result.exceptions_found)} exceptions, "
        f"matches theorem: {result.matches_theorem}"
    )
    return result
