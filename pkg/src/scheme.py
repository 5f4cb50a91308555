"""
Scheme Module
Association scheme of a tight design: adjacency classes, structure constants,
the orthogonal idempotents L_0..L_s, exact ranks and the rationality verdict.

Elements of the Bose-Mesner algebra are held as coefficient vectors over the
relations (index 0 = identity, index j = j-th angle in ascending order).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.design import AngleProfile, AnnihilatorResult, DesignAnalysis, DesignInstance, angle_set
from src.exactnum import QuadraticNumber
from src.exceptions import (
    IdempotentCheckFailed,
    NonIntegralRank,
    NotTight,
    RankMismatch,
    SchemeNotClosed,
)
from src.jacobi import GeometryParams, r_sum, renorm_q
from src.rankforms import closed_form_ranks, equal_pairs

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AdjacencyDecomposition:
    """Relation index matrix of a design; D_alpha = (relation_index == j)"""

    angles: Tuple[QuadraticNumber, ...]
    relation_index: np.ndarray

    @property
    def size(self) -> int:
        return self.relation_index.shape[0]

    @property
    def values(self) -> Tuple[QuadraticNumber, ...]:
        """Gram value of each relation, identity first"""
        return (QuadraticNumber(1),) + self.angles

    @property
    def num_relations(self) -> int:
        return len(self.angles) + 1

    def relation_matrix(self, j: int) -> np.ndarray:
        return (self.relation_index == j).astype(np.int64)

    def adjacency(self, angle) -> np.ndarray:
        """0/1 matrix D_alpha of one angle"""
        return self.relation_matrix(self.angles.index(QuadraticNumber.coerce(angle)) + 1)

    @property
    def classes(self) -> dict:
        return {a: self.relation_matrix(j + 1) for j, a in enumerate(self.angles)}

    def edge_counts(self) -> List[int]:
        """Number of unordered pairs per angle"""
        return [int(np.count_nonzero(self.relation_index == j + 1)) // 2 for j in range(len(self.angles))]

    def dense(self, coefficients: Sequence) -> np.ndarray:
        """Matrix sum c_j A_j as an object array"""
        table = np.empty(len(coefficients), dtype=object)
        table[:] = list(coefficients)
        return table[self.relation_index]

    def reconstruct_gram(self) -> np.ndarray:
        return self.dense(self.values)


def adjacency_matrices(design: DesignInstance, profile: Optional[AngleProfile] = None) -> AdjacencyDecomposition:
    """Split the Gram matrix into the identity and one class per angle"""
    if profile is None:
        profile = angle_set(design)
    lookup = {a: j + 1 for j, a in enumerate(profile.angles)}
    n = design.size
    index = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        row = design.gram[i]
        for j in range(n):
            if i != j:
                index[i, j] = lookup[row[j]]
    return AdjacencyDecomposition(angles=profile.angles, relation_index=index)


def structure_constants(dec: AdjacencyDecomposition) -> Optional[np.ndarray]:
    """
    Intersection numbers p[a, b, c] with A_a A_b = sum_c p[a, b, c] A_c

    Each product is read off one representative position per relation and then
    checked on every entry. Returns None when some product leaves the span.
    """
    k = dec.num_relations
    mats = [dec.relation_matrix(j) for j in range(k)]
    reps = [tuple(np.argwhere(dec.relation_index == c)[0]) for c in range(k)]
    p = np.zeros((k, k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            prod = mats[a] @ mats[b]
            coeffs = np.array([prod[r] for r in reps], dtype=np.int64)
            if not np.array_equal(prod, coeffs[dec.relation_index]):
                logger.info(f"Product of relations {a} and {b} is not in the span of the classes")
                return None
            p[a, b] = coeffs
    return p


def scheme_axioms_check(dec: AdjacencyDecomposition) -> bool:
    """True iff every product D_a D_b is an integer combination of I and the D_c"""
    return structure_constants(dec) is not None


class BoseMesnerAlgebra:
    """Exact arithmetic on coefficient vectors via structure constants"""

    def __init__(self, dec: AdjacencyDecomposition):
        constants = structure_constants(dec)
        if constants is None:
            raise SchemeNotClosed(
                f"Adjacency classes of the {dec.size}-point design do not form an association scheme"
            )
        self.dec = dec
        self.constants = constants

    @property
    def dimension(self) -> int:
        return self.dec.num_relations

    def multiply(self, x: Sequence, y: Sequence) -> Tuple:
        k = self.dimension
        out = [QuadraticNumber(0)] * k
        for a in range(k):
            if x[a] == 0:
                continue
            for b in range(k):
                if y[b] == 0:
                    continue
                xy = x[a] * y[b]
                for c in np.flatnonzero(self.constants[a, b]):
                    out[c] = out[c] + xy * int(self.constants[a, b, c])
        return tuple(out)

    def identity(self) -> Tuple:
        return (QuadraticNumber(1),) + (QuadraticNumber(0),) * (self.dimension - 1)

    def trace(self, x: Sequence):
        """Only the identity relation has a non-zero diagonal"""
        return self.dec.size * x[0]

    def from_function(self, f) -> Tuple:
        """Element with entries f(g(x, y)) / |X|"""
        n = self.dec.size
        return tuple(QuadraticNumber.coerce(f(v)) / n for v in self.dec.values)


class Construction(Enum):
    ALL_E = "all_e"
    REPAIRED_LS = "repaired_ls"


@dataclass(frozen=True, eq=False)
class IdempotentBasis:
    algebra: BoseMesnerAlgebra
    coefficients: Tuple[Tuple, ...]
    naive_top: Tuple
    ranks: Tuple[int, ...]
    construction: Construction

    @property
    def mats(self) -> List[np.ndarray]:
        return [self.algebra.dec.dense(c) for c in self.coefficients]

    def matrix(self, i: int) -> np.ndarray:
        return self.algebra.dec.dense(self.coefficients[i])

    def traces(self) -> List:
        return [self.algebra.trace(c) for c in self.coefficients]

    def naive_top_is_idempotent(self) -> bool:
        """E_s E_s == E_s; fails for eps = 1 tight designs"""
        return self.algebra.multiply(self.naive_top, self.naive_top) == self.naive_top


def _is_zero_vector(x: Sequence) -> bool:
    return all(v == 0 for v in x)


def verify_idempotents(algebra: BoseMesnerAlgebra, coefficients: Sequence[Tuple]) -> None:
    """Orthogonality L_i L_j = delta_ij L_i and completeness sum L_i = I"""
    for i, x in enumerate(coefficients):
        for j, y in enumerate(coefficients):
            if j < i:
                continue
            prod = algebra.multiply(x, y)
            if i == j and prod != tuple(x):
                raise IdempotentCheckFailed(f"L_{i} is not idempotent")
            if i != j and not _is_zero_vector(prod):
                raise IdempotentCheckFailed(f"L_{i} L_{j} != 0")
    total = [QuadraticNumber(0)] * algebra.dimension
    for x in coefficients:
        total = [t + v for t, v in zip(total, x)]
    if tuple(total) != algebra.identity():
        raise IdempotentCheckFailed("Idempotents do not sum to the identity")


def verify_idempotents_dense(mats: Sequence[np.ndarray]) -> None:
    """Same checks with explicit exact matrix products"""
    n = mats[0].shape[0]
    zero = QuadraticNumber(0)
    for i, a in enumerate(mats):
        for j in range(i, len(mats)):
            prod = a.dot(mats[j])
            expected = a if i == j else np.full((n, n), zero, dtype=object)
            if not np.array_equal(prod, expected):
                raise IdempotentCheckFailed(f"Dense check failed for L_{i} L_{j}")
    total = sum(mats[1:], mats[0])
    eye = np.full((n, n), zero, dtype=object)
    np.fill_diagonal(eye, QuadraticNumber(1))
    if not np.array_equal(total, eye):
        raise IdempotentCheckFailed("Dense idempotents do not sum to the identity")


def build_idempotents(
    design: DesignInstance,
    ann_result: AnnihilatorResult,
    algebra: Optional[BoseMesnerAlgebra] = None,
    profile: Optional[AngleProfile] = None,
) -> IdempotentBasis:
    """
    L_i = E_i for i < s; L_s = E_s when eps = 0, otherwise the repaired
    (ann - R_{s-1}^0)/|X|.

    Raises:
        NotTight: the closed formulas only hold for tight designs
    """
    if not ann_result.tight:
        raise NotTight(
            "Idempotent formulas need a tight design: the annihilator differs from x^eps R_{s-eps}^eps"
        )
    if algebra is None:
        algebra = BoseMesnerAlgebra(adjacency_matrices(design, profile))
    geom = design.geom
    s = algebra.dimension - 1
    eps = ann_result.eps

    coefficients = [algebra.from_function(renorm_q(i, 0, geom).evaluate) for i in range(s)]
    naive_top = algebra.from_function(renorm_q(s, 0, geom).evaluate)
    if eps == 0:
        coefficients.append(naive_top)
        construction = Construction.ALL_E
    else:
        lower = r_sum(s - 1, 0, geom)
        ann = ann_result.ann
        coefficients.append(algebra.from_function(lambda v: ann.evaluate(v) - lower.evaluate(v)))
        construction = Construction.REPAIRED_LS

    verify_idempotents(algebra, coefficients)
    ranks = tuple(matrix_rank_exact(algebra.dec.dense(c)) for c in coefficients)
    logger.info(f"Built {len(coefficients)} idempotents ({construction.value}), ranks {list(ranks)}")
    return IdempotentBasis(
        algebra=algebra,
        coefficients=tuple(coefficients),
        naive_top=naive_top,
        ranks=ranks,
        construction=construction,
    )


def _integer_rank(m: np.ndarray) -> int:
    """Fraction-free (Bareiss) elimination on Python ints"""
    rows, cols = m.shape
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.flatnonzero(m[r:, c] != 0)
        if nonzero.size == 0:
            continue
        p = r + int(nonzero[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        pivot = m[r, c]
        logger.debug(f"pivot row {r} column {c}")
        if r + 1 < rows and c + 1 < cols:
            m[r + 1:, c + 1:] = (pivot * m[r + 1:, c + 1:] - np.outer(m[r + 1:, c], m[r, c + 1:])) // prev
        m[r + 1:, c] = 0
        prev = pivot
        r += 1
    return r


def _field_rank(m: np.ndarray) -> int:
    """Gaussian elimination over Q(sqrt m)"""
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.flatnonzero(m[r:, c] != 0)
        if nonzero.size == 0:
            continue
        p = r + int(nonzero[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        logger.debug(f"pivot row {r} column {c}")
        if r + 1 < rows:
            factors = m[r + 1:, c] / m[r, c]
            m[r + 1:, c:] = m[r + 1:, c:] - np.outer(factors, m[r, c:])
        r += 1
    return r


def matrix_rank_exact(mat) -> int:
    """
    Rank by exact elimination, pivoting on the first non-zero entry of each column

    Rational matrices are cleared of denominators row by row and reduced
    fraction-free; anything irrational goes through field elimination.
    """
    entries = [[QuadraticNumber.coerce(v) for v in row] for row in np.asarray(mat, dtype=object)]
    if not entries or not entries[0]:
        return 0
    if all(v.is_rational() for row in entries for v in row):
        ints = []
        for row in entries:
            scale = lcm(*(v.a.denominator for v in row))
            ints.append([int(v.a * scale) for v in row])
        m = np.empty((len(ints), len(ints[0])), dtype=object)
        m[:, :] = ints
        return _integer_rank(m)
    m = np.empty((len(entries), len(entries[0])), dtype=object)
    m[:, :] = entries
    return _field_rank(m)


@dataclass(frozen=True)
class RankTriple:
    index: int
    closed_form: Fraction
    trace: QuadraticNumber
    elimination: int


def rank_report(basis: IdempotentBasis, geom: GeometryParams, s: int, eps: int) -> List[RankTriple]:
    """Three-way rank agreement for every idempotent; RankMismatch otherwise"""
    triples = []
    for i, (closed, trace, elim) in enumerate(
        zip(closed_form_ranks(geom, s, eps), basis.traces(), basis.ranks)
    ):
        if not (trace == closed and closed == elim):
            raise RankMismatch(f"L_{i}: closed form {closed}, trace {trace}, elimination {elim}")
        if closed.denominator != 1 or closed <= 0:
            raise NonIntegralRank(f"L_{i} has rank {closed}")
        triples.append(RankTriple(index=i, closed_form=closed, trace=trace, elimination=elim))
    return triples


@dataclass(frozen=True)
class RationalityVerdict:
    ranks_distinct: bool
    collision_pairs: Tuple[Tuple[int, int], ...]
    certified_rational: bool
    observed_rational: bool
    consistent: bool
    l1_isolated: bool


def rationality_verdict(basis: IdempotentBasis, angle_profile: AngleProfile) -> RationalityVerdict:
    """Distinct ranks certify a rational angle set"""
    pairs = tuple(equal_pairs(basis.ranks))
    distinct = not pairs
    observed = angle_profile.all_rational
    return RationalityVerdict(
        ranks_distinct=distinct,
        collision_pairs=pairs,
        certified_rational=distinct,
        observed_rational=observed,
        consistent=not (distinct and not observed),
        l1_isolated=len(basis.ranks) > 1 and all(1 not in pair for pair in pairs),
    )


@dataclass(frozen=True, eq=False)
class SchemeAnalysis:
    decomposition: AdjacencyDecomposition
    closed: bool
    basis: IdempotentBasis
    dense_verified: bool
    rank_triples: List[RankTriple]
    verdict: RationalityVerdict


def analyze_scheme(analysis: DesignAnalysis, dense_check_max_points: int = 32) -> SchemeAnalysis:
    """Decomposition, idempotents, rank triples and verdict of a tight design"""
    design, profile = analysis.design, analysis.profile
    tightness = analysis.tightness
    if not tightness.confirmed:
        raise NotTight(
            f"{design.name or 'design'} is not tight: |X|={design.size} "
            f"(tight size {tightness.expected_cardinality}), t={tightness.strength} "
            f"(tight strength {tightness.expected_strength})"
        )
    dec = adjacency_matrices(design, profile)
    algebra = BoseMesnerAlgebra(dec)
    basis = build_idempotents(design, analysis.annihilator, algebra)

    dense_verified = False
    if design.size <= dense_check_max_points:
        verify_idempotents_dense(basis.mats)
        dense_verified = True
    else:
        logger.warning(
            f"Skipping dense idempotent check for {design.size} points "
            f"(limit {dense_check_max_points}); structure constants already verified"
        )

    triples = rank_report(basis, design.geom, profile.s, profile.eps)
    verdict = rationality_verdict(basis, profile)
    if not verdict.consistent:
        logger.error("Distinct ranks but irrational angles observed")
    return SchemeAnalysis(
        decomposition=dec,
        closed=True,
        basis=basis,
        dense_verified=dense_verified,
        rank_triples=triples,
        verdict=verdict,
    )
