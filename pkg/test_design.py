"""Tests for Gram validation, angle sets, strength and tightness"""

import random
from fractions import Fraction

import pytest

from src.catalog import icosahedron, polygon, simplex
from src.design import (
    DesignSource,
    analyze_design,
    angle_set,
    annihilator,
    compute_strength,
    gram_from_sphere_points,
    tight_target,
    tightness_check,
    validate_gram,
)
from src.exactnum import QuadraticNumber
from src.exceptions import (
    BadDiagonal,
    BoundViolation,
    DesignFormatError,
    DimensionMismatch,
    DuplicatePoint,
    EntryOutOfRange,
    MixedRadicands,
    NotSymmetric,
    NotUnitVector,
)
from src.jacobi import GeometryParams, Polynomial, renorm_q

CIRCLE = GeometryParams(2, 1)
HALF = Fraction(1, 2)


def _drop_first_point(design):
    gram = [row[1:] for row in design.gram[1:]]
    return validate_gram(gram, design.geom, design.radicand)


def test_validation_names_the_entry():
    with pytest.raises(BadDiagonal, match=r"\(1, 1\)"):
        validate_gram([[1, 0], [0, 2]], CIRCLE)
    with pytest.raises(NotSymmetric, match=r"\(0, 1\)"):
        validate_gram([[1, HALF, 0], [Fraction(1, 3), 1, 0], [0, 0, 1]], CIRCLE)
    with pytest.raises(EntryOutOfRange, match=r"\(0, 1\)"):
        validate_gram([[1, Fraction(3, 2)], [Fraction(3, 2), 1]], CIRCLE)
    with pytest.raises(EntryOutOfRange, match=r"\(1, 2\)"):
        validate_gram([[1, 0, 0], [0, 1, -HALF], [0, -HALF, 1]], CIRCLE)
    with pytest.raises(DuplicatePoint, match="Points 0 and 1"):
        validate_gram([[1, 1], [1, 1]], CIRCLE)


def test_validation_shape_and_entries():
    with pytest.raises(DesignFormatError):
        validate_gram([[1]], CIRCLE)
    with pytest.raises(DesignFormatError, match="Row 1"):
        validate_gram([[1, 0], [0]], CIRCLE)
    with pytest.raises(DesignFormatError, match=r"\(0, 1\)"):
        validate_gram([[1, "1/2"], ["1/2", 1]], CIRCLE)


def test_mixed_radicands_in_gram():
    a = QuadraticNumber(0, HALF, 2)
    b = QuadraticNumber(0, HALF, 3)
    gram = [[1, a, a], [a, 1, b], [a, b, 1]]
    with pytest.raises(MixedRadicands, match=r"\(1, 2\)"):
        validate_gram(gram, CIRCLE)
    with pytest.raises(MixedRadicands):
        validate_gram([[1, a], [a, 1]], CIRCLE, radicand=3)


def test_sphere_point_input():
    design = gram_from_sphere_points([[1, 0], [0, 1], [-1, 0], [0, -1]], CIRCLE)
    assert design.source is DesignSource.SPHERE_POINTS
    assert design.gram[0][1] == HALF
    assert design.gram[0][2] == 0
    with pytest.raises(NotUnitVector, match="Point 1"):
        gram_from_sphere_points([[1, 0], [1, 1]], CIRCLE)
    with pytest.raises(DimensionMismatch):
        gram_from_sphere_points([[1, 0, 0], [0, 1, 0]], CIRCLE)
    with pytest.raises(DimensionMismatch):
        gram_from_sphere_points([[1, 0], [0, 1]], GeometryParams(3, 1))


def test_hexagon_angle_set():
    profile = angle_set(polygon(6).design)
    assert profile.angles == (0, Fraction(1, 4), Fraction(3, 4))
    assert profile.pair_counts == (3, 6, 6)
    assert (profile.s, profile.eps) == (3, 1)
    assert profile.all_rational
    assert profile.multiplicities[Fraction(1, 4)] == 6


def test_pentagon_angle_set_is_irrational():
    design = polygon(5).design
    profile = angle_set(design)
    low = QuadraticNumber(Fraction(3, 8), Fraction(-1, 8), 5)
    high = QuadraticNumber(Fraction(3, 8), Fraction(1, 8), 5)
    assert profile.angles == (low, high)
    assert profile.pair_counts == (5, 5)
    assert not profile.all_rational
    assert design.radicand == 5


def test_strength_of_polygons():
    assert compute_strength(polygon(6).design) == 5
    assert compute_strength(polygon(5).design) == 4
    assert compute_strength(polygon(3).design) == 2


def test_icosahedron_strength_and_angles():
    design = icosahedron().design
    profile = angle_set(design)
    assert profile.angles[0] == 0
    assert profile.angles[2] == QuadraticNumber(HALF, Fraction(1, 10), 5)
    assert profile.pair_counts == (6, 30, 30)
    assert compute_strength(design, profile) == 5


def _shuffled(design, rng):
    order = list(range(design.size))
    rng.shuffle(order)
    gram = [[design.gram[i][j] for j in order] for i in order]
    return validate_gram(gram, design.geom, design.radicand)


def test_permutation_invariance():
    rng = random.Random(7)
    base = icosahedron().design
    reference = analyze_design(base)
    for _ in range(20):
        shuffled = analyze_design(_shuffled(base, rng))
        assert shuffled.profile.angles == reference.profile.angles
        assert shuffled.profile.pair_counts == reference.profile.pair_counts
        assert shuffled.profile.strength == reference.profile.strength
        assert shuffled.annihilator.ann == reference.annihilator.ann


def test_hexagon_annihilator():
    result = annihilator(polygon(6).design)
    assert result.ann == Polynomial([0, 6, -32, 32])
    assert result.target == tight_target(3, 1, CIRCLE)
    assert result.tight
    assert result.eps == 1


def test_indicator_reconstructs_annihilator():
    for entry in (polygon(5), polygon(8), icosahedron(), simplex(4)):
        design = entry.design
        result = annihilator(design)
        rebuilt = Polynomial()
        for i, a_i in enumerate(result.indicator):
            rebuilt = rebuilt + renorm_q(i, 0, design.geom).scale(a_i)
        assert rebuilt == result.ann
        assert result.indicator[0] == 1


def test_tightness_of_icosahedron():
    report = tightness_check(icosahedron().design)
    assert report.tight
    assert report.strength == report.expected_strength == 5
    assert report.cardinality == report.expected_cardinality == 12


def test_icosahedron_minus_a_vertex():
    design = _drop_first_point(icosahedron().design)
    analysis = analyze_design(design)
    assert design.size == 11
    assert analysis.profile.s == 3
    assert analysis.profile.strength == 0
    assert not analysis.tightness.tight
    assert analysis.tightness.expected_cardinality == 12


def test_pentagon_does_not_exceed_bound():
    analysis = analyze_design(polygon(5).design)
    assert analysis.profile.strength == 4
    assert analysis.tightness.tight
    assert analysis.tightness.confirmed
    assert analysis.tightness.strength_matches


def _pentagon_angles_on_a_path():
    # larger angle on the 4-edge path 0-1-2-3-4 instead of the 5-cycle
    near = QuadraticNumber(Fraction(3, 8), Fraction(1, 8), 5)
    far = QuadraticNumber(Fraction(3, 8), Fraction(-1, 8), 5)
    gram = [[QuadraticNumber(1) if i == j else far for j in range(5)] for i in range(5)]
    for i in range(4):
        gram[i][i + 1] = gram[i + 1][i] = near
    return gram


def test_tight_annihilator_with_wrong_pair_pattern():
    design = validate_gram(_pentagon_angles_on_a_path(), CIRCLE)
    analysis = analyze_design(design)
    report = analysis.tightness
    assert analysis.profile.pair_counts == (6, 4)
    assert report.tight
    assert report.annihilator.ann == analyze_design(polygon(5).design).annihilator.ann
    assert report.strength == 0
    assert not report.strength_matches
    assert report.cardinality_matches
    assert not report.confirmed


def test_declared_radicand_must_be_square_free():
    with pytest.raises(DesignFormatError, match="square-free"):
        validate_gram([[1, HALF], [HALF, 1]], CIRCLE, radicand=4)
    with pytest.raises(DesignFormatError, match="square-free"):
        validate_gram([[1, HALF], [HALF, 1]], CIRCLE, radicand=1)


def test_strength_search_stops_at_bound(monkeypatch):
    monkeypatch.setattr("src.design.design_sum", lambda k, design, profile: 0)
    with pytest.raises(BoundViolation, match="2s-eps=4"):
        compute_strength(polygon(5).design)
