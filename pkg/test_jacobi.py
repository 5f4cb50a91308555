"""Tests for Jacobi polynomials and the normalised zonal functions"""

import math
from fractions import Fraction

import pytest

from src.exceptions import InadmissibleGeometry
from src.jacobi import (
    ZERO_DEGREE,
    GeometryParams,
    Polynomial,
    jacobi_poly,
    q_at_one,
    q_ratio,
    r_at_one,
    r_sum,
    renorm_q,
)

CATALOG_GEOMETRIES = [
    GeometryParams(2, 1),
    GeometryParams(2, 2),
    GeometryParams(2, 3),
    GeometryParams(2, 7),
    GeometryParams(3, 1),
    GeometryParams(3, 2),
    GeometryParams(3, 4),
    GeometryParams(3, 8),
    GeometryParams(4, 2),
    GeometryParams(4, 4),
    GeometryParams(5, 2),
]

X = Polynomial([0, 1])


def test_polynomial_trims_and_degree():
    assert Polynomial([1, 2, 0, 0]).coefficients == (1, 2)
    assert Polynomial([0, 0]).degree == ZERO_DEGREE
    assert Polynomial([]).is_zero()
    assert (X * X - X).degree == 2


def test_polynomial_compose_and_evaluate():
    p = Polynomial([1, 0, 3])  # 3x^2 + 1
    q = p.compose(Polynomial([-1, 2]))
    assert q == Polynomial([4, -12, 12])
    assert q.evaluate(Fraction(1, 2)) == 1
    assert str(q) == "12*x^2 - 12*x + 4"


def test_geometry_classification():
    for rho, d in [(2, 1), (2, 9), (3, 8), (7, 1), (12, 4)]:
        GeometryParams(rho, d)
    for rho, d in [(4, 8), (3, 3), (5, 16), (1, 2), (3, 0)]:
        with pytest.raises(InadmissibleGeometry):
            GeometryParams(rho, d)


def test_geometry_labels():
    assert GeometryParams(2, 7).label == "Ω_8"
    assert GeometryParams(3, 8).label == "𝕆P^2"
    assert GeometryParams(4, 2).label == "ℂP^3"


def test_jacobi_small_cases():
    assert jacobi_poly(0, Fraction(1, 2), Fraction(-1, 2)) == Polynomial([1])
    assert jacobi_poly(1, 0, 0) == Polynomial([0, 1])
    # Legendre P_2 = (3y^2 - 1)/2
    assert jacobi_poly(2, 0, 0) == Polynomial([Fraction(-1, 2), 0, Fraction(3, 2)])


def test_jacobi_value_at_one():
    for alpha in (Fraction(-1, 2), 0, Fraction(5, 2), 11):
        for beta in (Fraction(-1, 2), Fraction(1, 2), 3):
            for k in range(7):
                expected = math.prod((Fraction(alpha) + 1 + i for i in range(k)), start=Fraction(1))
                assert jacobi_poly(k, alpha, beta).evaluate(1) == expected / math.factorial(k)


def test_jacobi_rejects_bad_parameters():
    with pytest.raises(ValueError):
        jacobi_poly(2, -1, 0)


def test_q_small_cases():
    for geom in CATALOG_GEOMETRIES:
        N, m = geom.n_half, geom.m_half
        assert renorm_q(0, 0, geom) == Polynomial([1])
        assert renorm_q(0, 1, geom) == Polynomial([geom.rho])
        assert renorm_q(1, 0, geom) == Polynomial([-(N + 1), (N + 1) * N / m])


def test_q2_matches_printed_form():
    for geom in CATALOG_GEOMETRIES:
        N, m = geom.n_half, geom.m_half
        bracket = Polynomial([m * (m + 1), -2 * (N + 1) * (m + 1), N * (N + 3) + 2])
        assert renorm_q(2, 0, geom) == bracket.scale(N * (N + 3) / (2 * m * (m + 1)))


def test_sphere_q1():
    assert renorm_q(1, 0, GeometryParams(2, 2)) == Polynomial([-3, 6])


def test_degrees_and_leading_coefficients():
    for geom in CATALOG_GEOMETRIES:
        for eps in (0, 1):
            for k in range(8):
                q = renorm_q(k, eps, geom)
                assert q.degree == k
                assert q.leading_coefficient != 0


def test_r_sum_small_cases_and_telescoping():
    for geom in CATALOG_GEOMETRIES:
        assert r_sum(0, 0, geom) == Polynomial([1])
        assert r_sum(0, 1, geom) == Polynomial([geom.rho])
        for s in range(1, 7):
            assert r_sum(s, 0, geom) - r_sum(s - 1, 0, geom) == renorm_q(s, 0, geom)


def test_q_at_one_examples():
    assert q_at_one(1, GeometryParams(2, 7)) == 8
    assert q_at_one(3, GeometryParams(3, 1)) == 13
    assert q_at_one(1, GeometryParams(3, 1)) == 5
    circle = GeometryParams(2, 1)
    assert all(q_at_one(i, circle) == 2 for i in range(1, 21))


def test_q_at_one_matches_polynomial():
    for geom in CATALOG_GEOMETRIES:
        for k in range(13):
            assert q_at_one(k, geom) == renorm_q(k, 0, geom).evaluate(1)


def test_r_at_one_examples():
    assert r_at_one(3, 1, GeometryParams(2, 2)) == 12
    assert r_at_one(4, 1, GeometryParams(2, 7)) == 240
    for geom in CATALOG_GEOMETRIES:
        assert r_at_one(1, 1, geom) == geom.rho


def test_r_at_one_matches_polynomial():
    for geom in CATALOG_GEOMETRIES:
        for s in range(1, 8):
            for eps in (0, 1):
                assert r_at_one(s, eps, geom) == r_sum(s - eps, eps, geom).evaluate(1)


def test_ratio_recurrence():
    for geom in CATALOG_GEOMETRIES:
        start = 1 if geom.n_half == 1 else 0
        for i in range(start, 13):
            assert q_at_one(i + 1, geom) == q_ratio(i, geom) * q_at_one(i, geom)


def test_ratio_on_real_projective_plane():
    geom = GeometryParams(3, 1)
    for i in range(1, 11):
        assert q_ratio(i, geom) == (2 * i + Fraction(5, 2)) / (2 * i + Fraction(1, 2))


def test_difference_identity():
    for geom in CATALOG_GEOMETRIES:
        N = geom.n_half
        for s in range(1, 9):
            lhs = r_at_one(s, 1, geom) - r_at_one(s - 1, 0, geom)
            assert lhs == s / (N + 2 * s - 1) * q_at_one(s, geom)
