"""
Catalog Module
Known tight designs with their expected analysis results.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List

import numpy as np

from src.design import DesignInstance, gram_from_sphere_points, validate_gram
from src.exactnum import QuadraticNumber
from src.exceptions import InputError, UnsupportedPolygon
from src.jacobi import GeometryParams

logger = logging.getLogger(__name__)

POLYGON_SIZES = (3, 4, 5, 6, 8, 10, 12)

_POLYGON_RADICAND = {5: 5, 10: 5, 8: 2, 12: 3}


@dataclass(frozen=True)
class ExpectedAnalysis:
    strength: int
    s: int
    eps: int
    size: int
    rational: bool
    certified: bool
    tight: bool = True


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    design: DesignInstance
    expected: ExpectedAnalysis


def _cos_table():
    # cos(2 pi r) for r in [0, 1/4]
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    return {
        Fraction(0): QuadraticNumber(1),
        Fraction(1, 12): QuadraticNumber(0, half, 3),
        Fraction(1, 10): QuadraticNumber(quarter, quarter, 5),
        Fraction(1, 8): QuadraticNumber(0, half, 2),
        Fraction(1, 6): QuadraticNumber(half),
        Fraction(1, 5): QuadraticNumber(-quarter, quarter, 5),
        Fraction(1, 4): QuadraticNumber(0),
    }


_COS = _cos_table()


def exact_cos_turn(k: int, n: int) -> QuadraticNumber:
    """cos(2 pi k / n) for the supported polygon orders"""
    r = Fraction(k, n) % 1
    if r > Fraction(1, 2):
        r = 1 - r
    if r > Fraction(1, 4):
        return -_COS[Fraction(1, 2) - r]
    return _COS[r]


def polygon(n: int) -> CatalogEntry:
    """Regular n-gon on the circle, built as an exact Gram matrix"""
    if n not in POLYGON_SIZES:
        raise UnsupportedPolygon(
            f"Polygon order {n} needs coordinates outside a quadratic field; "
            f"supported orders are {', '.join(map(str, POLYGON_SIZES))}"
        )
    half = Fraction(1, 2)
    cosines = [exact_cos_turn(k, n) for k in range(n)]
    gram = [[(1 + cosines[(j - i) % n]) * half for j in range(n)] for i in range(n)]
    design = validate_gram(gram, GeometryParams(2, 1), _POLYGON_RADICAND.get(n), name=f"polygon-{n}")
    return CatalogEntry(
        name=f"polygon-{n}",
        design=design,
        expected=ExpectedAnalysis(
            strength=n - 1,
            s=n // 2,
            eps=1 if n % 2 == 0 else 0,
            size=n,
            rational=n in (3, 4, 6),
            certified=n == 3,
        ),
    )


def simplex(n: int) -> CatalogEntry:
    """n+1 unit vectors in R^n with pairwise inner product -1/n"""
    if n < 2:
        raise InputError(f"Simplex needs n >= 2, got {n}")
    off = Fraction(n - 1, 2 * n)
    gram = [[1 if i == j else off for j in range(n + 1)] for i in range(n + 1)]
    design = validate_gram(gram, GeometryParams(2, n - 1), name=f"simplex-{n}")
    return CatalogEntry(
        name=f"simplex-{n}",
        design=design,
        expected=ExpectedAnalysis(strength=2, s=1, eps=0, size=n + 1, rational=True, certified=True),
    )


def cross_polytope(n: int) -> CatalogEntry:
    """The 2n vectors +-e_i in R^n"""
    if n < 2:
        raise InputError(f"Cross-polytope needs n >= 2, got {n}")
    points = []
    for i in range(n):
        for sign in (1, -1):
            v = [0] * n
            v[i] = sign
            points.append(v)
    design = gram_from_sphere_points(points, GeometryParams(2, n - 1), name=f"cross-polytope-{n}")
    return CatalogEntry(
        name=f"cross-polytope-{n}",
        design=design,
        expected=ExpectedAnalysis(strength=3, s=2, eps=1, size=2 * n, rational=True, certified=n >= 3),
    )


def icosahedron() -> CatalogEntry:
    """Cyclic permutations of (0, +-1, +-phi) on the sphere of squared radius phi + 2"""
    phi = QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)
    points = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        base = [QuadraticNumber(0), QuadraticNumber(s1), s2 * phi]
        for shift in range(3):
            points.append(base[shift:] + base[:shift])
    design = gram_from_sphere_points(
        points, GeometryParams(2, 2), radicand=5, squared_norm=phi + 2, name="icosahedron"
    )
    return CatalogEntry(
        name="icosahedron",
        design=design,
        expected=ExpectedAnalysis(strength=5, s=3, eps=1, size=12, rational=False, certified=False),
    )


def e8_root_vectors() -> np.ndarray:
    """The 240 roots of E8 scaled by 2, as integer rows"""
    roots = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            roots.append(v)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(list(signs))
    return np.array(roots, dtype=np.int64)


def e8_roots() -> CatalogEntry:
    """240 roots of E8 on the unit sphere of R^8"""
    roots = e8_root_vectors()
    # rows have squared length 8, so the inner product of unit vectors is P / 8
    products = roots @ roots.T
    values: Dict[int, QuadraticNumber] = {}
    gram = []
    for row in products:
        out = []
        for p in row:
            p = int(p)
            if p not in values:
                values[p] = QuadraticNumber(Fraction(8 + p, 16))
            out.append(values[p])
        gram.append(out)
    design = validate_gram(gram, GeometryParams(2, 7), name="e8")
    return CatalogEntry(
        name="e8",
        design=design,
        expected=ExpectedAnalysis(strength=7, s=4, eps=1, size=240, rational=True, certified=True),
    )


def jordan_frame(geom: GeometryParams) -> CatalogEntry:
    """rho mutually orthogonal primitive idempotents"""
    rho = geom.rho
    gram = [[1 if i == j else 0 for j in range(rho)] for i in range(rho)]
    name = f"jordan-frame-{rho}-{geom.degree}"
    design = validate_gram(gram, geom, name=name)
    return CatalogEntry(
        name=name,
        design=design,
        expected=ExpectedAnalysis(strength=1, s=1, eps=1, size=rho, rational=True, certified=rho >= 3),
    )


def sic_gram(rho: int) -> CatalogEntry:
    """rho^2 equiangular lines in C^rho, Gram entries 1/(rho+1)"""
    geom = GeometryParams(rho, 2)
    size = rho * rho
    off = Fraction(1, rho + 1)
    gram = [[1 if i == j else off for j in range(size)] for i in range(size)]
    design = validate_gram(gram, geom, name=f"sic-{rho}")
    return CatalogEntry(
        name=f"sic-{rho}",
        design=design,
        expected=ExpectedAnalysis(strength=2, s=1, eps=0, size=size, rational=True, certified=True),
    )


_NAME_PATTERNS = [
    (re.compile(r"polygon-(\d+)"), lambda g: polygon(int(g[0]))),
    (re.compile(r"simplex-(\d+)"), lambda g: simplex(int(g[0]))),
    (re.compile(r"cross-polytope-(\d+)"), lambda g: cross_polytope(int(g[0]))),
    (re.compile(r"icosahedron"), lambda g: icosahedron()),
    (re.compile(r"e8"), lambda g: e8_roots()),
    (re.compile(r"jordan-frame-(\d+)-(\d+)"), lambda g: jordan_frame(GeometryParams(int(g[0]), int(g[1])))),
    (re.compile(r"sic-(\d+)"), lambda g: sic_gram(int(g[0]))),
]

CATALOG_NAMES = (
    "polygon-N",
    "simplex-N",
    "cross-polytope-N",
    "icosahedron",
    "e8",
    "jordan-frame-RHO-D",
    "sic-RHO",
)


def by_name(name: str) -> CatalogEntry:
    """Look up an entry such as 'polygon-5' or 'jordan-frame-3-8'"""
    for pattern, build in _NAME_PATTERNS:
        match = pattern.fullmatch(name.strip().lower())
        if match:
            entry = build(match.groups())
            logger.info(f"Built catalog entry {entry.name} ({entry.design.size} points)")
            return entry
    raise InputError(f"Unknown catalog entry {name!r}; known forms: {', '.join(CATALOG_NAMES)}")


JORDAN_FRAME_GEOMETRIES = ((2, 1), (3, 1), (3, 2), (3, 4), (3, 8), (5, 2), (4, 4))


def standard_entries(include_e8: bool = True) -> List[CatalogEntry]:
    """The fixture set exercised by the test-suite and run_analysis.sh"""
    entries = [polygon(n) for n in POLYGON_SIZES]
    entries += [simplex(n) for n in range(2, 11)]
    entries += [cross_polytope(n) for n in range(2, 11)]
    entries.append(icosahedron())
    entries += [jordan_frame(GeometryParams(r, d)) for r, d in JORDAN_FRAME_GEOMETRIES]
    entries += [sic_gram(r) for r in (2, 3, 4)]
    if include_e8:
        entries.append(e8_roots())
    return entries
