"""Shared test corpus: 10 triangular maps (N in {1,2,3}, degrees <= 3)
with a small base point for each, used by the degree, height, and
acceptance suites."""

from fractions import Fraction

from arithdyn import triangular_map

E1 = triangular_map(["x1^3+x2", "x2^2+1"])
SECOND_CASE_MAP = triangular_map(["x1*x2+1", "x2^2"])

CORPUS = [
    triangular_map(["x1^2"]),
    triangular_map(["x1^3"]),
    E1,
    SECOND_CASE_MAP,
    triangular_map(["x1^2+x2", "x2"]),
    triangular_map(["x1^3+x2", "x2^3"]),
    triangular_map(["x1^2", "x2^3+x3", "x3^2"]),
    triangular_map(["x1^2+x3", "x2^2+x3", "x3^2"]),
    triangular_map(["x1^3", "x2^2+x3", "x3^2+1"]),
    triangular_map(["x1+x2", "x2+1"]),
]

BASE_POINTS = [
    (Fraction(2),),
    (Fraction(1, 2),),
    (Fraction(1, 256), Fraction(1, 2)),
    (Fraction(1), Fraction(1, 2)),
    (Fraction(2), Fraction(3)),
    (Fraction(1, 2), Fraction(1, 3)),
    (Fraction(2), Fraction(1, 2), Fraction(3)),
    (Fraction(1, 2), Fraction(2, 3), Fraction(3)),
    (Fraction(2), Fraction(1, 2), Fraction(1, 3)),
    (Fraction(5), Fraction(7)),
]

PRODUCT_PAIRS = [(0, 1), (2, 3), (4, 8), (5, 9), (6, 7)]
