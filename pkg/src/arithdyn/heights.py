"""Weil heights over the rationals and arithmetic-degree estimation.

The height of a projective point with coprime integer coordinates is the
natural log of the maximum absolute coordinate.  Heights are reported as
64-bit floats of logs of exact integers; every equality assertion is made on
the exact integer arguments, floats are presentation only.

The height sequence of an orbit carries, per row,

    h_n    = height of f^n(P),
    h+_n   = max(h_n, 1),
    a_n    = (h+_n)^(1/n)                 (arithmetic-degree estimate),
    khat_n = delta^(-n) * h+_n            (lower canonical-height sequence),

with the exact integer height argument kept alongside.  A positive floor on
khat_n along the whole orbit certifies that the arithmetic degree at P equals
the dynamical degree.  Finite tails are estimates: the limits themselves are
not finitely computable, so only one-sided bounds are ever asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .degrees import dynamical_degree_exact, product_map
from .maps import DEFAULT_CAPS, Orbit, ResourceCaps, TriangularMap, as_point, orbit
from .qpoly import ResourceLimitError


@dataclass(frozen=True)
class ProjectivePoint:
    """Integer homogeneous coordinates in canonical form.

    Invariants: not all zero, gcd of all coordinates 1, first nonzero
    coordinate positive.
    """

    coordinates: tuple  # tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coordinates)
        if not coords or all(c == 0 for c in coords):
            raise ValueError("projective point needs a nonzero coordinate")
        g = 0
        for c in coords:
            g = math.gcd(g, c)
        if g != 1:
            coords = tuple(c // g for c in coords)
        first = next(c for c in coords if c != 0)
        if first < 0:
            coords = tuple(-c for c in coords)
        object.__setattr__(self, "coordinates", coords)


def embed_affine(point: Sequence[Fraction]) -> ProjectivePoint:
    """Clear denominators: (x1, ..., xN) -> [L : L*x1 : ... : L*xN]."""
    point = as_point(point)
    lcm = 1
    for c in point:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    coords = [lcm] + [int(c * lcm) for c in point]
    return ProjectivePoint(tuple(coords))


@dataclass(frozen=True)
class Height:
    """log max|coordinate| with the exact integer argument preserved."""

    max_abs: int
    log: float


def weil_height(q: ProjectivePoint) -> Height:
    m = max(abs(c) for c in q.coordinates)
    return Height(max_abs=m, log=math.log(m))


def affine_height(point: Sequence[Fraction]) -> Height:
    return weil_height(embed_affine(point))


@dataclass(frozen=True)
class HeightRow:
    n: int
    height_arg: int  # exact max abs coordinate of the canonical embedding
    h: float
    h_plus: float
    root: float | None  # (h+)^(1/n), None at n = 0
    khat: float  # delta^(-n) * h+


@dataclass
class HeightSequence:
    map: TriangularMap
    start: tuple
    delta: float
    rows: list
    truncated: bool = False

    def roots(self, min_n: int = 1) -> list:
        return [row.root for row in self.rows if row.n >= min_n and row.root is not None]

    def to_csv(self) -> str:
        lines = ["n,h_exact_numerator_bits,h_float,h_plus_float,a_n,khat_n"]
        for row in self.rows:
            root = "" if row.root is None else repr(row.root)
            lines.append(
                f"{row.n},{row.height_arg.bit_length()},{row.h!r},"
                f"{row.h_plus!r},{root},{row.khat!r}"
            )
        return "\n".join(lines) + "\n"


def _height_row(n: int, point, delta: float) -> HeightRow:
    height = affine_height(point)
    h_plus = max(height.log, 1.0)
    root = math.exp(math.log(h_plus) / n) if n >= 1 else None
    khat = h_plus / delta**n
    return HeightRow(
        n=n, height_arg=height.max_abs, h=height.log, h_plus=h_plus, root=root, khat=khat
    )


def height_sequence(
    f: TriangularMap,
    start: Sequence[Fraction],
    n_max: int,
    delta: float | None = None,
    caps: ResourceCaps = DEFAULT_CAPS,
) -> HeightSequence:
    """Height rows along the exact orbit of ``start`` for n = 0..n_max.

    ``delta`` defaults to the exact dynamical degree of f; callers may
    override it for experiments.  Orbit resource overruns surface the rows
    computed so far with ``truncated=True``.
    """
    if delta is None:
        delta = dynamical_degree_exact(f)
    truncated = False
    try:
        orb = orbit(f, start, n_max, caps)
        points = orb.points
    except ResourceLimitError as err:
        truncated = True
        last_safe = err.metadata.get("last_safe_n", 0)
        points = orbit(f, start, last_safe, caps).points
    rows = [_height_row(n, p, delta) for n, p in enumerate(points)]
    return HeightSequence(
        map=f, start=as_point(start), delta=delta, rows=rows, truncated=truncated
    )


def height_sequence_of_orbit(orb: Orbit, delta: float) -> HeightSequence:
    rows = [_height_row(n, p, delta) for n, p in enumerate(orb.points)]
    return HeightSequence(map=orb.map, start=orb.start, delta=delta, rows=rows)


def alpha_bounds(seq: HeightSequence, tail: int) -> tuple:
    """(min, max) of a_n over the last ``tail`` rows with n >= 1."""
    roots = seq.roots(min_n=1)
    if len(roots) < tail:
        raise ValueError(f"need at least {tail} rows with n >= 1, have {len(roots)}")
    window = roots[-tail:]
    return (min(window), max(window))


@dataclass(frozen=True)
class ProductHeightRow:
    n: int
    arg_a: int  # exact height argument of the first factor's point
    arg_b: int
    arg_sum: int  # arg_a * arg_b: exact argument of h_a + h_b
    h_sum: float
    root: float | None  # max(h_sum, 1)^(1/n)


@dataclass
class ProductHeightReport:
    rows: list
    alpha_a: float  # last a_n of the first factor alone
    alpha_b: float
    expected_limit: float  # max(alpha_a, alpha_b)
    last_root: float
    projections_match: bool  # product orbit projects exactly onto factor orbits


def product_height_additivity(
    f_a: TriangularMap,
    p_a: Sequence[Fraction],
    f_b: TriangularMap,
    p_b: Sequence[Fraction],
    n_max: int,
    caps: ResourceCaps = DEFAULT_CAPS,
) -> ProductHeightReport:
    """Row-wise additivity of factor heights along the product orbit.

    The product height (sum of the factors' coordinate heights) has exact
    integer argument arg_a * arg_b; its n-th roots tend to the max of the
    factors' estimates because for positive sequences with n-th-root limits
    >= 1, (a_n + b_n)^(1/n) converges to the larger of the two limits.
    """
    p_a = as_point(p_a)
    p_b = as_point(p_b)
    prod = product_map(f_a, f_b)
    orb = orbit(prod, p_a + p_b, n_max, caps)
    orb_a = orbit(f_a, p_a, n_max, caps)
    orb_b = orbit(f_b, p_b, n_max, caps)

    nf = f_a.dimension
    projections_match = all(
        q[:nf] == qa and q[nf:] == qb
        for q, qa, qb in zip(orb.points, orb_a.points, orb_b.points)
    )

    rows = []
    for n, (qa, qb) in enumerate(zip(orb_a.points, orb_b.points)):
        ha = affine_height(qa)
        hb = affine_height(qb)
        h_sum = ha.log + hb.log
        root = math.exp(math.log(max(h_sum, 1.0)) / n) if n >= 1 else None
        rows.append(
            ProductHeightRow(
                n=n,
                arg_a=ha.max_abs,
                arg_b=hb.max_abs,
                arg_sum=ha.max_abs * hb.max_abs,
                h_sum=h_sum,
                root=root,
            )
        )

    seq_a = height_sequence_of_orbit(orb_a, dynamical_degree_exact(f_a))
    seq_b = height_sequence_of_orbit(orb_b, dynamical_degree_exact(f_b))
    alpha_a = seq_a.roots()[-1]
    alpha_b = seq_b.roots()[-1]
    return ProductHeightReport(
        rows=rows,
        alpha_a=alpha_a,
        alpha_b=alpha_b,
        expected_limit=max(alpha_a, alpha_b),
        last_root=rows[-1].root,
        projections_match=projections_match,
    )
