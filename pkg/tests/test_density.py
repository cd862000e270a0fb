import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithdyn.density import (
    DuplicatePointsError,
    bareiss_rank,
    density_check,
    evaluate_monomial,
    kernel_vector,
    monomials_up_to_degree,
    rational_rref,
)
from arithdyn.maps import orbit, triangular_map


def test_monomials_counts():
    # C(N+d, d) monomials of total degree <= d
    assert len(monomials_up_to_degree(1, 2)) == 3
    assert len(monomials_up_to_degree(2, 2)) == 6
    assert len(monomials_up_to_degree(3, 2)) == 10


def test_monomials_ordering():
    monos = monomials_up_to_degree(2, 2)
    assert monos[0] == (0, 0)
    degrees = [sum(m) for m in monos]
    assert degrees == sorted(degrees)


def test_evaluate_monomial():
    assert evaluate_monomial((2, 1), [Fraction(1, 2), 3]) == Fraction(3, 4)
    assert evaluate_monomial((0, 0), [7, 7]) == 1


def test_bareiss_rank_hand_cases():
    assert bareiss_rank([[1, 2], [2, 4]]) == 1
    assert bareiss_rank([[1, 0], [0, 1]]) == 2
    assert bareiss_rank([[0, 0], [0, 0]]) == 0
    # 3x3 with one dependent row
    assert bareiss_rank([[1, 2, 3], [4, 5, 6], [5, 7, 9]]) == 2


def test_rational_rref_agrees_with_bareiss():
    rows = [[Fraction(1), Fraction(2)], [Fraction(1, 3), Fraction(2, 3)]]
    rank, _, _ = rational_rref(rows)
    assert rank == bareiss_rank([[3, 6], [1, 2]]) == 1


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-9, 9), min_size=3, max_size=3),
        min_size=1,
        max_size=4,
    )
)
def test_rank_cross_check(rows):
    rank = bareiss_rank(rows)
    frac_rows = [[Fraction(x) for x in row] for row in rows]
    assert rational_rref(frac_rows)[0] == rank
    assert rank <= min(len(rows), 3)


def test_three_generic_points_degree_two_rank_three():
    # three distinct points on the line impose independent conditions up to
    # the number of points
    report = density_check([[1, 1], [2, 4], [3, 9]], 2)
    assert report.rank == 3
    assert report.verdict == "inconclusive"  # 3 points vs 6 monomials


def test_parabola_kernel_witness():
    # six points on x2 = x1^2: the evaluation matrix must have a kernel and
    # the witness must actually vanish at every input point
    points = [[Fraction(t, 2), Fraction(t, 2) ** 2] for t in range(6)]
    report = density_check(points, 2)
    assert report.verdict == "vanishing_polynomial"
    assert report.kernel is not None
    for p in points:
        value = sum(
            c * evaluate_monomial(mono, p)
            for c, mono in zip(report.kernel, report.monomials)
        )
        assert value == 0
    # the witness is supported on {1, x1^2, x2} compatible with x2 - x1^2
    support = {m for c, m in zip(report.kernel, report.monomials) if c != 0}
    assert support <= {(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}


def test_dense_verdict_on_generic_grid():
    points = [[Fraction(a), Fraction(b)] for a, b in itertools.product(range(3), range(3))]
    report = density_check(points, 2)
    assert report.rank == 6
    assert report.dense
    assert report.verdict == "no_common_hypersurface"


def test_verdict_invariant_under_permutation():
    points = [[Fraction(a), Fraction(b)] for a, b in itertools.product(range(3), range(3))]
    report = density_check(points, 2)
    shuffled = density_check(list(reversed(points)), 2)
    assert (report.rank, report.verdict) == (shuffled.rank, shuffled.verdict)


def test_duplicate_points_rejected():
    with pytest.raises(DuplicatePointsError):
        density_check([[1, 2], [1, 2]], 2)


def test_degree_bound_validated():
    with pytest.raises(ValueError):
        density_check([[1, 2]], 0)


def test_kernel_vector_none_for_full_rank():
    rows = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    assert kernel_vector(rows) is None


def test_orbit_points_fill_degree_two_space():
    # orbit prefixes of the reference map avoid every conic once enough
    # distinct points accumulate
    f = triangular_map(["x1^3+x2", "x2^2+1"])
    points = []
    for start in ([Fraction(1, 256), Fraction(1, 2)], [Fraction(1, 512), Fraction(3, 2)]):
        points.extend(orbit(f, start, 3).points)
    report = density_check(points, 2)
    assert report.point_count == 8
    assert report.dense
