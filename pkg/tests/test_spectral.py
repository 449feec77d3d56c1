from fractions import Fraction

import pytest
from sympy import Matrix

from conftest import make_family
from novikov_numbers import spectral
from novikov_numbers.algebra import LaurentMatrix, LaurentPoly
from novikov_numbers.errors import (
    FlatnessViolationError,
    MalformedInputError,
    PageConsistencyError,
    TruncationInsufficientError,
)
from novikov_numbers.spectral import (
    cycle_space,
    differentials_square_to_zero,
    first_differential_check,
    limit_page,
    linearize,
    page,
    page_bound,
    page_homology,
    zero_family,
)
from novikov_numbers.twisted import TwistedComplex, novikov_numbers


def s_squared_family(exact):
    """D(s) = s^2 between two rank-one cochain groups."""
    return make_family([1, 1], {(0, 2): [[1]]}, order=2, exact=exact)


def test_cycle_space_examples():
    f = make_family([1, 1], {(0, 1): [[1]]}, order=1)
    assert len(cycle_space(f, 0, 0)) == 1
    assert len(cycle_space(f, 0, 1)) == 1
    z2 = cycle_space(f, 0, 2)
    # f_0 must vanish, f_1 is free
    assert len(z2) == 1
    assert z2[0][0, 0] == 0 and z2[0][1, 0] != 0


@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_zero_family_cycle_spaces_are_everything(r):
    f = zero_family([1, 2, 1])
    for p, c in enumerate((1, 2, 1)):
        assert len(cycle_space(f, p, r)) == max(r, 1) * c


def test_circle_pages(families):
    f = families["circle_linear_family"]
    first = page(f, 1)
    assert first.dims == (1, 1)
    assert first.differentials[0] == Matrix([[1]])
    assert page(f, 2).dims == (0, 0)
    result = limit_page(f)
    assert result.dims == (0, 0)
    assert result.stabilized


def test_zero_family_pages_are_constant(families):
    f = families["zero_family"]
    for r in range(1, 4):
        assert page(f, r).dims == (1, 2, 1)
    result = limit_page(f)
    assert result.dims == (1, 2, 1)
    assert result.stabilized
    assert result.stable_from == 1


def test_torus_family_collapses_after_first_page(families):
    f = families["torus_linear_family"]
    first = page(f, 1)
    assert first.dims == (1, 2, 1)
    assert differentials_square_to_zero(first)
    assert page_homology(first) == (0, 0, 0)
    assert limit_page(f).dims == (0, 0, 0)


def test_invertible_base_differential_kills_the_first_page():
    f = make_family([1, 1], {(0, 0): [[1]]}, order=0, exact=True)
    assert page(f, 1).dims == (0, 0)
    result = limit_page(f)
    assert result.dims == (0, 0)
    assert result.stabilized


def test_higher_differential_of_s_squared():
    f = s_squared_family(exact=True)
    assert page(f, 1).dims == (1, 1)
    second = page(f, 2)
    assert second.dims == (1, 1)
    assert second.differentials[0] == Matrix([[1]])
    assert page(f, 3).dims == (0, 0)
    assert limit_page(f).stabilized


def test_truncated_family_reports_insufficient_order():
    f = s_squared_family(exact=False)
    assert page(f, 2).dims == (1, 1)
    with pytest.raises(TruncationInsufficientError) as info:
        page(f, 3)
    assert info.value.order == 2
    with pytest.raises(TruncationInsufficientError):
        cycle_space(f, 0, 4)
    # d_2 is still nonzero on the last computable page
    result = limit_page(f)
    assert not result.stabilized
    assert result.dims == (1, 1)


def test_flatness_is_checked_through_twice_the_order():
    coeffs = {(0, 1): [[1]], (1, 1): [[1]]}
    make_family([1, 1, 1], coeffs, order=1, exact=False)
    with pytest.raises(FlatnessViolationError) as info:
        make_family([1, 1, 1], coeffs, order=1, exact=True)
    assert info.value.order == 2
    with pytest.raises(FlatnessViolationError):
        make_family([1, 1, 1], {(0, 0): [[1]], (1, 0): [[1]]}, order=0)


def test_page_index_starts_at_one(families):
    with pytest.raises(MalformedInputError):
        page(families["zero_family"], 0)


def test_page_bound():
    assert page_bound(s_squared_family(exact=True)) == 3
    assert page_bound(s_squared_family(exact=False)) == 2
    assert page_bound(zero_family([1, 2, 1])) == 3


@pytest.mark.parametrize("name", ["circle_linear_family", "torus_linear_family", "zero_family"])
def test_pages_shrink_and_follow_homology(families, name):
    f = families[name]
    pages = [page(f, r) for r in range(1, page_bound(f) + 1)]
    for current, following in zip(pages, pages[1:]):
        assert all(b <= a for a, b in zip(current.dims, following.dims))
        assert page_homology(current) == following.dims
        assert differentials_square_to_zero(current)


@pytest.mark.parametrize("name", ["circle_linear_family", "torus_linear_family", "zero_family"])
def test_first_differential_is_induced_by_d1(families, name):
    assert first_differential_check(families[name])


@pytest.mark.parametrize(
    "name, point",
    [
        ("circle_xi1", ("1",)),
        ("circle_xi1", ("2",)),
        ("torus_xi10", ("1",)),
        ("klein_like", ("1",)),
        ("klein_like", ("-1",)),
        ("alexander_trefoil_companion", ("1",)),
    ],
)
def test_limit_of_linearization_is_novikov_numbers(complexes, name, point):
    c = complexes[name]
    f = linearize(c, point)
    assert f.exact
    result = limit_page(f)
    assert result.stabilized
    assert result.dims == novikov_numbers(c)
    assert first_differential_check(f)


def test_linearized_circle_matches_bundled_family(complexes, families):
    f = linearize(complexes["circle_xi1"], ("1",), order=1)
    assert f.coefficient(0, 0) == families["circle_linear_family"].coefficient(0, 0)
    assert f.coefficient(0, 1) == families["circle_linear_family"].coefficient(0, 1)


def test_companion_first_page_sees_the_jump(complexes):
    f = linearize(complexes["alexander_trefoil_companion"], ("1",))
    assert page(f, 1).dims == (2, 2)
    assert page(f, 2).dims == (0, 0)


def test_negative_exponents_are_expanded_as_series():
    x = LaurentPoly.variable(1, 0)
    c = TwistedComplex(
        top_degree=1,
        fiber_dim=1,
        num_vars=1,
        cochain_ranks=(1, 1),
        coboundaries=(LaurentMatrix.from_rows([[x**-1 - 1]], 1),),
    )
    f = linearize(c, ("1",), order=3)
    assert not f.exact
    assert [f.coefficient(0, k)[0, 0] for k in range(4)] == [0, -1, 1, -1]
    assert limit_page(f).dims == (0, 0)


def test_linearize_along_a_zero_direction(complexes):
    # a zero direction freezes x at the base point
    f = linearize(complexes["torus_xi10"], ("2",), direction=("0",))
    assert f.exact
    assert f.coefficient(0, 1).is_zero_matrix
    assert f.coefficient(0, 0) == Matrix([[1], [0]])
    assert f.base_point == Fraction(0)


def line_into_plane():
    """D_0 embeds a line into a plane; nothing else."""
    return make_family([1, 2], {(0, 0): [[1], [0]]}, order=1, exact=True)


def partly_invertible():
    """D(s) = diag(1, s): d_1 kills what D_0 leaves."""
    return make_family([2, 2], {(0, 0): [[1, 0], [0, 0]], (0, 1): [[0, 0], [0, 1]]}, order=1, exact=True)


def test_base_image_is_quotiented_on_every_page():
    f = line_into_plane()
    assert [page(f, r).dims for r in range(1, 4)] == [(0, 1)] * 3
    result = limit_page(f)
    assert result.dims == (0, 1)
    assert result.stabilized


def test_first_differential_finishes_a_partly_invertible_family():
    f = partly_invertible()
    first = page(f, 1)
    assert first.dims == (1, 1)
    assert first.differentials[0] == Matrix([[1]])
    assert page(f, 2).dims == (0, 0)
    assert limit_page(f).dims == (0, 0)
    assert first_differential_check(f)


@pytest.mark.parametrize("build", [line_into_plane, partly_invertible])
def test_pages_follow_homology_with_nonzero_base_differential(build):
    f = build()
    pages = [page(f, r) for r in range(1, page_bound(f) + 1)]
    for current, following in zip(pages, pages[1:]):
        assert all(b <= a for a, b in zip(current.dims, following.dims))
        assert page_homology(current) == following.dims


def test_linearization_at_a_regular_point_keeps_the_novikov_numbers(complexes):
    c = complexes["granny_sum_eta"]
    f = linearize(c, ("2",), order=1)
    assert f.exact
    assert not f.coefficient(0, 0).is_zero_matrix
    pages = [page(f, r) for r in range(1, 4)]
    assert [pg.dims for pg in pages] == [(0, 6, 4, 0)] * 3
    assert novikov_numbers(c) == (0, 6, 4, 0)
    for current, following in zip(pages, pages[1:]):
        assert page_homology(current) == following.dims
    assert first_differential_check(f)


def test_limit_page_rejects_pages_that_disagree_with_homology(monkeypatch):
    monkeypatch.setattr(spectral, "page_homology", lambda pg: tuple(d + 1 for d in pg.dims))
    with pytest.raises(PageConsistencyError) as info:
        limit_page(line_into_plane())
    assert info.value.page == 2
    assert info.value.expected == (1, 2)
