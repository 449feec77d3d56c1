import math
from fractions import Fraction

import numpy as np
import pytest

from novikov_numbers.algebra import (
    Exact,
    IntPolynomial,
    LaurentMatrix,
    LaurentPoly,
    Randomized,
    companion_matrix,
    divide_by_one_plus_lambda,
    evaluate_numeric,
    failure_probability,
    parse_rational,
    rank_at_point,
    rank_generic,
    rank_mod_prime,
)
from novikov_numbers.errors import (
    ExponentOverflowError,
    InvalidPointError,
    MalformedInputError,
    RangeError,
)

X = LaurentPoly.variable(1, 0)
PRIME = 2**31 - 1
STRATEGIES = [Exact(), Randomized(trials=3, prime=PRIME, seed=0)]


def random_poly(rng, num_vars):
    terms = {}
    for _ in range(int(rng.integers(1, 3))):
        exps = tuple(int(e) for e in rng.integers(-1, 3, size=num_vars))
        terms[exps] = int(rng.integers(-2, 3))
    return LaurentPoly(num_vars, terms)


def random_matrix(rng, rows, cols, num_vars, rank):
    """Product of rows x rank and rank x cols random factors, so rank <= `rank`."""
    left = LaurentMatrix.from_rows(
        [[random_poly(rng, num_vars) for _ in range(rank)] for _ in range(rows)], num_vars, cols=rank
    )
    right = LaurentMatrix.from_rows(
        [[random_poly(rng, num_vars) for _ in range(cols)] for _ in range(rank)], num_vars, cols=cols
    )
    return left @ right


def test_laurent_poly_is_canonical():
    assert X + 1 == 1 + X
    assert (X - X).is_zero()
    assert LaurentPoly(1, {(1,): 0, (0,): 2}) == LaurentPoly.constant(1, 2)
    assert str(X * X - X + 1) == "x1^2 - x1 + 1"
    assert X**-2 == LaurentPoly.monomial(1, [-2])
    assert (X**-1 * X) == 1


def test_laurent_poly_evaluates_exactly():
    p = X * X - X + 1
    assert p.evaluate((Fraction(2),)) == 3
    assert (X**-1).evaluate((Fraction(1, 3),)) == 3


def test_exponent_overflow_is_reported():
    with pytest.raises(ExponentOverflowError):
        LaurentPoly.monomial(1, [2**31])


def test_inconsistent_num_vars_is_malformed():
    with pytest.raises(MalformedInputError):
        LaurentMatrix.from_rows([[LaurentPoly.variable(2, 0), X]], num_vars=1)
    with pytest.raises(MalformedInputError):
        X + LaurentPoly.variable(2, 1)


@pytest.mark.parametrize("strategy", STRATEGIES, ids=["exact", "randomized"])
@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[X - 1]], 1),
        ([[0, 0], [0, 0]], 0),
        ([[X - 1, X - 1], [X - 1, X - 1]], 1),
        ([[X - 1, 0], [0, X - 2]], 2),
        ([[X, X**2], [1, X]], 1),
    ],
)
def test_rank_generic_examples(rows, expected, strategy):
    assert rank_generic(LaurentMatrix.from_rows(rows, num_vars=1), strategy) == expected


def test_rank_generic_of_empty_matrix_is_zero():
    assert rank_generic(LaurentMatrix(0, 3, 1)) == 0
    assert rank_generic(LaurentMatrix(2, 0, 1), Exact()) == 0


def test_constant_matrices_use_rational_rank():
    m = LaurentMatrix.from_rows([[1, 2], [2, 4]], num_vars=0)
    assert rank_generic(m, Exact()) == 1
    assert rank_generic(m, Randomized()) == 1
    assert failure_probability(m, Randomized()) == 0.0


@pytest.mark.parametrize(
    "rows, point, expected",
    [
        ([[X - 1]], ("1",), 0),
        ([[X - 1]], ("2",), 1),
        ([[X - 1, 0], [0, X - 2]], ("2",), 1),
        ([[X**-1 - 3]], ("1/3",), 0),
    ],
)
def test_rank_at_point_examples(rows, point, expected):
    assert rank_at_point(LaurentMatrix.from_rows(rows, num_vars=1), point) == expected


def test_rank_at_zero_is_invalid():
    with pytest.raises(InvalidPointError) as info:
        rank_at_point(LaurentMatrix.from_rows([[X - 1]], num_vars=1), (0,))
    assert info.value.index == 0


def test_evaluate_numeric_examples():
    m = LaurentMatrix.from_rows([[X - 1]], num_vars=1)
    assert evaluate_numeric(m, 0.0, (1.0,))[0, 0] == 0.0
    assert evaluate_numeric(LaurentMatrix.from_rows([[X]], 1), math.log(2), (-1.0,))[0, 0] == pytest.approx(2.0)
    assert evaluate_numeric(m, 60.0, (1.0,))[0, 0] == pytest.approx(-1.0, abs=1e-12)


def test_evaluate_numeric_overflow_names_t():
    with pytest.raises(RangeError) as info:
        evaluate_numeric(LaurentMatrix.from_rows([[X]], 1), -1000.0, (1.0,))
    assert info.value.t == -1000.0


@pytest.mark.parametrize("seed", range(24))
def test_randomized_agrees_with_exact(seed):
    rng = np.random.default_rng(seed)
    rows, cols = int(rng.integers(1, 6)), int(rng.integers(1, 6))
    rank = int(rng.integers(0, min(rows, cols) + 1))
    m = random_matrix(rng, rows, cols, int(rng.integers(1, 3)), rank)
    exact = rank_generic(m, Exact())
    assert exact <= rank
    assert rank_generic(m, Randomized(seed=seed)) == exact


@pytest.mark.parametrize("prime", [2**61 - 1, 2**89 - 1, 2**127 - 1])
def test_randomized_rank_with_primes_beyond_int64(prime):
    rng = np.random.default_rng(prime % 1000)
    m = random_matrix(rng, 4, 5, 2, 3)
    strategy = Randomized(trials=2, prime=prime, seed=5)
    assert rank_generic(m, strategy) == rank_generic(m, Exact())
    assert failure_probability(m, strategy) < 1e-15


@pytest.mark.parametrize("seed", range(8))
def test_rank_at_point_bounded_by_generic_rank(seed):
    rng = np.random.default_rng(100 + seed)
    m = random_matrix(rng, 3, 4, 1, 2)
    generic = rank_generic(m, Exact())
    for value in ("1", "-1", "2", "1/2"):
        assert rank_at_point(m, (value,)) <= generic


@pytest.mark.parametrize("seed", range(6))
def test_rank_invariant_under_permutation_and_units(seed):
    rng = np.random.default_rng(200 + seed)
    m = random_matrix(rng, 4, 4, 2, 3)
    base = rank_generic(m, Exact())
    permuted = m.permute([int(i) for i in rng.permutation(4)], [int(j) for j in rng.permutation(4)])
    scaled = m.scale_row(1, LaurentPoly.monomial(2, [-2, 1], 3))
    assert rank_generic(permuted, Exact()) == base
    assert rank_generic(scaled, Exact()) == base
    assert rank_generic(scaled, Randomized(seed=seed)) == base


def test_randomized_rank_misses_when_prime_divides_every_coefficient():
    m = LaurentMatrix.from_rows([[(X - 1) * PRIME]], num_vars=1)
    assert rank_generic(m, Exact()) == 1
    assert rank_generic(m, Randomized(prime=PRIME)) == 0


def test_failure_probability_bound():
    m = LaurentMatrix.from_rows([[X - 1]], num_vars=1)
    assert failure_probability(m, Exact()) == 0.0
    assert failure_probability(m, Randomized(trials=3, prime=PRIME)) == pytest.approx(3 / (PRIME - 1))


def test_rank_mod_prime():
    assert rank_mod_prime([[1, 2], [2, 4]], 7) == 1
    assert rank_mod_prime([[1, 2], [3, 4]], 2**61 - 1) == 2
    assert rank_mod_prime([[7, 14]], 7) == 0


def test_companion_matrix_of_eta():
    assert companion_matrix(["1", "-1", "1"]) == ((0, -1), (1, 1))
    with pytest.raises(MalformedInputError):
        companion_matrix([1, 2])


def test_parse_rational_refuses_floats():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    with pytest.raises(MalformedInputError):
        parse_rational(0.5)
    with pytest.raises(MalformedInputError):
        parse_rational("1/0")


@pytest.mark.parametrize(
    "coefficients, quotient, remainder",
    [
        ((1, 2, 1), (1, 1), 0),
        ((1,), (), 1),
        ((0, 1, 1), (0, 1), 0),
        ((), (), 0),
        ((1, -1), (-1,), 2),
    ],
)
def test_divide_by_one_plus_lambda(coefficients, quotient, remainder):
    q, r = divide_by_one_plus_lambda(IntPolynomial(coefficients))
    assert q == IntPolynomial(quotient)
    assert r == remainder


@pytest.mark.parametrize("seed", range(10))
def test_division_reconstructs_polynomial(seed):
    rng = np.random.default_rng(seed)
    p = IntPolynomial(tuple(int(c) for c in rng.integers(-5, 6, size=int(rng.integers(0, 8)))))
    q, r = divide_by_one_plus_lambda(p)
    assert IntPolynomial((1, 1)) * q + IntPolynomial((r,)) == p
    assert r == p(-1)


def test_int_polynomial_arithmetic():
    p = IntPolynomial((1, 2, 1, 0, 0))
    assert p.degree == 2
    assert str(p) == "1 + 2λ + λ^2"
    assert str(IntPolynomial((0, -1, 3))) == "-λ + 3λ^2"
    assert p.shift(2) == IntPolynomial((0, 0, 1, 2, 1))
    assert p - p == IntPolynomial()
    assert p(1) == 4 and p(-1) == 0
