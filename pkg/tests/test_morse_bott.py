import itertools
from collections import defaultdict

import pytest

from novikov_numbers.algebra import Exact, IntPolynomial
from novikov_numbers.errors import DataConsistencyError, MalformedInputError
from novikov_numbers.morse_bott import (
    CriticalComponent,
    MorseData,
    check_main_theorem,
    check_strong_inequalities,
    check_weak_inequalities,
    component_euler_characteristic,
    component_from_complex,
    euler_poincare_check,
    euler_poincare_sum,
    isolated_morse_polynomial,
    morse_polynomial,
    novikov_polynomial,
)


def poly(*coefficients):
    return IntPolynomial(coefficients)


def test_morse_polynomials_of_examples(morse_data):
    assert morse_polynomial(morse_data["sphere_morse"]) == poly(1, 0, 1)
    assert morse_polynomial(morse_data["torus_bott"]) == poly(1, 2, 1)
    assert morse_polynomial(MorseData(())) == IntPolynomial()


def test_disjoint_union_adds_polynomials(morse_data):
    sphere, torus = morse_data["sphere_morse"], morse_data["torus_bott"]
    assert morse_polynomial(sphere + torus) == morse_polynomial(sphere) + morse_polynomial(torus)
    with pytest.raises(MalformedInputError):
        sphere + MorseData((), fiber_dim=2)


def test_isolated_and_novikov_polynomials():
    assert isolated_morse_polynomial([1, 2, 1], d=2) == poly(2, 4, 2)
    assert novikov_polynomial([0, 1, 0]) == poly(0, 1)
    with pytest.raises(MalformedInputError):
        novikov_polynomial([1, -1])


@pytest.mark.parametrize(
    "M, N, quotient, holds",
    [
        (poly(1, 0, 1), poly(1, 0, 1), (), True),
        (poly(1, 2, 1), poly(0, 0, 0), (1, 1), True),
        (poly(1, 2, 1), poly(1, 2, 1), (), True),
        (poly(1, 0, 1), poly(), None, False),
        (poly(0, 0, 1), poly(1), (-1, 1), False),
    ],
)
def test_main_theorem_examples(M, N, quotient, holds):
    certificate = check_main_theorem(M, N)
    assert certificate.holds is holds
    if quotient is not None:
        assert certificate.quotient == IntPolynomial(quotient)
        assert certificate.remainder == 0
    else:
        assert certificate.remainder == 2


def test_torus_bott_certificate(morse_data):
    # untwisted and twisted Betti numbers of the torus
    for betti in ((1, 2, 1), (0, 0, 0)):
        certificate = check_main_theorem(morse_polynomial(morse_data["torus_bott"]), poly(*betti))
        assert certificate.holds


@pytest.mark.parametrize(
    "m, beta, expected",
    [
        ((1, 0, 1), (1, 0, 1), (True, True, True)),
        ((0, 0, 0), (0, 0, 0), (True, True, True)),
        ((0, 1, 0), (1, 1, 0), (False, True, False)),
    ],
)
def test_strong_inequalities_examples(m, beta, expected):
    assert check_strong_inequalities(m, beta) == expected


def test_weak_inequalities():
    assert check_weak_inequalities((1, 2, 1), (2, 4, 2), d=2) == (True, True, True)
    assert check_weak_inequalities((0, 1), (1, 1)) == (False, True)


def _sequences(length, top):
    return itertools.product(range(top + 1), repeat=length)


def _by_alternating_sum(sequences, scale=1):
    buckets = defaultdict(list)
    for s in sequences:
        buckets[scale * sum((-1) ** p * v for p, v in enumerate(s))].append(s)
    return buckets


@pytest.mark.parametrize("d, length", [(1, 5), (2, 4)])
def test_certificate_equivalent_to_strong_inequalities(d, length):
    # the certificate needs M(-1) = N(-1); only such pairs are compared
    ms = _by_alternating_sum(_sequences(length, 3), scale=d)
    betas = _by_alternating_sum(_sequences(length, 3))
    compared = 0
    for chi, m_list in ms.items():
        for m in m_list:
            M = isolated_morse_polynomial(m, d)
            for beta in betas.get(chi, ()):
                certificate = check_main_theorem(M, novikov_polynomial(beta))
                assert certificate.holds == all(check_strong_inequalities(m, beta, d))
                compared += 1
    assert compared > 1000


@pytest.mark.parametrize("counts", [(1, 0, 1), (2, 3, 1), (0, 0, 4, 1)])
def test_certificate_of_a_polynomial_with_itself(counts):
    M = poly(*counts)
    certificate = check_main_theorem(M, M)
    assert certificate.holds
    assert certificate.quotient.is_zero()


def test_certificate_implies_total_and_euler_relations():
    for m in _sequences(3, 2):
        for beta in _sequences(3, 2):
            M, N = poly(*m), poly(*beta)
            if check_main_theorem(M, N).holds:
                assert M(1) >= N(1)
                assert M(-1) == N(-1)


def test_euler_poincare_examples(morse_data):
    assert euler_poincare_check(morse_data["sphere_morse"], 2)
    assert euler_poincare_check(morse_data["torus_bott"], 0)
    assert euler_poincare_sum(morse_data["sphere_morse"]) == 2
    assert euler_poincare_sum(morse_data["torus_bott"]) == 0


def test_component_data_must_be_divisible_by_fiber_dim():
    z = CriticalComponent("point", 0, (1,))
    assert component_euler_characteristic(z, 1) == 1
    with pytest.raises(DataConsistencyError) as info:
        component_euler_characteristic(z, 2)
    assert info.value.value == 1
    with pytest.raises(MalformedInputError):
        CriticalComponent("bad", -1, (1,))


def test_component_from_complex(complexes):
    z = component_from_complex("critical circle", 1, complexes["circle_xi0"], Exact())
    assert z.poincare == poly(1, 1)
    assert morse_polynomial(MorseData((z,))) == poly(0, 1, 1)
