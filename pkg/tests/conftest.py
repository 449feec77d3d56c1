from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner

from novikov_numbers import corpus
from novikov_numbers.algebra import rational_matrix
from novikov_numbers.documents import to_complex, to_family, to_morse
from novikov_numbers.spectral import DeformationFamily


def _of_kind(kind):
    return [name for name in corpus.names() if corpus.CORPUS[name]["kind"] == kind]


COMPLEX_NAMES = _of_kind("complex")
MORSE_NAMES = _of_kind("morse")
FAMILY_NAMES = _of_kind("family")


@pytest.fixture(scope="session")
def complexes():
    return {name: to_complex(corpus.load(name)) for name in COMPLEX_NAMES}


@pytest.fixture(scope="session")
def morse_data():
    return {name: to_morse(corpus.load(name)) for name in MORSE_NAMES}


@pytest.fixture(scope="session")
def families():
    return {name: to_family(corpus.load(name)) for name in FAMILY_NAMES}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def runner():
    return CliRunner()


def make_family(ranks, coeffs, order, exact=True, base_point=Fraction(0)):
    """coeffs maps (degree, k) to a list of rows; missing coefficients are zero."""
    coefficients = tuple(
        tuple(
            rational_matrix(
                coeffs.get((p, k), [[0] * ranks[p] for _ in range(ranks[p + 1])]),
                (ranks[p + 1], ranks[p]),
            )
            for k in range(order + 1)
        )
        for p in range(len(ranks) - 1)
    )
    return DeformationFamily(
        base_point=base_point,
        order=order,
        cochain_ranks=tuple(ranks),
        coefficients=coefficients,
        exact=exact,
    )
