"""
Morse-Bott counting polynomials, Novikov polynomials and the certificate
M(lambda) - N(lambda) = (1 + lambda) Q(lambda) with Q >= 0 coefficient-wise.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .algebra import IntPolynomial, RankStrategy, divide_by_one_plus_lambda
from .errors import DataConsistencyError, MalformedInputError
from .log import get_logger
from .twisted import TwistedComplex, novikov_numbers

logger = get_logger(__name__)


@dataclass(frozen=True)
class CriticalComponent:
    name: str
    index: int
    poincare_coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "poincare_coeffs", tuple(int(c) for c in self.poincare_coeffs))
        if self.index < 0:
            raise MalformedInputError(f"component '{self.name}' has negative index {self.index}")
        if any(c < 0 for c in self.poincare_coeffs):
            raise MalformedInputError(
                f"component '{self.name}' has negative Poincare coefficients {self.poincare_coeffs}"
            )

    @property
    def poincare(self) -> IntPolynomial:
        return IntPolynomial(self.poincare_coeffs)


@dataclass(frozen=True)
class MorseData:
    components: Tuple[CriticalComponent, ...]
    fiber_dim: int = 1
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.fiber_dim < 1:
            raise MalformedInputError(f"fiber_dim must be >= 1, got {self.fiber_dim}", self.name)

    def __add__(self, other: "MorseData") -> "MorseData":
        """Disjoint union of critical sets."""
        if self.fiber_dim != other.fiber_dim:
            raise MalformedInputError("cannot join Morse data with different fiber dimensions")
        return MorseData(self.components + other.components, self.fiber_dim, self.name)


@dataclass(frozen=True)
class FactorizationCertificate:
    morse: IntPolynomial
    novikov: IntPolynomial
    difference: IntPolynomial
    quotient: IntPolynomial
    remainder: int
    holds: bool


def morse_polynomial(md: MorseData) -> IntPolynomial:
    total = IntPolynomial()
    for component in md.components:
        total = total + component.poincare.shift(component.index)
    return total


def isolated_morse_polynomial(counts: Sequence[int], d: int = 1) -> IntPolynomial:
    """d * sum m_p lambda^p for a form with isolated zeros, m_p of index p."""
    return IntPolynomial(tuple(counts)) * d


def novikov_polynomial(betti: Sequence[int]) -> IntPolynomial:
    if any(b < 0 for b in betti):
        raise MalformedInputError(f"Betti numbers must be nonnegative, got {tuple(betti)}")
    return IntPolynomial(tuple(betti))


def check_main_theorem(M: IntPolynomial, N: IntPolynomial) -> FactorizationCertificate:
    difference = M - N
    quotient, remainder = divide_by_one_plus_lambda(difference)
    holds = remainder == 0 and all(q >= 0 for q in quotient.coefficients)
    logger.info(f"M - N = {difference}; Q = {quotient}, remainder {remainder}, holds={holds}")
    return FactorizationCertificate(
        morse=M,
        novikov=N,
        difference=difference,
        quotient=quotient,
        remainder=remainder,
        holds=holds,
    )


def _alternating_partial_sum(values: Sequence[int], p: int) -> int:
    return sum((-1) ** i * values[p - i] for i in range(p + 1) if p - i < len(values))


def check_strong_inequalities(
    m_counts: Sequence[int], betti: Sequence[int], d: int = 1
) -> Tuple[bool, ...]:
    """
    For every degree p: sum_i (-1)^i m_{p-i} >= d^{-1} sum_i (-1)^i beta_{p-i},
    compared over exact rationals.
    """
    if d < 1:
        raise MalformedInputError(f"fiber dimension must be >= 1, got {d}")
    n = max(len(m_counts), len(betti))
    return tuple(
        Fraction(_alternating_partial_sum(m_counts, p))
        >= Fraction(_alternating_partial_sum(betti, p), d)
        for p in range(n)
    )


def check_weak_inequalities(
    m_counts: Sequence[int], betti: Sequence[int], d: int = 1
) -> Tuple[bool, ...]:
    """m_p >= beta_p / d degree by degree."""
    n = max(len(m_counts), len(betti))
    m = list(m_counts) + [0] * (n - len(m_counts))
    b = list(betti) + [0] * (n - len(betti))
    return tuple(Fraction(m[p]) >= Fraction(b[p], d) for p in range(n))


def component_euler_characteristic(component: CriticalComponent, d: int) -> int:
    value = component.poincare(-1)
    if value % d:
        raise DataConsistencyError(component=component.name, value=value, fiber_dim=d)
    return value // d


def euler_poincare_sum(md: MorseData) -> int:
    """d * sum_Z (-1)^{ind Z} chi(Z)"""
    return md.fiber_dim * sum(
        (-1) ** c.index * component_euler_characteristic(c, md.fiber_dim) for c in md.components
    )


def euler_poincare_check(md: MorseData, chi_M_times_d: int) -> bool:
    value = morse_polynomial(md)(-1)
    logger.debug(f"M(-1) = {value}, d * chi(M) = {chi_M_times_d}")
    return value == chi_M_times_d


def component_from_complex(
    name: str, index: int, c: TwistedComplex, strategy: Optional[RankStrategy] = None
) -> CriticalComponent:
    """Component whose twisted Poincare coefficients are the Novikov numbers of a complex for Z."""
    return CriticalComponent(name=name, index=index, poincare_coeffs=novikov_numbers(c, strategy))
