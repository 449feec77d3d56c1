from dataclasses import dataclass, field
from typing import Optional, Tuple

EXIT_NEGATIVE = 1
EXIT_MALFORMED = 2
EXIT_INCONCLUSIVE = 3
EXIT_INTERNAL = 4


class NovikovError(Exception):
    exit_code = EXIT_MALFORMED


@dataclass
class MalformedInputError(NovikovError):
    message: str
    location: str = ""

    def __str__(self):
        if self.location:
            return f"{self.message} (at {self.location})"
        return self.message


@dataclass
class InvalidPointError(NovikovError):
    point: Tuple
    index: int
    reason: str = "Laurent monomials are undefined at 0"

    def __str__(self):
        return f"invalid point {self.point}: coordinate {self.index} ({self.reason})"


@dataclass
class RangeError(NovikovError):
    t: float
    exponent: float

    def __str__(self):
        return f"e^{self.exponent:.6g} leaves the floating range at t={self.t!r}"


@dataclass
class ExponentOverflowError(NovikovError):
    exponent: int
    limit: int

    def __str__(self):
        return f"exponent {self.exponent} exceeds the machine range +/-{self.limit}"


@dataclass
class FlatnessViolationError(NovikovError):
    degree: int
    row: int
    col: int
    entry: str
    order: Optional[int] = None

    def __str__(self):
        where = f"D^{self.degree + 1} D^{self.degree}"
        if self.order is not None:
            where += f" at order {self.order}"
        return f"flatness violated: {where} has nonzero entry ({self.row}, {self.col}) = {self.entry}"


@dataclass
class InvalidRepresentationError(NovikovError):
    generator: str
    reason: str

    def __str__(self):
        return f"representation of generator '{self.generator}' is invalid: {self.reason}"


@dataclass
class TruncationInsufficientError(NovikovError):
    page: int
    order: int
    needed: int
    exit_code = EXIT_INCONCLUSIVE

    def __str__(self):
        return (
            f"page {self.page} needs coefficients up to order {self.needed}, "
            f"family is truncated at order {self.order}"
        )


@dataclass
class NumericalConsistencyError(NovikovError):
    what: str
    residual: float
    tolerance: float

    def __str__(self):
        return f"{self.what}: residual {self.residual:.3e} exceeds tolerance {self.tolerance:.3e}"


@dataclass
class InvalidCutoffError(NovikovError):
    index: int
    value: float

    def __str__(self):
        return f"cutoff entry {self.index} = {self.value!r} lies outside [0, 1]"


@dataclass
class DataConsistencyError(NovikovError):
    component: str
    value: int
    fiber_dim: int

    def __str__(self):
        return (
            f"component '{self.component}': P(-1) = {self.value} is not divisible "
            f"by the fiber dimension {self.fiber_dim}"
        )


@dataclass
class FiberDimensionMismatchError(NovikovError):
    morse_fiber_dim: int
    complex_fiber_dim: int

    def __str__(self):
        return (
            f"fiber_dim mismatch: Morse data has d={self.morse_fiber_dim}, "
            f"complex has d={self.complex_fiber_dim}"
        )


@dataclass
class InconsistentRankError(NovikovError):
    degree: int
    probe_dim: int
    background: int
    point: Tuple = field(default_factory=tuple)
    exit_code = EXIT_INCONCLUSIVE

    def __str__(self):
        return (
            f"degree {self.degree}: dimension {self.probe_dim} at {self.point} is below the "
            f"background {self.background}; the randomized rank certificate failed, rerun with --strategy exact"
        )


@dataclass
class PageConsistencyError(NovikovError):
    page: int
    dims: Tuple[int, ...]
    expected: Tuple[int, ...]
    exit_code = EXIT_INCONCLUSIVE

    def __str__(self):
        return f"page {self.page} has dims {self.dims}, the homology of page {self.page - 1} has {self.expected}"
