"""
Spectral sequence of a one-parameter deformation D(t) = sum_k (t - t0)^k D_k of
differentials.

All polynomials are recentered at t0 and written in s = t - t0. A cochain
f = f_0 + s f_1 + ... + s^{r-1} f_{r-1} lies in Z_r when D(t) f is divisible by
s^r. Since the cochains of Z_r with f_0 = 0 are exactly s * Z_{r-1}, the page
E_r = Z_r / (s Z_{r-1} + s^{1-r} D Z_{r-1}) is computed as the quotient of the
leading coefficients L_r of Z_r by the leading coefficients B_r of
s^{1-r} D Z_{r-1}. The differential d_r sends the class of f_0 to the leading
coefficient of s^{-r} D f for any lift f of f_0 in Z_r.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Rational as SympyRational

from .algebra import (
    LaurentPoly,
    check_point,
    complement_indices,
    coordinates,
    kernel_basis,
    matrix_rank,
    parse_rational,
    pivot_columns,
)
from .errors import (
    FlatnessViolationError,
    MalformedInputError,
    PageConsistencyError,
    TruncationInsufficientError,
)
from .log import get_logger
from .twisted import TwistedComplex

logger = get_logger(__name__)


@dataclass(frozen=True)
class DeformationFamily:
    """
    coefficients[p][k] is the rational matrix D_k^p of shape c_{p+1} x c_p.
    Exact families are polynomials in s: every D_k with k > order vanishes.
    """

    base_point: Fraction
    order: int
    cochain_ranks: Tuple[int, ...]
    coefficients: Tuple[Tuple[ImmutableMatrix, ...], ...]
    exact: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "base_point", parse_rational(self.base_point))
        object.__setattr__(self, "cochain_ranks", tuple(self.cochain_ranks))
        object.__setattr__(
            self,
            "coefficients",
            tuple(tuple(ImmutableMatrix(m) for m in per_degree) for per_degree in self.coefficients),
        )
        if self.order < 0:
            raise MalformedInputError(f"truncation order must be >= 0, got {self.order}", self.name)
        if len(self.coefficients) != self.top_degree:
            raise MalformedInputError(
                f"expected coefficients for {self.top_degree} degrees, got {len(self.coefficients)}",
                self.name,
            )
        for p, per_degree in enumerate(self.coefficients):
            if len(per_degree) != self.order + 1:
                raise MalformedInputError(
                    f"degree {p} has {len(per_degree)} coefficients, expected {self.order + 1}",
                    self.name,
                )
            expected = (self.cochain_ranks[p + 1], self.cochain_ranks[p])
            for k, m in enumerate(per_degree):
                if m.shape != expected:
                    raise MalformedInputError(
                        f"D_{k}^{p} has shape {m.shape}, expected {expected}", self.name
                    )
        # a polynomial family must square to zero in every order, a series only up to K
        top_order = 2 * self.order if self.exact else self.order
        for p in range(self.top_degree - 1):
            for k in range(top_order + 1):
                total = Matrix.zeros(self.cochain_ranks[p + 2], self.cochain_ranks[p])
                for i in range(max(0, k - self.order), min(k, self.order) + 1):
                    total += self.coefficients[p + 1][i] * self.coefficients[p][k - i]
                for (row, col), value in _nonzero_entries(total):
                    raise FlatnessViolationError(
                        degree=p, row=row, col=col, entry=str(value), order=k
                    )

    @property
    def top_degree(self) -> int:
        return len(self.cochain_ranks) - 1

    def rank(self, p: int) -> int:
        return self.cochain_ranks[p] if 0 <= p <= self.top_degree else 0

    def coefficient(self, p: int, k: int) -> Matrix:
        """D_k^p, with zero maps outside the complex and beyond an exact polynomial's order."""
        if not 0 <= p < self.top_degree:
            return Matrix.zeros(self.rank(p + 1), self.rank(p))
        if k > self.order:
            if not self.exact:
                raise TruncationInsufficientError(page=k, order=self.order, needed=k)
            return Matrix.zeros(self.rank(p + 1), self.rank(p))
        return self.coefficients[p][k]


def _nonzero_entries(m: Matrix):
    for i in range(m.rows):
        for j in range(m.cols):
            if m[i, j] != 0:
                yield (i, j), m[i, j]


def _blocks(r: int) -> int:
    return max(r, 1)


def _require(f: DeformationFamily, r: int, needed: int) -> None:
    if not f.exact and needed > f.order:
        raise TruncationInsufficientError(page=r, order=f.order, needed=needed)


def cycle_space(f: DeformationFamily, p: int, r: int) -> List[Matrix]:
    """
    Basis of Z^p_r as stacked coefficient vectors (f_0; f_1; ...; f_{n-1}),
    n = max(r, 1). Z_0 carries no condition.
    """
    if r < 0:
        raise MalformedInputError(f"page index must be >= 0, got {r}")
    _require(f, r, r - 1)
    c, target = f.rank(p), f.rank(p + 1)
    n = _blocks(r)
    if c == 0:
        return []
    system = Matrix.zeros(r * target, n * c)
    if target == 0:
        return kernel_basis(system)
    for k in range(r):
        for j in range(min(k, n - 1) + 1):
            system[k * target:(k + 1) * target, j * c:(j + 1) * c] = f.coefficient(p, k - j)
    return kernel_basis(system)


def _boundary_leads(f: DeformationFamily, p: int, r: int) -> List[Matrix]:
    """
    Leading coefficients of s^{1-r} D Z^{p-1}_{r-1}: sum_{i+j=r-1} D_i h_j.

    For r >= 2 the block h_{r-1} is not constrained by Z_{r-1}, so im D_0 is
    always part of B_r.
    """
    c_prev, c = f.rank(p - 1), f.rank(p)
    if c_prev == 0 or c == 0:
        return []
    n = _blocks(r - 1)
    out = []
    for h in cycle_space(f, p - 1, r - 1):
        lead = Matrix.zeros(c, 1)
        for j in range(min(n, r)):
            lead += f.coefficient(p - 1, r - 1 - j) * h[j * c_prev:(j + 1) * c_prev, :]
        out.append(lead)
    if r >= 2:
        base = f.coefficient(p - 1, 0)
        out.extend(base[:, j] for j in range(base.cols))
    return out


@dataclass(frozen=True)
class _Quotient:
    """E^p_r: representatives (leading vector, lift in Z_r) and a basis of B^p_r."""

    representatives: Tuple[Tuple[Matrix, Matrix], ...]
    boundary_basis: Tuple[Matrix, ...]


def _quotient(f: DeformationFamily, p: int, r: int) -> _Quotient:
    c = f.rank(p)
    if c == 0:
        return _Quotient((), ())
    cycles = cycle_space(f, p, r)
    leading = [z[:c, :] for z in cycles]
    lead_idx = pivot_columns(leading)
    boundaries = _boundary_leads(f, p, r)
    boundary_basis = [boundaries[i] for i in pivot_columns(boundaries)]
    ambient = [leading[i] for i in lead_idx]
    reps_idx = complement_indices(boundary_basis, ambient)
    if len(reps_idx) != len(lead_idx) - len(boundary_basis):
        raise MalformedInputError(
            f"boundaries of page {r} are not contained in its cycles at degree {p}", f.name
        )
    reps = tuple((ambient[i], cycles[lead_idx[i]]) for i in reps_idx)
    return _Quotient(reps, tuple(boundary_basis))


@dataclass(frozen=True)
class SpectralPage:
    r: int
    dims: Tuple[int, ...]
    differentials: Tuple[ImmutableMatrix, ...]
    representatives: Tuple[Tuple[ImmutableMatrix, ...], ...] = field(default_factory=tuple)


def _differential(
    f: DeformationFamily, p: int, r: int, source: _Quotient, target: _Quotient
) -> ImmutableMatrix:
    c, c_next = f.rank(p), f.rank(p + 1)
    out = Matrix.zeros(len(target.representatives), len(source.representatives))
    basis = list(target.boundary_basis) + [lead for lead, _ in target.representatives]
    for col, (_, lift) in enumerate(source.representatives):
        y = Matrix.zeros(c_next, 1)
        for j in range(_blocks(r)):
            y += f.coefficient(p, r - j) * lift[j * c:(j + 1) * c, :]
        coords = coordinates(basis, y)
        for row, value in enumerate(coords[len(target.boundary_basis):]):
            out[row, col] = value
    return ImmutableMatrix(out)


def page(f: DeformationFamily, r: int) -> SpectralPage:
    if r < 1:
        raise MalformedInputError(f"pages start at r = 1, got {r}")
    _require(f, r, r)
    quotients = [_quotient(f, p, r) for p in range(f.top_degree + 1)]
    differentials = tuple(
        _differential(f, p, r, quotients[p], quotients[p + 1]) for p in range(f.top_degree)
    )
    dims = tuple(len(q.representatives) for q in quotients)
    logger.info(f"page {r} of '{f.name}': dims {dims}")
    return SpectralPage(
        r=r,
        dims=dims,
        differentials=differentials,
        representatives=tuple(
            tuple(ImmutableMatrix(lead) for lead, _ in q.representatives) for q in quotients
        ),
    )


def page_homology(pg: SpectralPage) -> Tuple[int, ...]:
    """Dimensions of the homology of (E_r, d_r), i.e. of E_{r+1}."""
    ranks = [matrix_rank(Matrix(d)) for d in pg.differentials]
    n = len(pg.dims) - 1
    return tuple(
        dim - (ranks[p] if p < n else 0) - (ranks[p - 1] if p > 0 else 0)
        for p, dim in enumerate(pg.dims)
    )


def differentials_square_to_zero(pg: SpectralPage) -> bool:
    return all(
        (Matrix(pg.differentials[p + 1]) * Matrix(pg.differentials[p])).is_zero_matrix
        for p in range(len(pg.differentials) - 1)
    )


def first_differential_check(f: DeformationFamily) -> bool:
    """d_1 against the map induced by D_1 on the cohomology of D_0, built directly."""
    pg = page(f, 1)
    reps: List[List[Matrix]] = []
    images: List[List[Matrix]] = []
    for p in range(f.top_degree + 1):
        c = f.rank(p)
        if c == 0:
            reps.append([])
            images.append([])
            continue
        cycles = kernel_basis(Matrix(f.coefficient(p, 0)))
        previous = Matrix(f.coefficient(p - 1, 0))
        image = [previous[:, j] for j in range(previous.cols)]
        image = [image[i] for i in pivot_columns(image)]
        reps.append([cycles[i] for i in complement_indices(image, cycles)])
        images.append(image)
    for p in range(f.top_degree):
        induced = Matrix.zeros(len(reps[p + 1]), len(reps[p]))
        basis = images[p + 1] + reps[p + 1]
        for col, v in enumerate(reps[p]):
            coords = coordinates(basis, Matrix(f.coefficient(p, 1)) * v)
            for row, value in enumerate(coords[len(images[p + 1]):]):
                induced[row, col] = value
        if induced != Matrix(pg.differentials[p]):
            logger.warning(f"d_1 differs from the induced map in degree {p}")
            return False
    return True


@dataclass(frozen=True)
class LimitResult:
    dims: Tuple[int, ...]
    stabilized: bool
    stable_from: int
    pages: Tuple[SpectralPage, ...]


def page_bound(f: DeformationFamily) -> int:
    """Last page computed by limit_page."""
    if f.exact:
        return f.order * max(f.cochain_ranks, default=0) + 1
    return f.order


def limit_page(f: DeformationFamily, r_max: Optional[int] = None) -> LimitResult:
    """
    Pages 1..r_max (bounded by the truncation for series families). Stabilized when
    the last computed differentials vanish; an inconclusive result is returned, not raised.
    """
    bound = page_bound(f)
    if r_max is None:
        r_max = bound
    if not f.exact:
        r_max = min(r_max, f.order)
    pages: List[SpectralPage] = []
    for r in range(1, r_max + 1):
        pg = page(f, r)
        if pages:
            expected = page_homology(pages[-1])
            if pg.dims != expected:
                raise PageConsistencyError(page=r, dims=pg.dims, expected=expected)
        pages.append(pg)
        if not any(pg.dims):
            break
    if not pages:
        logger.warning(f"'{f.name}': truncation order {f.order} leaves no computable page")
        return LimitResult(dims=(), stabilized=False, stable_from=0, pages=())
    last = pages[-1]
    stabilized = not any(last.dims) or (
        last.r >= bound and all(d.is_zero_matrix for d in last.differentials)
    )
    stable_from = last.r
    while stable_from > 1 and pages[stable_from - 2].dims == last.dims:
        stable_from -= 1
    if not stabilized:
        logger.warning(f"'{f.name}' did not stabilize within {len(pages)} pages")
    return LimitResult(dims=last.dims, stabilized=stabilized, stable_from=stable_from, pages=tuple(pages))


def zero_family(cochain_ranks: Sequence[int], order: int = 1, name: str = "") -> DeformationFamily:
    ranks = tuple(cochain_ranks)
    coefficients = tuple(
        tuple(Matrix.zeros(ranks[p + 1], ranks[p]) for _ in range(order + 1))
        for p in range(len(ranks) - 1)
    )
    return DeformationFamily(
        base_point=Fraction(0), order=order, cochain_ranks=ranks,
        coefficients=coefficients, exact=True, name=name,
    )


def _binomial_series(
    base: Fraction, exponent: int, slope: Fraction, order: int
) -> Tuple[List[Fraction], bool]:
    """
    (base + s * slope)^exponent up to s^order; the flag tells whether nonzero
    terms beyond s^order were dropped.
    """
    if slope == 0:
        return [base**exponent] + [Fraction(0)] * order, False
    ratio = slope / base
    out = []
    for k in range(order + 1):
        if exponent >= 0:
            coeff = comb(exponent, k)
        else:
            # generalized binomial coefficient for a negative exponent
            coeff = (-1) ** k * comb(-exponent + k - 1, k)
        out.append(base**exponent * coeff * ratio**k)
    truncated = exponent < 0 or exponent > order
    return out, truncated


def _series_product(a: List[Fraction], b: List[Fraction], order: int) -> List[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(order + 1 - i):
            out[i + j] += x * b[j]
    return out


def _entry_series(
    poly: LaurentPoly, point: Sequence[Fraction], direction: Sequence[Fraction], order: int
) -> Tuple[List[Fraction], bool]:
    total = [Fraction(0)] * (order + 1)
    truncated = False
    for exps, coeff in poly.items():
        series = [coeff] + [Fraction(0)] * order
        degree = 0
        for p_j, v_j, e in zip(point, direction, exps):
            factor, cut = _binomial_series(p_j, e, v_j, order)
            truncated = truncated or cut
            if v_j != 0:
                degree += e
            series = _series_product(series, factor, order)
        truncated = truncated or degree > order
        total = [x + y for x, y in zip(total, series)]
    return total, truncated


def linearize(
    c: TwistedComplex,
    point: Sequence,
    direction: Optional[Sequence] = None,
    order: int = 4,
) -> DeformationFamily:
    """
    The family D(p + s v) obtained by substituting x_j = p_j + s v_j, every
    monomial expanded in s and cut at s^order. Exact when nothing was cut.
    """
    point = check_point(point, c.num_vars)
    direction = tuple(parse_rational(v) for v in (direction or (1,) * c.num_vars))
    if len(direction) != c.num_vars:
        raise MalformedInputError(
            f"direction has {len(direction)} coordinates, expected {c.num_vars}"
        )
    truncated = False
    coefficients = []
    for p, d in enumerate(c.coboundaries):
        per_order: Dict[int, Matrix] = {k: Matrix.zeros(d.rows, d.cols) for k in range(order + 1)}
        for (i, j), poly in d.entries():
            series, cut = _entry_series(poly, point, direction, order)
            truncated = truncated or cut
            for k, value in enumerate(series):
                per_order[k][i, j] = SympyRational(value.numerator, value.denominator)
        coefficients.append(tuple(per_order[k] for k in range(order + 1)))
    logger.info(
        f"linearized '{c.name}' at {tuple(str(v) for v in point)} to order {order}"
        + ("" if truncated else " (exact)")
    )
    return DeformationFamily(
        base_point=Fraction(0),
        order=order,
        cochain_ranks=c.cochain_ranks,
        coefficients=tuple(coefficients),
        exact=not truncated,
        name=c.name,
    )
