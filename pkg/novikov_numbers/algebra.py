"""
Exact arithmetic foundation: rationals, multivariate Laurent polynomials,
matrices over them, generic/pointwise rank engines and integer polynomials in
lambda.

Rationals are `fractions.Fraction`. Ring-level elimination is delegated to
sympy (`ring` over ZZ for fraction-free Bareiss, `DomainMatrix` / `Matrix`
over QQ for rational linear algebra); the randomized engine reduces modulo a
prime with numpy row operations.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Matrix, Rational as SympyRational
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

from .errors import (
    ExponentOverflowError,
    InvalidPointError,
    MalformedInputError,
    RangeError,
)
from .log import get_logger

logger = get_logger(__name__)

Rational = Fraction
Exponents = Tuple[int, ...]

# === Tunable constants ===
EXPONENT_LIMIT = 2**31 - 1         # exponents are machine integers, checked not wrapped
DEFAULT_PRIME = 2**31 - 1
DEFAULT_TRIALS = 3
MAX_FLOAT_EXPONENT = math.log(np.finfo(float).max)


def parse_rational(value) -> Fraction:
    """Parse "p/q" strings (or ints / Fractions). Floats are refused in exact contexts."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise MalformedInputError(f"exact value expected as 'p/q' string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise MalformedInputError(f"cannot parse rational {value!r}")


def _check_exponents(exps: Exponents) -> None:
    for e in exps:
        if not -EXPONENT_LIMIT <= e <= EXPONENT_LIMIT:
            raise ExponentOverflowError(exponent=e, limit=EXPONENT_LIMIT)


class LaurentPoly:
    """
    Element of Q[x_1^{+-1}, ..., x_l^{+-1}], stored as a lexicographically sorted
    tuple of (exponent vector, nonzero coefficient) so equality is structural.
    """

    __slots__ = ("num_vars", "_terms")

    def __init__(self, num_vars: int, terms: Optional[Mapping[Sequence[int], object]] = None):
        if num_vars < 0:
            raise MalformedInputError(f"num_vars must be >= 0, got {num_vars}")
        clean: Dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars:
                raise MalformedInputError(
                    f"exponent vector {exps} has length {len(exps)}, expected {num_vars}"
                )
            _check_exponents(exps)
            clean[exps] = clean.get(exps, Fraction(0)) + Fraction(coeff)
        self.num_vars = num_vars
        self._terms = tuple(sorted((e, c) for e, c in clean.items() if c != 0))

    @classmethod
    def zero(cls, num_vars: int) -> "LaurentPoly":
        return cls(num_vars)

    @classmethod
    def constant(cls, num_vars: int, value) -> "LaurentPoly":
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def monomial(cls, num_vars: int, exps: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(num_vars, {tuple(exps): coeff})

    @classmethod
    def variable(cls, num_vars: int, j: int) -> "LaurentPoly":
        exps = [0] * num_vars
        exps[j] = 1
        return cls.monomial(num_vars, exps)

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return dict(self._terms)

    def items(self) -> Tuple[Tuple[Exponents, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.num_vars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __hash__(self):
        return hash((self.num_vars, self._terms))

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.num_vars != self.num_vars:
                raise MalformedInputError(
                    f"inconsistent num_vars: {self.num_vars} vs {other.num_vars}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.num_vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        res = self.terms
        for e, c in other._terms:
            res[e] = res.get(e, Fraction(0)) + c
        return LaurentPoly(self.num_vars, res)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.num_vars, {e: -c for e, c in self._terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        res: Dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                res[e] = res.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(self.num_vars, res)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if power < 0:
            if len(self._terms) != 1:
                raise MalformedInputError("only monomials are units of the Laurent ring")
            (e, c), = self._terms
            return LaurentPoly.monomial(self.num_vars, [a * power for a in e], c**power)
        result = LaurentPoly.constant(self.num_vars, 1)
        for _ in range(power):
            result = result * self
        return result

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for exps, coeff in self._terms:
            value = coeff
            for x, e in zip(point, exps):
                value *= x**e
            total += value
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, coeff in reversed(self._terms):
            mono = "*".join(
                f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}" for j, e in enumerate(exps) if e
            )
            mag = abs(coeff)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self.num_vars}, {str(self)!r})"


class LaurentMatrix:
    """Sparse (coordinate list) matrix over the Laurent ring; absent entries are zero."""

    __slots__ = ("rows", "cols", "num_vars", "_entries")

    def __init__(
        self,
        rows: int,
        cols: int,
        num_vars: int,
        entries: Optional[Mapping[Tuple[int, int], LaurentPoly]] = None,
    ):
        if rows < 0 or cols < 0:
            raise MalformedInputError(f"negative matrix dimensions {rows}x{cols}")
        clean = {}
        for (i, j), poly in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise MalformedInputError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            if not isinstance(poly, LaurentPoly):
                poly = LaurentPoly.constant(num_vars, poly)
            if poly.num_vars != num_vars:
                raise MalformedInputError(
                    f"inconsistent num_vars at entry ({i}, {j}): {poly.num_vars} vs {num_vars}"
                )
            if poly:
                clean[(i, j)] = poly
        self.rows = rows
        self.cols = cols
        self.num_vars = num_vars
        self._entries = dict(sorted(clean.items()))

    @classmethod
    def zeros(cls, rows: int, cols: int, num_vars: int) -> "LaurentMatrix":
        return cls(rows, cols, num_vars)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], num_vars: int, cols: Optional[int] = None):
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise MalformedInputError(f"row {i} has {len(row)} entries, expected {cols}")
            for j, value in enumerate(row):
                entries[(i, j)] = value
        return cls(len(rows), cols, num_vars, entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, index: Tuple[int, int]) -> LaurentPoly:
        return self._entries.get(index, LaurentPoly.zero(self.num_vars))

    def entries(self) -> Iterator[Tuple[Tuple[int, int], LaurentPoly]]:
        return iter(self._entries.items())

    def to_rows(self) -> List[List[LaurentPoly]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not self._entries

    def first_nonzero(self) -> Optional[Tuple[Tuple[int, int], LaurentPoly]]:
        return next(iter(self._entries.items()), None)

    def scale_row(self, i: int, factor: LaurentPoly) -> "LaurentMatrix":
        entries = dict(self._entries)
        for (r, c), poly in self._entries.items():
            if r == i:
                entries[(r, c)] = poly * factor
        return LaurentMatrix(self.rows, self.cols, self.num_vars, entries)

    def permute(self, row_order: Sequence[int], col_order: Sequence[int]) -> "LaurentMatrix":
        """Row i of the result is row row_order[i] of self (same for columns)."""
        row_pos = {old: new for new, old in enumerate(row_order)}
        col_pos = {old: new for new, old in enumerate(col_order)}
        return LaurentMatrix(
            self.rows,
            self.cols,
            self.num_vars,
            {(row_pos[i], col_pos[j]): p for (i, j), p in self._entries.items()},
        )

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows:
            raise MalformedInputError(f"cannot multiply {self.shape} by {other.shape}")
        if self.num_vars != other.num_vars:
            raise MalformedInputError(
                f"inconsistent num_vars: {self.num_vars} vs {other.num_vars}"
            )
        by_row: Dict[int, List[Tuple[int, LaurentPoly]]] = {}
        for (k, j), poly in other._entries.items():
            by_row.setdefault(k, []).append((j, poly))
        out: Dict[Tuple[int, int], LaurentPoly] = {}
        for (i, k), left in self._entries.items():
            for j, right in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), LaurentPoly.zero(self.num_vars)) + left * right
        return LaurentMatrix(self.rows, other.cols, self.num_vars, out)

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.num_vars == other.num_vars
            and self._entries == other._entries
        )

    def __str__(self):
        if not self.rows or not self.cols:
            return f"[{self.rows}x{self.cols} empty]"
        return "\n".join("[" + ", ".join(str(p) for p in row) + "]" for row in self.to_rows())


# === Rank strategies ===
@dataclass(frozen=True)
class Randomized:
    trials: int = DEFAULT_TRIALS
    prime: int = DEFAULT_PRIME
    seed: int = 0


@dataclass(frozen=True)
class Exact:
    pass


RankStrategy = Union[Randomized, Exact]


def _integral_rows(m: LaurentMatrix) -> List[List[Dict[Exponents, int]]]:
    """
    Multiply every row by a unit monomial and by the lcm of its denominators so
    that entries become integer polynomials; the rank over the fraction field
    does not change.
    """
    rows = m.to_rows()
    out = []
    for row in rows:
        nonzero = [p for p in row if p]
        if not nonzero:
            out.append([{} for _ in row])
            continue
        mins = [
            min(e[j] for p in nonzero for e, _ in p.items()) for j in range(m.num_vars)
        ]
        den = math.lcm(*(c.denominator for p in nonzero for _, c in p.items()))
        out.append(
            [
                {tuple(a - b for a, b in zip(e, mins)): int(c * den) for e, c in p.items()}
                for p in row
            ]
        )
    return out


def _row_degree(row: List[Dict[Exponents, int]]) -> int:
    return max((sum(e) for entry in row for e in entry), default=0)


def _rational_rows_rank(rows: List[List[Fraction]], cols: int) -> int:
    if not rows or not cols:
        return 0
    dm = DomainMatrix(
        [[QQ(v.numerator, v.denominator) for v in row] for row in rows], (len(rows), cols), QQ
    )
    return dm.rank()


def _bareiss_rank(rows: List[List[Dict[Exponents, int]]], num_vars: int) -> int:
    """Fraction-free elimination in ZZ[x]; every division below is exact."""
    R, *_ = ring(",".join(f"x{j + 1}" for j in range(num_vars)), ZZ)
    a = [[R.from_dict(entry) if entry else R.zero for entry in row] for row in rows]
    m, n = len(a), len(a[0])
    rank = 0
    prev = R.one
    for col in range(n):
        if rank == m:
            break
        pivot = next((i for i in range(rank, m) if a[i][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for i in range(rank + 1, m):
            for j in range(col + 1, n):
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]).exquo(prev)
            a[i][col] = R.zero
        prev = a[rank][col]
        rank += 1
    return rank


def _eval_mod(entry: Dict[Exponents, int], residues: Sequence[int], prime: int) -> int:
    total = 0
    for exps, coeff in entry.items():
        term = coeff % prime
        for r, e in zip(residues, exps):
            term = term * pow(r, e, prime) % prime
        total += term
    return total % prime


def rank_mod_prime(matrix: Sequence[Sequence[int]], prime: int) -> int:
    """Gaussian elimination over GF(prime)."""
    dtype = np.int64 if prime < 2**31 else object
    a = np.array(matrix, dtype=dtype) % prime
    if a.ndim != 2 or 0 in a.shape:
        return 0
    m, n = a.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        pivot = rank + int(nz[0])
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        inv = pow(int(a[rank, col]), -1, prime)
        a[rank] = (a[rank] * inv) % prime
        below = a[rank + 1:, col].copy()
        a[rank + 1:] = (a[rank + 1:] - np.outer(below, a[rank])) % prime
        rank += 1
    return rank


def _draw_residues(rng: np.random.Generator, prime: int, size: int) -> List[int]:
    """Nonzero residues mod prime; past the int64 range they are cut from random bytes."""
    if prime < 2**63:
        return [int(v) for v in rng.integers(1, prime, size=size)]
    width = (prime.bit_length() + 64) // 8
    return [int.from_bytes(rng.bytes(width), "little") % (prime - 1) + 1 for _ in range(size)]


def _randomized_rank(rows, num_vars: int, strategy: Randomized) -> int:
    rng = np.random.default_rng(strategy.seed)
    full = min(len(rows), len(rows[0]))
    best = 0
    for trial in range(strategy.trials):
        residues = _draw_residues(rng, strategy.prime, num_vars)
        reduced = [[_eval_mod(entry, residues, strategy.prime) for entry in row] for row in rows]
        r = rank_mod_prime(reduced, strategy.prime)
        logger.debug(f"randomized rank trial {trial + 1}/{strategy.trials}: {r}")
        best = max(best, r)
        if best == full:
            break
    return best


def rank_generic(m: LaurentMatrix, strategy: Optional[RankStrategy] = None) -> int:
    """
    Rank over the fraction field Q(x_1, ..., x_l). Constant matrices (including
    l = 0) are ranked exactly over Q whatever the strategy.
    """
    strategy = strategy or Randomized()
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return 0
    rows = _integral_rows(m)
    if m.num_vars == 0 or all(not any(e) for row in rows for entry in row for e in entry):
        return _rational_rows_rank(
            [[Fraction(entry.get((0,) * m.num_vars, 0)) for entry in row] for row in rows], m.cols
        )
    if isinstance(strategy, Exact):
        return _bareiss_rank(rows, m.num_vars)
    return _randomized_rank(rows, m.num_vars, strategy)


def degree_bound(m: LaurentMatrix, rank: int) -> int:
    """Bound on the total degree of a nonzero rank x rank minor after row normalization."""
    if m.rows == 0 or m.cols == 0:
        return 0
    degrees = sorted((_row_degree(row) for row in _integral_rows(m)), reverse=True)
    return sum(degrees[:rank])


def failure_probability(m: LaurentMatrix, strategy: RankStrategy, rank: Optional[int] = None) -> float:
    """Schwartz-Zippel bound trials * D / (prime - 1) on a wrong randomized rank."""
    if isinstance(strategy, Exact):
        return 0.0
    if rank is None:
        rank = rank_generic(m, strategy)
    bound = degree_bound(m, rank)
    return min(1.0, strategy.trials * bound / (strategy.prime - 1))


def check_point(point: Sequence, num_vars: int) -> Tuple[Fraction, ...]:
    point = tuple(parse_rational(v) for v in point)
    if len(point) != num_vars:
        raise MalformedInputError(f"point has {len(point)} coordinates, expected {num_vars}")
    for idx, value in enumerate(point):
        if value == 0:
            raise InvalidPointError(point=tuple(str(v) for v in point), index=idx)
    return point


def substitute(m: LaurentMatrix, point: Sequence) -> List[List[Fraction]]:
    point = check_point(point, m.num_vars)
    return [[m[i, j].evaluate(point) for j in range(m.cols)] for i in range(m.rows)]


def rank_at_point(m: LaurentMatrix, point: Sequence) -> int:
    """Exact rank of the rational matrix obtained by substituting point into m."""
    return _rational_rows_rank(substitute(m, point), m.cols)


def evaluate_numeric(m: LaurentMatrix, t: float, periods: Sequence[float]) -> np.ndarray:
    """Substitute x_j = exp(-t a_j): the monomial x^k becomes exp(-t <a, k>)."""
    if len(periods) != m.num_vars:
        raise MalformedInputError(
            f"period basis has {len(periods)} entries, expected {m.num_vars}"
        )
    out = np.zeros((m.rows, m.cols), dtype=float)
    for (i, j), poly in m.entries():
        value = 0.0
        for exps, coeff in poly.items():
            exponent = -t * sum(a * k for a, k in zip(periods, exps))
            if exponent > MAX_FLOAT_EXPONENT:
                raise RangeError(t=t, exponent=exponent)
            value += float(coeff) * math.exp(exponent)
        if not math.isfinite(value):
            raise RangeError(t=t, exponent=float("inf"))
        out[i, j] = value
    return out


def companion_matrix(coefficients: Sequence) -> Tuple[Tuple[Fraction, ...], ...]:
    """
    Companion matrix of the monic polynomial c_0 + c_1 y + ... + y^k (coefficients
    given low to high); it realizes a root of that polynomial over Q.
    """
    coeffs = [parse_rational(c) for c in coefficients]
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise MalformedInputError("companion matrix needs a monic polynomial of degree >= 1")
    k = len(coeffs) - 1
    rows = [[Fraction(0)] * k for _ in range(k)]
    for i in range(1, k):
        rows[i][i - 1] = Fraction(1)
    for i in range(k):
        rows[i][k - 1] = -coeffs[i]
    return tuple(tuple(r) for r in rows)


# === Exact rational linear algebra (sympy Matrix over QQ) ===
def rational_matrix(rows: Sequence[Sequence], shape: Optional[Tuple[int, int]] = None) -> Matrix:
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    out = Matrix.zeros(*shape)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            q = parse_rational(value)
            out[i, j] = SympyRational(q.numerator, q.denominator)
    return out


def to_fractions(m: Matrix) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(
        tuple(Fraction(int(m[i, j].p), int(m[i, j].q)) for j in range(m.cols)) for i in range(m.rows)
    )


def matrix_rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return _rational_rows_rank([list(r) for r in to_fractions(m)], m.cols)


def kernel_basis(m: Matrix) -> List[Matrix]:
    """Basis of {v : m v = 0} as column vectors, in rref order."""
    if m.cols == 0:
        return []
    if m.rows == 0 or m.is_zero_matrix:
        return [Matrix.eye(m.cols)[:, j] for j in range(m.cols)]
    return m.nullspace()


def pivot_columns(vectors: Sequence[Matrix]) -> List[int]:
    """Indices of the vectors that are rref pivot columns (deterministic pivoting)."""
    if not vectors or vectors[0].rows == 0:
        return []
    _, pivots = Matrix.hstack(*vectors).rref()
    return list(pivots)


def complement_indices(sub: Sequence[Matrix], ambient: Sequence[Matrix]) -> List[int]:
    """
    Indices of `ambient` vectors completing an independent `sub` to a basis of
    span(sub) + span(ambient).
    """
    offset = len(sub)
    return [p - offset for p in pivot_columns(list(sub) + list(ambient)) if p >= offset]


def coordinates(basis: Sequence[Matrix], y: Matrix) -> List[Fraction]:
    """Unique coefficients c with sum c_i basis_i = y (basis must be independent)."""
    if not basis:
        if not y.is_zero_matrix:
            raise MalformedInputError("vector is not in the span of an empty basis")
        return []
    try:
        solution, params = Matrix.hstack(*basis).gauss_jordan_solve(y)
    except ValueError:
        raise MalformedInputError("vector is not in the span of the given basis")
    if params.shape[0]:
        raise MalformedInputError("coordinates requested in a dependent basis")
    return [Fraction(int(v.p), int(v.q)) for v in solution]


# === Integer polynomials in lambda ===
@dataclass(frozen=True)
class IntPolynomial:
    """sum coefficients[i] * lambda^i with integer coefficients, trailing zeros stripped."""

    coefficients: Tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, i: int) -> int:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return IntPolynomial(tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coefficients))
        out = [0] * max(len(self.coefficients) + len(other.coefficients) - 1, 0)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPolynomial":
        """lambda^k * self"""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * k + self.coefficients)

    def __call__(self, value):
        result = 0
        for c in reversed(self.coefficients):
            result = result * value + c
        return result

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if i == 0 else ("λ" if i == 1 else f"λ^{i}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def divide_by_one_plus_lambda(p: IntPolynomial) -> Tuple[IntPolynomial, int]:
    """Synthetic division at lambda = -1: p = (1 + lambda) q + r with r = p(-1)."""
    a = p.coefficients
    if len(a) <= 1:
        return IntPolynomial(), (a[0] if a else 0)
    n = len(a) - 1
    b = [0] * n
    b[n - 1] = a[n]
    for k in range(n - 1, 0, -1):
        b[k - 1] = a[k] - b[k]
    remainder = a[0] - b[0]
    return IntPolynomial(tuple(b)), remainder
