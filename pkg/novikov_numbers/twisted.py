"""
Twisted cochain complexes over the Laurent ring Q[x_1^{+-1}, ..., x_l^{+-1}].

A complex is assembled from cells, boundary incidences written as signed words in
the generators of the fundamental group, a rational matrix phi(g) for every
generator and an integer exponent vector for every generator. The incidence of a
cell with one of its faces becomes the block sum(sign * x^{e(w)} * phi(w)).
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix
from tqdm import tqdm

from .algebra import (
    LaurentMatrix,
    LaurentPoly,
    RankStrategy,
    Randomized,
    failure_probability,
    parse_rational,
    rank_at_point,
    rank_generic,
    rational_matrix,
)
from .errors import (
    FlatnessViolationError,
    InconsistentRankError,
    InvalidRepresentationError,
    MalformedInputError,
)
from .log import get_logger

logger = get_logger(__name__)

TOKEN_PATTERN = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*)(\^(?P<power>-?\d+))?$")


@dataclass(frozen=True)
class TwistedComplex:
    top_degree: int
    fiber_dim: int
    num_vars: int
    cochain_ranks: Tuple[int, ...]
    coboundaries: Tuple[LaurentMatrix, ...]
    period_basis: Tuple[float, ...] = ()
    name: str = ""
    field_degree: int = 1

    def __post_init__(self):
        object.__setattr__(self, "cochain_ranks", tuple(self.cochain_ranks))
        object.__setattr__(self, "coboundaries", tuple(self.coboundaries))
        object.__setattr__(self, "period_basis", tuple(float(a) for a in self.period_basis))
        if self.top_degree < 0 or self.fiber_dim < 1 or self.field_degree < 1:
            raise MalformedInputError(
                "top_degree must be >= 0, fiber_dim and field_degree >= 1", self.name
            )
        if len(self.cochain_ranks) != self.top_degree + 1:
            raise MalformedInputError(
                f"expected {self.top_degree + 1} cochain ranks, got {len(self.cochain_ranks)}",
                self.name,
            )
        if len(self.coboundaries) != self.top_degree:
            raise MalformedInputError(
                f"expected {self.top_degree} coboundaries, got {len(self.coboundaries)}", self.name
            )
        for p, rank in enumerate(self.cochain_ranks):
            if rank < 0 or rank % self.fiber_dim:
                raise MalformedInputError(
                    f"cochain rank c_{p} = {rank} is not a multiple of fiber_dim {self.fiber_dim}",
                    self.name,
                )
        for p, d in enumerate(self.coboundaries):
            expected = (self.cochain_ranks[p + 1], self.cochain_ranks[p])
            if d.shape != expected:
                raise MalformedInputError(
                    f"D^{p} has shape {d.shape}, expected {expected}", self.name
                )
            if d.num_vars != self.num_vars:
                raise MalformedInputError(
                    f"D^{p} has {d.num_vars} variables, expected {self.num_vars}", self.name
                )
        if self.period_basis and len(self.period_basis) != self.num_vars:
            raise MalformedInputError(
                f"period_basis has {len(self.period_basis)} entries, expected {self.num_vars}",
                self.name,
            )
        for p in range(self.top_degree - 1):
            product = self.coboundaries[p + 1] @ self.coboundaries[p]
            offending = product.first_nonzero()
            if offending is not None:
                (row, col), entry = offending
                raise FlatnessViolationError(degree=p, row=row, col=col, entry=str(entry))

    @property
    def cells(self) -> Tuple[int, ...]:
        return tuple(c // self.fiber_dim for c in self.cochain_ranks)

    def coboundary(self, p: int) -> Optional[LaurentMatrix]:
        """D^p, or None outside 0..n-1 (the zero maps at both ends)."""
        if 0 <= p < self.top_degree:
            return self.coboundaries[p]
        return None


@dataclass(frozen=True)
class Generator:
    name: str
    representation: Tuple[Tuple[Fraction, ...], ...]
    exponents: Tuple[int, ...]


@dataclass(frozen=True)
class Incidence:
    """Boundary of `cell` (in `degree`) on `face` (in degree - 1): signed words."""

    degree: int
    cell: int
    face: int
    terms: Tuple[Tuple[int, Tuple[str, ...]], ...]


def parse_token(token: str) -> Tuple[str, int]:
    match = TOKEN_PATTERN.match(token.strip())
    if not match:
        raise MalformedInputError(f"cannot parse word token {token!r}")
    power = int(match.group("power")) if match.group("power") is not None else 1
    return match.group("name"), power


def _check_representation(g: Generator, fiber_dim: int, num_vars: int) -> Matrix:
    rep = g.representation
    if len(rep) != fiber_dim or any(len(row) != fiber_dim for row in rep):
        raise InvalidRepresentationError(
            generator=g.name, reason=f"expected a {fiber_dim}x{fiber_dim} matrix"
        )
    if len(g.exponents) != num_vars:
        raise MalformedInputError(
            f"generator '{g.name}' has {len(g.exponents)} exponents, expected {num_vars}"
        )
    m = rational_matrix(rep, (fiber_dim, fiber_dim))
    if m.det() == 0:
        raise InvalidRepresentationError(generator=g.name, reason="matrix is singular")
    return m


def _word_value(
    word: Sequence[str],
    phis: Mapping[str, Matrix],
    inverses: Mapping[str, Matrix],
    generators: Mapping[str, Generator],
    fiber_dim: int,
    num_vars: int,
) -> Tuple[Matrix, Tuple[int, ...]]:
    """phi(word) as the left-to-right product, and the summed exponent vector."""
    phi = Matrix.eye(fiber_dim)
    exps = [0] * num_vars
    for token in word:
        name, power = parse_token(token)
        if name not in generators:
            raise MalformedInputError(f"word uses undeclared generator '{name}'")
        base = phis[name] if power >= 0 else inverses[name]
        phi = phi * base ** abs(power)
        exps = [e + power * k for e, k in zip(exps, generators[name].exponents)]
    return phi, tuple(exps)


def build_complex(
    cell_counts: Sequence[int],
    boundaries: Sequence[Incidence],
    generators: Sequence[Generator],
    fiber_dim: int,
    num_vars: int,
    period_basis: Sequence[float] = (),
    name: str = "",
    field_degree: int = 1,
) -> TwistedComplex:
    by_name: Dict[str, Generator] = {}
    for g in generators:
        if g.name in by_name:
            raise MalformedInputError(f"generator '{g.name}' declared twice")
        by_name[g.name] = g
    phis = {g.name: _check_representation(g, fiber_dim, num_vars) for g in generators}
    inverses = {n: m.inv() for n, m in phis.items()}

    top = len(cell_counts) - 1
    if top < 0:
        raise MalformedInputError("a complex needs at least one degree of cells")
    ranks = [count * fiber_dim for count in cell_counts]
    blocks: List[Dict[Tuple[int, int], LaurentPoly]] = [{} for _ in range(top)]
    for inc in boundaries:
        if not 1 <= inc.degree <= top:
            raise MalformedInputError(f"incidence degree {inc.degree} outside 1..{top}")
        if not 0 <= inc.cell < cell_counts[inc.degree]:
            raise MalformedInputError(f"cell {inc.cell} does not exist in degree {inc.degree}")
        if not 0 <= inc.face < cell_counts[inc.degree - 1]:
            raise MalformedInputError(
                f"face {inc.face} does not exist in degree {inc.degree - 1}"
            )
        target = blocks[inc.degree - 1]
        for sign, word in inc.terms:
            if sign not in (1, -1):
                raise MalformedInputError(f"incidence sign must be +1 or -1, got {sign}")
            phi, exps = _word_value(word, phis, inverses, by_name, fiber_dim, num_vars)
            for r in range(fiber_dim):
                for s in range(fiber_dim):
                    if phi[r, s] == 0:
                        continue
                    coeff = Fraction(int(phi[r, s].p), int(phi[r, s].q)) * sign
                    key = (inc.cell * fiber_dim + r, inc.face * fiber_dim + s)
                    term = LaurentPoly.monomial(num_vars, exps, coeff)
                    target[key] = target.get(key, LaurentPoly.zero(num_vars)) + term

    coboundaries = [
        LaurentMatrix(ranks[p + 1], ranks[p], num_vars, blocks[p]) for p in range(top)
    ]
    logger.debug(f"built complex '{name}' with cochain ranks {ranks}")
    return TwistedComplex(
        top_degree=top,
        fiber_dim=fiber_dim,
        num_vars=num_vars,
        cochain_ranks=tuple(ranks),
        coboundaries=tuple(coboundaries),
        period_basis=tuple(period_basis),
        name=name,
        field_degree=field_degree,
    )


def betti_from_ranks(cochain_ranks: Sequence[int], ranks: Sequence[int]) -> Tuple[int, ...]:
    """beta_p = c_p - rank D^p - rank D^{p-1}, with zero maps at both ends."""
    n = len(cochain_ranks) - 1
    out = []
    for p, c in enumerate(cochain_ranks):
        outgoing = ranks[p] if p < n else 0
        incoming = ranks[p - 1] if p > 0 else 0
        out.append(c - outgoing - incoming)
    return tuple(out)


def generic_ranks(c: TwistedComplex, strategy: Optional[RankStrategy] = None) -> Tuple[int, ...]:
    strategy = strategy or Randomized()
    ranks = tuple(rank_generic(d, strategy) for d in c.coboundaries)
    logger.info(f"generic ranks of '{c.name}': {ranks}")
    return ranks


def novikov_numbers(c: TwistedComplex, strategy: Optional[RankStrategy] = None) -> Tuple[int, ...]:
    return betti_from_ranks(c.cochain_ranks, generic_ranks(c, strategy))


@dataclass(frozen=True)
class NovikovReport:
    name: str
    betti: Tuple[int, ...]
    ranks: Tuple[int, ...]
    euler_characteristic: int
    field_degree: int
    strategy: str
    failure_probability: float

    @property
    def field_betti(self) -> Tuple[Fraction, ...]:
        return normalize_dims(self.betti, self.field_degree)


def novikov_report(c: TwistedComplex, strategy: Optional[RankStrategy] = None) -> NovikovReport:
    """Novikov numbers together with the union bound on a randomized-rank failure."""
    strategy = strategy or Randomized()
    ranks = generic_ranks(c, strategy)
    bound = min(
        1.0, sum(failure_probability(d, strategy, r) for d, r in zip(c.coboundaries, ranks))
    )
    return NovikovReport(
        name=c.name,
        betti=betti_from_ranks(c.cochain_ranks, ranks),
        ranks=ranks,
        euler_characteristic=euler_characteristic(c),
        field_degree=c.field_degree,
        strategy=type(strategy).__name__.lower(),
        failure_probability=bound,
    )


def dimensions_at(c: TwistedComplex, point: Sequence) -> Tuple[int, ...]:
    point = tuple(parse_rational(v) for v in point)
    ranks = tuple(rank_at_point(d, point) for d in c.coboundaries)
    logger.debug(f"ranks of '{c.name}' at {tuple(str(v) for v in point)}: {ranks}")
    return betti_from_ranks(c.cochain_ranks, ranks)


def normalize_dims(dims: Sequence[int], field_degree: int) -> Tuple[Fraction, ...]:
    """Q-dimensions of a companion-fiber complex divided by [Q(eta):Q]."""
    return tuple(Fraction(d, field_degree) for d in dims)


@dataclass(frozen=True)
class ProbeResult:
    point: Tuple[Fraction, ...]
    dims: Tuple[int, ...]
    jumps: Tuple[bool, ...]

    @property
    def is_jump(self) -> bool:
        return any(self.jumps)


@dataclass(frozen=True)
class JumpScanReport:
    background: Tuple[int, ...]
    probes: Tuple[ProbeResult, ...] = field(default_factory=tuple)
    field_degree: int = 1

    @property
    def jump_points(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(probe.point for probe in self.probes if probe.is_jump)


def jump_scan(
    c: TwistedComplex,
    probe_points: Sequence[Sequence],
    strategy: Optional[RankStrategy] = None,
) -> JumpScanReport:
    background = novikov_numbers(c, strategy)
    probes = []
    for raw in tqdm(probe_points, desc="Probing", disable=None, leave=False):
        point = tuple(parse_rational(v) for v in raw)
        dims = dimensions_at(c, point)
        for p, (dim, base) in enumerate(zip(dims, background)):
            if dim < base:
                raise InconsistentRankError(
                    degree=p,
                    probe_dim=dim,
                    background=base,
                    point=tuple(str(v) for v in point),
                )
        jumps = tuple(dim > base for dim, base in zip(dims, background))
        if any(jumps):
            logger.info(f"jump at {tuple(str(v) for v in point)}: {dims} vs background {background}")
        probes.append(ProbeResult(point=point, dims=dims, jumps=jumps))
    return JumpScanReport(background=background, probes=tuple(probes), field_degree=c.field_degree)


def euler_characteristic(c: TwistedComplex) -> int:
    return sum((-1) ** p * rank for p, rank in enumerate(c.cochain_ranks))


def forget_twisting(c: TwistedComplex) -> TwistedComplex:
    """Set every x_j = 1: the complex of the fiber local system alone, with no variables."""
    ones = (Fraction(1),) * c.num_vars

    def untwist(poly: LaurentPoly) -> LaurentPoly:
        return LaurentPoly.constant(0, poly.evaluate(ones))

    coboundaries = tuple(
        LaurentMatrix(d.rows, d.cols, 0, {idx: untwist(p) for idx, p in d.entries()})
        for d in c.coboundaries
    )
    return TwistedComplex(
        top_degree=c.top_degree,
        fiber_dim=c.fiber_dim,
        num_vars=0,
        cochain_ranks=c.cochain_ranks,
        coboundaries=coboundaries,
        name=f"{c.name} (untwisted)" if c.name else "",
        field_degree=c.field_degree,
    )
