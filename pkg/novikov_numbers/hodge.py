"""
Numeric deformed Laplacians along the twisting curve x_j = exp(-s a_j), their
spectra and counting function, the kernel-versus-exact cross check, and matrix
checks of the IMS localization identity and the rank-perturbation bound.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import eigvalsh, svdvals
from scipy.stats import ortho_group
from tqdm import tqdm

from .algebra import RankStrategy, evaluate_numeric
from .errors import InvalidCutoffError, MalformedInputError, NumericalConsistencyError
from .log import get_logger
from .twisted import TwistedComplex, novikov_numbers

logger = get_logger(__name__)

# === Tunable constants ===
DEFAULT_EPSILON = 1e-8
SEPARATION_FACTOR = 10.0
SYMMETRY_TOLERANCE = 1e-10
FLATNESS_TOLERANCE = 1e-8

MATCH = "match"
JUMP = "jump"
MISMATCH = "mismatch"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class NumericComplex:
    coboundaries: Tuple[np.ndarray, ...]
    cochain_ranks: Tuple[int, ...]
    weights: Tuple[np.ndarray, ...] = field(default_factory=tuple)
    parameter: float = 0.0
    periods: Tuple[float, ...] = ()
    flatness_residual: float = 0.0

    def __post_init__(self):
        ranks = tuple(self.cochain_ranks)
        object.__setattr__(self, "cochain_ranks", ranks)
        object.__setattr__(
            self, "coboundaries", tuple(np.asarray(d, dtype=float) for d in self.coboundaries)
        )
        if len(self.coboundaries) != len(ranks) - 1:
            raise MalformedInputError(
                f"{len(ranks)} cochain groups need {len(ranks) - 1} coboundaries"
            )
        for p, d in enumerate(self.coboundaries):
            if d.shape != (ranks[p + 1], ranks[p]):
                raise MalformedInputError(
                    f"D^{p} has shape {d.shape}, expected {(ranks[p + 1], ranks[p])}"
                )
        weights = self.weights or tuple(np.ones(c) for c in ranks)
        weights = tuple(np.asarray(w, dtype=float) for w in weights)
        for p, w in enumerate(weights):
            if w.shape != (ranks[p],) or np.any(w <= 0):
                raise MalformedInputError(f"weights of degree {p} must be {ranks[p]} positive reals")
        object.__setattr__(self, "weights", weights)
        residual = max(
            (
                float(np.linalg.norm(self.coboundaries[p + 1] @ self.coboundaries[p]))
                for p in range(len(self.coboundaries) - 1)
            ),
            default=0.0,
        )
        object.__setattr__(self, "flatness_residual", residual)
        if residual > FLATNESS_TOLERANCE:
            logger.warning(f"numeric flatness residual {residual:.3e} at parameter {self.parameter}")

    @property
    def top_degree(self) -> int:
        return len(self.cochain_ranks) - 1

    def coboundary(self, p: int) -> np.ndarray:
        if 0 <= p < self.top_degree:
            return self.coboundaries[p]
        rows = self.cochain_ranks[p + 1] if 0 <= p + 1 <= self.top_degree else 0
        cols = self.cochain_ranks[p] if 0 <= p <= self.top_degree else 0
        return np.zeros((rows, cols))

    def weight(self, p: int) -> np.ndarray:
        if 0 <= p <= self.top_degree:
            return self.weights[p]
        return np.ones(0)


def evaluate_complex(
    c: TwistedComplex,
    t: float,
    alpha: float = 1.0,
    weights: Optional[Sequence[Sequence[float]]] = None,
) -> NumericComplex:
    """Coboundaries at x_j = exp(-s a_j) with s = t * alpha."""
    if c.num_vars and not c.period_basis:
        raise MalformedInputError("numeric evaluation needs a period_basis", c.name)
    s = t * alpha
    coboundaries = tuple(evaluate_numeric(d, s, c.period_basis) for d in c.coboundaries)
    return NumericComplex(
        coboundaries=coboundaries,
        cochain_ranks=c.cochain_ranks,
        weights=tuple(weights) if weights else (),
        parameter=s,
        periods=c.period_basis,
    )


def _normalized_coboundary(nc: NumericComplex, p: int) -> np.ndarray:
    """W_{p+1}^{1/2} D^p W_p^{-1/2}: D^p in orthonormal coordinates for the weights."""
    d = nc.coboundary(p)
    return np.sqrt(nc.weight(p + 1))[:, None] * d / np.sqrt(nc.weight(p))[None, :]


def laplacian_matrix(nc: NumericComplex, p: int) -> np.ndarray:
    """
    The deformed Laplacian D^{p*} D^p + D^{p-1} D^{p-1*} (adjoints for the weight
    inner products), conjugated by W_p^{1/2} so that it is a symmetric matrix.
    """
    if not 0 <= p <= nc.top_degree:
        raise MalformedInputError(f"degree {p} outside 0..{nc.top_degree}")
    outgoing = _normalized_coboundary(nc, p)
    incoming = _normalized_coboundary(nc, p - 1)
    return outgoing.T @ outgoing + incoming @ incoming.T


@dataclass(frozen=True)
class DegreeSpectrum:
    degree: int
    eigenvalues: Tuple[float, ...]
    epsilon: float
    kernel_dim: int
    conclusive: bool


@dataclass(frozen=True)
class SpectrumReport:
    parameter: float
    periods: Tuple[float, ...]
    epsilon: float
    degrees: Tuple[DegreeSpectrum, ...]

    @property
    def kernel_dims(self) -> Tuple[int, ...]:
        return tuple(d.kernel_dim for d in self.degrees)

    @property
    def conclusive(self) -> bool:
        return all(d.conclusive for d in self.degrees)


def laplacian_spectrum(nc: NumericComplex, p: int, epsilon: float = DEFAULT_EPSILON) -> DegreeSpectrum:
    lap = laplacian_matrix(nc, p)
    scale = max(1.0, float(np.linalg.norm(lap)))
    residual = float(np.linalg.norm(lap - lap.T)) / scale
    if residual > SYMMETRY_TOLERANCE:
        raise NumericalConsistencyError(
            what=f"Laplacian of degree {p}", residual=residual, tolerance=SYMMETRY_TOLERANCE
        )
    if lap.shape[0] == 0:
        return DegreeSpectrum(p, (), epsilon, 0, True)
    eigenvalues = np.sort(eigvalsh((lap + lap.T) / 2))
    if eigenvalues[0] < -epsilon:
        raise NumericalConsistencyError(
            what=f"negative eigenvalue of the degree {p} Laplacian",
            residual=float(-eigenvalues[0]),
            tolerance=epsilon,
        )
    kernel_dim = int(np.count_nonzero(eigenvalues <= epsilon))
    conclusive = kernel_dim == len(eigenvalues) or (
        eigenvalues[kernel_dim] >= SEPARATION_FACTOR * epsilon
    )
    if not conclusive:
        logger.warning(
            f"degree {p} at s={nc.parameter}: eigenvalue {eigenvalues[kernel_dim]:.3e} "
            f"is not separated from the threshold {epsilon:.1e}"
        )
    return DegreeSpectrum(
        degree=p,
        eigenvalues=tuple(float(v) for v in eigenvalues),
        epsilon=epsilon,
        kernel_dim=kernel_dim,
        conclusive=bool(conclusive),
    )


def spectrum_report(nc: NumericComplex, epsilon: float = DEFAULT_EPSILON) -> SpectrumReport:
    return SpectrumReport(
        parameter=nc.parameter,
        periods=nc.periods,
        epsilon=epsilon,
        degrees=tuple(laplacian_spectrum(nc, p, epsilon) for p in range(nc.top_degree + 1)),
    )


def counting_function(spectrum: Union[DegreeSpectrum, Sequence[float]], lam: float) -> int:
    """N(lambda, A): eigenvalues not exceeding lambda, with multiplicity."""
    eigenvalues = spectrum.eigenvalues if isinstance(spectrum, DegreeSpectrum) else spectrum
    return int(np.count_nonzero(np.asarray(eigenvalues, dtype=float) <= lam))


@dataclass(frozen=True)
class KernelCell:
    s: float
    degree: int
    kernel_dim: int
    background: int
    status: str


def compare_kernels(s: float, report: SpectrumReport, background: Sequence[int]) -> Tuple[KernelCell, ...]:
    """Classify each degree of one spectrum against the Novikov numbers."""
    cells = []
    for spectrum, base in zip(report.degrees, background):
        if not spectrum.conclusive:
            status = INCONCLUSIVE
        elif spectrum.kernel_dim == base:
            status = MATCH
        elif spectrum.kernel_dim > base:
            status = JUMP
        else:
            status = MISMATCH
        cells.append(KernelCell(s, spectrum.degree, spectrum.kernel_dim, base, status))
    logger.debug(f"s={s}: kernel dims {report.kernel_dims} vs background {tuple(background)}")
    return tuple(cells)


def kernel_vs_exact(
    c: TwistedComplex,
    s_values: Sequence[float],
    epsilon: float = DEFAULT_EPSILON,
    strategy: Optional[RankStrategy] = None,
) -> Tuple[KernelCell, ...]:
    background = novikov_numbers(c, strategy)
    cells: List[KernelCell] = []
    for s in tqdm(s_values, desc="Sweeping s", disable=None, leave=False):
        cells.extend(compare_kernels(s, spectrum_report(evaluate_complex(c, s), epsilon), background))
    return tuple(cells)


def numeric_rank(nc: NumericComplex, p: int, epsilon: float = DEFAULT_EPSILON) -> int:
    """Singular values whose squares exceed epsilon, the scale on which Laplacian kernels are read."""
    d = _normalized_coboundary(nc, p)
    if 0 in d.shape:
        return 0
    return int(np.count_nonzero(svdvals(d) ** 2 > epsilon))


def hodge_consistency(nc: NumericComplex, epsilon: float = DEFAULT_EPSILON) -> Tuple[bool, ...]:
    """Per degree: dim ker Laplacian == c_p - rank D^p - rank D^{p-1}."""
    out = []
    for p in range(nc.top_degree + 1):
        spectrum = laplacian_spectrum(nc, p, epsilon)
        expected = (
            nc.cochain_ranks[p] - numeric_rank(nc, p, epsilon) - numeric_rank(nc, p - 1, epsilon)
        )
        out.append(spectrum.kernel_dim == expected)
    return tuple(out)


def supersymmetry_residual(nc: NumericComplex, p: int, tolerance: float = 1e-12) -> float:
    """
    Largest relative gap between the nonzero spectra of D^{p*} D^p and D^p D^{p*};
    infinite when the nonzero multiplicities differ.
    """
    d = _normalized_coboundary(nc, p)
    if 0 in d.shape:
        return 0.0
    left = eigvalsh(d.T @ d)
    right = eigvalsh(d @ d.T)
    cutoff = tolerance * max(1.0, float(np.max(np.abs(left))), float(np.max(np.abs(right))))
    left = np.sort(left[left > cutoff])
    right = np.sort(right[right > cutoff])
    if len(left) != len(right):
        return float("inf")
    if not len(left):
        return 0.0
    return float(np.max(np.abs(left - right) / np.maximum(1.0, np.abs(left))))


def _commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def ims_identity_residual(H: np.ndarray, j: Sequence[float]) -> float:
    """
    Operator norm of H - (Jb H Jb + J H J + [Jb,[Jb,H]]/2 + [J,[J,H]]/2) for
    J = diag(j), Jb = diag(sqrt(1 - j^2)).
    """
    H = np.asarray(H, dtype=float)
    j = np.asarray(j, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or j.shape != (H.shape[0],):
        raise MalformedInputError(f"cutoff of length {j.shape} does not fit H of shape {H.shape}")
    for index, value in enumerate(j):
        if not 0.0 <= value <= 1.0:
            raise InvalidCutoffError(index=index, value=float(value))
    J = np.diag(j)
    Jb = np.diag(np.sqrt(1.0 - j**2))
    split = (
        Jb @ H @ Jb
        + J @ H @ J
        + 0.5 * _commutator(Jb, _commutator(Jb, H))
        + 0.5 * _commutator(J, _commutator(J, H))
    )
    return float(np.linalg.norm(H - split, 2))


@dataclass(frozen=True)
class RankPerturbationResult:
    hypothesis_met: bool
    min_eigenvalue: float
    count: int
    rank_b: int
    holds: bool


def rank_perturbation_check(
    A: np.ndarray, B: np.ndarray, mu: float, epsilon: float = DEFAULT_EPSILON, tol: float = 1e-9
) -> RankPerturbationResult:
    """If A + B >= mu then N(mu - epsilon, A) <= rank B; hypothesis failures are reported."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise MalformedInputError(f"A {A.shape} and B {B.shape} must be square of equal size")
    min_eigenvalue = float(eigvalsh(A + B)[0])
    count = counting_function(eigvalsh(A), mu - epsilon)
    b_eigenvalues = np.abs(eigvalsh(B))
    rank_b = int(np.count_nonzero(b_eigenvalues > tol * max(1.0, float(b_eigenvalues.max()))))
    hypothesis_met = min_eigenvalue >= mu - tol
    if not hypothesis_met:
        logger.info(f"hypothesis not met: lambda_min(A + B) = {min_eigenvalue:.6g} < {mu}")
    return RankPerturbationResult(
        hypothesis_met=hypothesis_met,
        min_eigenvalue=min_eigenvalue,
        count=count,
        rank_b=rank_b,
        holds=hypothesis_met and count <= rank_b,
    )


def planted_instance(
    rng: np.random.Generator, n: int, k: int, mu: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    A with k eigenvalues below mu and B of rank k lifting exactly those, in a
    common random orthonormal basis, so that A + B >= mu.
    """
    if not 0 <= k <= n or n < 2:
        raise MalformedInputError(f"need n >= 2 and 0 <= k <= n, got n={n}, k={k}")
    Q = ortho_group.rvs(dim=n, random_state=rng)
    low = rng.uniform(0.0, mu / 2, size=k)
    high = mu + rng.uniform(0.0, mu, size=n - k)
    a = np.concatenate([low, high])
    b = np.concatenate([mu - low + rng.uniform(0.0, 1.0, size=k), np.zeros(n - k)])
    A = Q @ np.diag(a) @ Q.T
    B = Q @ np.diag(b) @ Q.T
    return (A + A.T) / 2, (B + B.T) / 2
