"""Dense spectral computations on operator truncations.

Eigenvalues come from LAPACK's Hessenberg reduction plus shifted QR
(scipy.linalg.eig); singular values from scipy.linalg.svdvals. Truncations of
non-normal operators do not reproduce the operator's spectrum (a constant
symbol slant Toeplitz truncation has spectrum {c, 0}), so pseudospectra and
reproducing-kernel residuals are provided as the finite-N evidence.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..config import settings
from ..errors import DomainError, SolverError, ValidationError
from ..schemas import SpaceParams, SweepSummary
from .operators import MONOMIAL, OperatorKind, OperatorMatrix, build_matrix
from .symbols import CoefficientSource, HarmonicSymbol, hankel_active
from .weights import check_alpha, check_slant_order, weight_table

logger = logging.getLogger(__name__)

MatrixLike = Union[OperatorMatrix, np.ndarray]
Grid = Tuple[float, float, float, float, int]


def as_array(A: MatrixLike) -> np.ndarray:
    return A.entries if isinstance(A, OperatorMatrix) else np.asarray(A, dtype=complex)


def _square(A: MatrixLike) -> np.ndarray:
    M = as_array(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {M.shape}")
    return M


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues sorted by (re, im) and the worst eigenpair residual"""

    eigenvalues: np.ndarray
    max_residual: float
    n_dim: int
    kind: Optional[OperatorKind] = None

    def summary(self, eps: float) -> SweepSummary:
        """Fraction of eigenvalues within eps of 0 and the spectral radius of the truncation"""
        moduli = np.abs(self.eigenvalues)
        count = len(moduli)
        return SweepSummary(
            n_dim=self.n_dim,
            eig_count=count,
            eps=eps,
            small_fraction=float(np.count_nonzero(moduli < eps) / count) if count else 0.0,
            max_modulus=float(moduli.max()) if count else 0.0,
            max_residual=self.max_residual,
        )


@dataclass(frozen=True)
class PseudospectrumGrid:
    """sigma_min[i, j] = sigma_min(A - (re_axis[j] + i im_axis[i]) I)"""

    re_axis: np.ndarray
    im_axis: np.ndarray
    sigma_min: np.ndarray

    def points(self):
        """(re, im, sigma_min) in row-major grid order"""
        for i, im in enumerate(self.im_axis):
            for j, re in enumerate(self.re_axis):
                yield float(re), float(im), float(self.sigma_min[i, j])


def singular_values(A: MatrixLike) -> np.ndarray:
    """Singular values in non-increasing order"""
    M = as_array(A)
    if M.size == 0:
        return np.zeros(0)
    try:
        return linalg.svdvals(M, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"singular value decomposition failed: {e}")


def operator_norm(A: MatrixLike) -> float:
    """Spectral norm, the largest singular value; shared by every diagnostic"""
    s = singular_values(A)
    return float(s[0]) if s.size else 0.0


def eigenvalues(A: MatrixLike) -> SpectrumResult:
    """
    All eigenvalues of a dense truncation

    Args:
        A: Square truncation (dimension at most settings.EIG_MAX_DIM)

    Returns:
        SpectrumResult with eigenvalues sorted by (re, im) and the largest
        residual ||A v - lambda v|| over the unit eigenvectors
    """
    M = _square(A)
    N = M.shape[0]
    if N > settings.EIG_MAX_DIM:
        raise SolverError(f"dimension {N} exceeds the dense eigen-solver limit {settings.EIG_MAX_DIM}")

    try:
        values, vectors = linalg.eig(M, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"eigenvalue iteration did not converge: {e}")
    if not np.all(np.isfinite(values)):
        raise SolverError("eigen-solver returned non-finite eigenvalues")

    residuals = np.linalg.norm(M @ vectors - vectors * values[None, :], axis=0)
    order = np.lexsort((values.imag, values.real))
    eigs = values[order]
    eigs.setflags(write=False)

    kind = A.kind if isinstance(A, OperatorMatrix) else None
    max_residual = float(residuals.max()) if N else 0.0
    logger.info(f"Computed {N} eigenvalues, max residual {max_residual:.3e}")
    return SpectrumResult(eigenvalues=eigs, max_residual=max_residual, n_dim=N, kind=kind)


def numerical_rank(A: MatrixLike, tol: float) -> int:
    """Number of singular values above tol * sigma_max"""
    if not tol > 0:
        raise ValidationError(f"rank tolerance must be positive, got {tol}")
    s = singular_values(A)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


# Reproducing kernels
def kernel_vector(w: complex, alpha: float, N: int) -> np.ndarray:
    """
    Normalized reproducing kernel at w expanded in e_0 .. e_(N-1)

    Coefficient n is (1 - |w|^2)^((2+alpha)/2) conj(w)^n / gamma_n; the squared
    norm tends to 1 as N grows.
    """
    alpha = check_alpha(alpha)
    w = complex(w)
    if not abs(w) < 1.0:
        raise DomainError(f"kernel point must lie in the open unit disc, got |w| = {abs(w)}")
    if N < 1:
        raise ValidationError(f"dimension must be at least 1, got {N}")

    powers = np.ones(N, dtype=complex)
    if N > 1:
        powers[1:] = np.cumprod(np.full(N - 1, w.conjugate()))
    L = weight_table(alpha, N - 1).log_weights
    scale = (1.0 - abs(w) ** 2) ** ((2.0 + alpha) / 2.0)
    return scale * powers * np.exp(-L)


def kernel_residual(A: OperatorMatrix, w: complex, target: complex, adjoint: bool = True) -> float:
    """
    ||(A - target I)* k_w|| (default) or ||(A - target I) k_w||

    Normalized kernels are approximate eigenvectors of the adjoint: for an
    analytic symbol, T_phi* k_w = conj(phi(w)) k_w. A small adjoint residual
    certifies target as approximate point spectrum of A*, hence target in the
    spectrum of A.
    """
    M = _square(A)
    v = kernel_vector(w, A.params.alpha, M.shape[0])
    target = complex(target)
    if adjoint:
        r = M.conj().T @ v - target.conjugate() * v
    else:
        r = M @ v - target * v
    return float(np.linalg.norm(r))


def berezin_transform(A: OperatorMatrix, w: complex) -> complex:
    """<A k_w, k_w> with the truncated normalized kernel"""
    M = _square(A)
    v = kernel_vector(w, A.params.alpha, M.shape[0])
    return complex(np.vdot(v, M @ v))


# Pseudospectra
def _axes(grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    re0, re1, im0, im1, steps = grid
    if steps < 1:
        raise ValidationError(f"grid needs at least one point per axis, got {steps}")
    return np.linspace(re0, re1, int(steps)), np.linspace(im0, im1, int(steps))


def sigma_min(A: MatrixLike, z: complex) -> float:
    """Smallest singular value of A - z I"""
    M = _square(A)
    s = singular_values(M - complex(z) * np.eye(M.shape[0]))
    return float(s[-1]) if s.size else 0.0


def pseudospectrum(A: MatrixLike, grid: Optional[Grid] = None, workers: Optional[int] = None) -> PseudospectrumGrid:
    """
    sigma_min(A - lambda I) over a rectangular grid

    Args:
        A: Square truncation (dimension at most settings.PSEUDO_MAX_DIM)
        grid: (re0, re1, im0, im1, steps); defaults to settings.GRID
        workers: Grid rows evaluated concurrently (default from settings)
    """
    M = _square(A)
    if M.shape[0] > settings.PSEUDO_MAX_DIM:
        raise SolverError(f"dimension {M.shape[0]} exceeds the pseudospectrum limit {settings.PSEUDO_MAX_DIM}")
    re_axis, im_axis = _axes(grid or settings.get_grid())
    workers = workers or settings.WORKERS

    def grid_row(im: float) -> np.ndarray:
        return np.array([sigma_min(M, complex(re, im)) for re in re_axis])

    if workers > 1 and len(im_axis) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(grid_row, im_axis))
    else:
        rows = [grid_row(im) for im in im_axis]

    logger.info(f"Pseudospectrum on {len(re_axis)}x{len(im_axis)} grid, N={M.shape[0]}")
    return PseudospectrumGrid(re_axis=re_axis, im_axis=im_axis, sigma_min=np.vstack(rows))


def pseudospectral_area(grid: PseudospectrumGrid, eps: float) -> float:
    """Area of the grid cells with sigma_min <= eps"""
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    if len(grid.re_axis) < 2 or len(grid.im_axis) < 2:
        return 0.0
    cell = (grid.re_axis[1] - grid.re_axis[0]) * (grid.im_axis[1] - grid.im_axis[0])
    return float(abs(cell) * np.count_nonzero(grid.sigma_min <= eps))


# Sweeps
def truncation_sweep(kind: OperatorKind, symbol: Optional[HarmonicSymbol], params: SpaceParams,
                     dims: Sequence[int], convention: str = MONOMIAL) -> List[SpectrumResult]:
    """Spectrum of the truncation at each dimension in dims (strictly increasing)"""
    dims = list(dims)
    if not dims:
        raise ValidationError("sweep needs at least one dimension")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValidationError(f"sweep dimensions must be strictly increasing, got {dims}")

    results = []
    for N in dims:
        A = build_matrix(kind, symbol, params.with_dim(N), convention)
        results.append(eigenvalues(A))
    return results


def hankel_entry_envelope(source: CoefficientSource, k: int, alpha: float, m_max: int, j_max: int) -> np.ndarray:
    """
    Entry-magnitude envelope of the slant little Hankel operator

    values[m] = max over km <= j <= j_max of |gamma_m gamma_j^2 / (gamma_(j-km) gamma_km^2) c_j|.
    This is the quantity whose limit points bound the spectrum; it is reported,
    not identified with the spectrum.
    """
    k = check_slant_order(k)
    alpha = check_alpha(alpha)
    coeff = hankel_active(source)
    L = weight_table(alpha, max(j_max, k * m_max)).log_weights
    values = np.zeros(m_max + 1)
    for m in range(m_max + 1):
        km = k * m
        if km > j_max:
            break
        j = np.arange(km, j_max + 1)
        c = np.abs(np.array([coeff(int(i)) for i in j], dtype=complex))
        nz = c > 0
        if np.any(nz):
            logw = L[m] + 2.0 * L[j[nz]] - L[j[nz] - km] - 2.0 * L[km]
            values[m] = float(np.max(c[nz] * np.exp(logw)))
    return values
