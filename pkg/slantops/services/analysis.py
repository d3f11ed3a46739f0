"""Algebraic diagnostics on truncations: commutators, normality, compactness
tails, finite-rank counts, sparsity and decay."""

import logging

import numpy as np

from ..errors import ValidationError
from ..schemas import CommutatorNorms, DecayProfile, TailReport
from .operators import OperatorMatrix
from .spectral import MatrixLike, as_array, operator_norm
from .symbols import CoefficientSource, hankel_active
from .weights import check_alpha, check_index, check_slant_order, weight_table

logger = logging.getLogger(__name__)

AXES = ("row", "column", "diagonal")


def commutator(A: MatrixLike, B: MatrixLike) -> np.ndarray:
    """AB - BA"""
    X, Y = as_array(A), as_array(B)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValidationError(f"commutator needs square matrices of equal size, got {X.shape} and {Y.shape}")
    return X @ Y - Y @ X


def commutator_norms(A: MatrixLike, B: MatrixLike) -> CommutatorNorms:
    """Spectral and Frobenius norms of AB - BA"""
    C = commutator(A, B)
    return CommutatorNorms(
        operator_norm=operator_norm(C),
        frobenius=float(np.linalg.norm(C, "fro")),
    )


def self_commutator_defect(A: MatrixLike) -> float:
    """||A*A - AA*||; zero exactly when the truncation is normal"""
    M = as_array(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {M.shape}")
    H = M.conj().T
    return operator_norm(H @ M - M @ H)


# Compactness
def _tail_log_weights(L: np.ndarray, j: int, k: int) -> np.ndarray:
    """log(gamma_m gamma_j^2 / (gamma_(j-km) gamma_km^2)) for 0 <= m <= j // k"""
    m = np.arange(j // k + 1)
    km = k * m
    return L[m] + 2.0 * L[j] - L[j - km] - 2.0 * L[km]


def compactness_tail(source: CoefficientSource, k: int, alpha: float, j_max: int) -> TailReport:
    """
    Tail functional of the slant little Hankel compactness criterion

    For j = 0..j_max computes sup over 0 <= m <= j/k of
    |gamma_m gamma_j^2 / (gamma_(j-km) gamma_km^2) c_j|, where c_j is the
    Hankel-active coefficient. The operator is compact when the sequence tends
    to zero.

    Args:
        source: Symbol, callable j -> c_j, or a named coefficient family
        k: Slant order
        alpha: Weight exponent
        j_max: Last index evaluated (>= 1)
    """
    k = check_slant_order(k)
    alpha = check_alpha(alpha)
    if j_max < 1:
        raise ValidationError(f"j_max must be at least 1, got {j_max}")
    coeff = hankel_active(source)
    L = weight_table(alpha, j_max).log_weights

    sup_values = []
    for j in range(j_max + 1):
        c = abs(complex(coeff(j)))
        if c == 0.0:
            sup_values.append(0.0)
            continue
        sup_values.append(float(c * np.exp(_tail_log_weights(L, j, k).max())))

    logger.info(f"Compactness tail k={k} alpha={alpha} up to j={j_max}")
    return TailReport(k=k, alpha=alpha, j_values=list(range(j_max + 1)), sup_values=sup_values)


def hilbert_schmidt_tail(source: CoefficientSource, k: int, alpha: float, n_start: int, j_max: int) -> float:
    """
    Sum of squared slant-Hankel entry magnitudes over n_start < j <= j_max,
    0 <= m <= j/k; the finite-depth form of the Hilbert-Schmidt tail bound.
    """
    k = check_slant_order(k)
    alpha = check_alpha(alpha)
    check_index(n_start, "n_start")
    coeff = hankel_active(source)
    L = weight_table(alpha, max(j_max, 0)).log_weights

    total = 0.0
    for j in range(n_start + 1, j_max + 1):
        c = abs(complex(coeff(j)))
        if c:
            total += float(np.sum(c * c * np.exp(2.0 * _tail_log_weights(L, j, k))))
    return total


# Finite rank and sparsity
def hankel_support_count(anti_degree: int, k: int, N: int) -> int:
    """Number of (m, n) with n + km <= anti_degree inside the N x N truncation"""
    check_index(anti_degree, "anti_degree")
    k = check_slant_order(k)
    if N < 1:
        raise ValidationError(f"dimension must be at least 1, got {N}")
    last_row = min(N - 1, anti_degree // k)
    return sum(min(N, anti_degree - k * m + 1) for m in range(last_row + 1))


def sparsity_ratio(A: MatrixLike, tol: float) -> float:
    """Fraction of entries with |entry| > tol"""
    if tol < 0:
        raise ValidationError(f"tolerance must be non-negative, got {tol}")
    M = as_array(A)
    if M.size == 0:
        return 0.0
    return float(np.count_nonzero(np.abs(M) > tol) / M.size)


def column_norms(A: MatrixLike) -> np.ndarray:
    """||A e_n|| for each column of the truncation"""
    return np.linalg.norm(as_array(A), axis=0)


def _diagonal_step(A: MatrixLike) -> int:
    """Row weight of the diagonal index j = n + step*m"""
    if isinstance(A, OperatorMatrix) and A.kind.is_slant:
        return A.params.k
    return 1


def decay_profile(A: MatrixLike, axis: str) -> DecayProfile:
    """
    Largest entry magnitude per row, per column, or per diagonal index

    The diagonal index is j = n + km for slant kinds and j = n + m otherwise,
    so for slant little Hankel truncations values[j] tracks |c_j| times the
    entry weights. Diagonal profiles stop at the last nonzero index.
    """
    if axis not in AXES:
        raise ValidationError(f"unknown decay axis '{axis}', expected one of {AXES}")
    M = np.abs(as_array(A))

    if axis == "row":
        values = M.max(axis=1) if M.size else np.zeros(0)
    elif axis == "column":
        values = M.max(axis=0) if M.size else np.zeros(0)
    else:
        step = _diagonal_step(A)
        rows, cols = np.indices(M.shape)
        index = (cols + step * rows).ravel()
        values = np.zeros(index.max() + 1 if index.size else 1)
        np.maximum.at(values, index, M.ravel())
        nonzero = np.nonzero(values)[0]
        values = values[: nonzero[-1] + 1] if nonzero.size else values[:1]

    return DecayProfile(axis=axis, values=[float(v) for v in values])
