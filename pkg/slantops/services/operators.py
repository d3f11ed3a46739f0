"""Finite truncations of Toeplitz, little Hankel, slant-shift, slant Toeplitz
and slant little Hankel operators on the weighted Bergman space.

Entry (m, n) of every matrix is <A e_n, e_m> for 0 <= m, n < N, i.e. the
compression P_N A P_N with no boundary correction.

Slant-shift conventions:
    monomial    W_k z^p = z^(p/k) when k | p   (default; reproduces all entry formulas)
    normalized  W_k e_p = e_(p/k) when k | p   (unit columns, ||W_k|| = 1)
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..config import settings
from ..errors import ValidationError
from ..schemas import SpaceParams
from .symbols import HarmonicSymbol
from .weights import (
    check_alpha,
    check_index,
    check_slant_order,
    log_weight_ratio,
    weight_table,
)

logger = logging.getLogger(__name__)

MONOMIAL = "monomial"
NORMALIZED = "normalized"
CONVENTIONS = (MONOMIAL, NORMALIZED)


class OperatorKind(str, Enum):
    TOEPLITZ = "Toeplitz"
    LITTLE_HANKEL = "LittleHankel"
    SLANT_SHIFT = "SlantShift"
    SLANT_SHIFT_ADJOINT = "SlantShiftAdjoint"
    SLANT_TOEPLITZ = "SlantToeplitz"
    SLANT_LITTLE_HANKEL = "SlantLittleHankel"

    @property
    def requires_symbol(self) -> bool:
        return self not in (OperatorKind.SLANT_SHIFT, OperatorKind.SLANT_SHIFT_ADJOINT)

    @property
    def is_slant(self) -> bool:
        return self not in (OperatorKind.TOEPLITZ, OperatorKind.LITTLE_HANKEL)

    @classmethod
    def parse(cls, tag: str) -> "OperatorKind":
        """Accept the canonical tag or a short alias (T, H, W, Wstar, B, S)"""
        key = tag.strip()
        if key in KIND_ALIASES:
            return KIND_ALIASES[key]
        for kind in cls:
            if kind.value.lower() == key.lower():
                return kind
        raise ValidationError(f"unknown operator kind '{tag}'")


KIND_ALIASES: Dict[str, OperatorKind] = {
    "T": OperatorKind.TOEPLITZ,
    "H": OperatorKind.LITTLE_HANKEL,
    "W": OperatorKind.SLANT_SHIFT,
    "Wstar": OperatorKind.SLANT_SHIFT_ADJOINT,
    "B": OperatorKind.SLANT_TOEPLITZ,
    "S": OperatorKind.SLANT_LITTLE_HANKEL,
}


def check_convention(convention: str) -> str:
    if convention not in CONVENTIONS:
        raise ValidationError(f"unknown slant-shift convention '{convention}', expected one of {CONVENTIONS}")
    return convention


def check_symbol(kind: OperatorKind, symbol) -> None:
    if kind.requires_symbol and symbol is None:
        raise ValidationError(f"{kind.value} requires a symbol")
    if not kind.requires_symbol and symbol is not None:
        raise ValidationError(f"{kind.value} does not take a symbol")


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense N x N truncation with provenance"""

    kind: OperatorKind
    params: SpaceParams
    entries: np.ndarray
    convention: str = MONOMIAL
    symbol: Optional[HarmonicSymbol] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def entry(self, m: int, n: int) -> complex:
        return complex(self.entries[m, n])

    def conj_transpose(self) -> np.ndarray:
        return self.entries.conj().T


# Scalar entry formulas
def _ratio(p: int, q: int, alpha: float) -> float:
    """gamma_p / gamma_q with alpha already validated"""
    if p == q:
        return 1.0
    return float(np.exp(log_weight_ratio(p, q, alpha)))


def _slant_factor(m: int, k: int, alpha: float, convention: str) -> float:
    """Extra factor turning a monomial-convention slant entry into the requested convention"""
    if convention == NORMALIZED:
        return _ratio(k * m, m, alpha)
    return 1.0


def toeplitz_entry(m: int, n: int, s: HarmonicSymbol, alpha: float) -> complex:
    """(gamma_n/gamma_m) a_(n-m) when n >= m, (gamma_m/gamma_n) b_(m-n) otherwise"""
    alpha = check_alpha(alpha)
    m, n = check_index(m, "m"), check_index(n, "n")
    if n >= m:
        c = s.a(n - m)
        return c * _ratio(n, m, alpha) if c else 0j
    c = s.b(m - n)
    return c * _ratio(m, n, alpha) if c else 0j


def hankel_entry(m: int, n: int, s: HarmonicSymbol, alpha: float) -> complex:
    """(gamma_(n+m)^2 / (gamma_n gamma_m)) a_(n+m); only the anti part enters"""
    alpha = check_alpha(alpha)
    m, n = check_index(m, "m"), check_index(n, "n")
    c = s.a(n + m)
    if not c:
        return 0j
    return c * _ratio(n + m, n, alpha) * _ratio(n + m, m, alpha)


def slant_shift_entry(m: int, n: int, k: int, alpha: float, convention: str = MONOMIAL) -> float:
    """gamma_m/gamma_(km) (monomial) or 1 (normalized) when n = km, else 0"""
    check_convention(convention)
    alpha = check_alpha(alpha)
    k = check_slant_order(k)
    m, n = check_index(m, "m"), check_index(n, "n")
    if n != k * m:
        return 0.0
    if convention == NORMALIZED:
        return 1.0
    return _ratio(m, k * m, alpha)


def slant_toeplitz_entry(m: int, n: int, s: HarmonicSymbol, k: int, alpha: float,
                         convention: str = MONOMIAL) -> complex:
    """(gamma_m gamma_n / gamma_(km)^2) a_(n-km) when n >= km, (gamma_m/gamma_n) b_(km-n) otherwise"""
    check_convention(convention)
    alpha = check_alpha(alpha)
    k = check_slant_order(k)
    m, n = check_index(m, "m"), check_index(n, "n")
    km = k * m
    if n >= km:
        c = s.a(n - km)
        value = c * _ratio(m, km, alpha) * _ratio(n, km, alpha) if c else 0j
    else:
        c = s.b(km - n)
        value = c * _ratio(m, n, alpha) if c else 0j
    return value * _slant_factor(m, k, alpha, convention)


def slant_hankel_entry(m: int, n: int, s: HarmonicSymbol, k: int, alpha: float,
                       convention: str = MONOMIAL) -> complex:
    """(gamma_m gamma_(n+km)^2 / (gamma_n gamma_(km)^2)) a_(n+km)"""
    check_convention(convention)
    alpha = check_alpha(alpha)
    k = check_slant_order(k)
    m, n = check_index(m, "m"), check_index(n, "n")
    km = k * m
    j = n + km
    c = s.a(j)
    if not c:
        return 0j
    value = c * _ratio(m, km, alpha) * _ratio(j, n, alpha) * _ratio(j, km, alpha)
    return value * _slant_factor(m, k, alpha, convention)


def slant_hankel_closed_form(m: int, n: int, s: HarmonicSymbol) -> complex:
    """Closed form of the slant little Hankel entry for alpha = 1, k = 2"""
    j = n + 2 * m
    weight = ((2 * m + 1) * (2 * m + 2)) / ((j + 1) * (j + 2))
    weight *= np.sqrt(((n + 1) * (n + 2)) / ((m + 1) * (m + 2)))
    return complex(weight * s.a(j))


def entry(kind: OperatorKind, m: int, n: int, symbol: Optional[HarmonicSymbol],
          params: SpaceParams, convention: str = MONOMIAL) -> complex:
    """Dispatch to the scalar entry formula for kind"""
    check_symbol(kind, symbol)
    if kind == OperatorKind.TOEPLITZ:
        return toeplitz_entry(m, n, symbol, params.alpha)
    if kind == OperatorKind.LITTLE_HANKEL:
        return hankel_entry(m, n, symbol, params.alpha)
    if kind == OperatorKind.SLANT_SHIFT:
        return complex(slant_shift_entry(m, n, params.k, params.alpha, convention))
    if kind == OperatorKind.SLANT_SHIFT_ADJOINT:
        return complex(slant_shift_entry(n, m, params.k, params.alpha, convention))
    if kind == OperatorKind.SLANT_TOEPLITZ:
        return slant_toeplitz_entry(m, n, symbol, params.k, params.alpha, convention)
    return slant_hankel_entry(m, n, symbol, params.k, params.alpha, convention)


# Matrix assembly
def _fill(row: np.ndarray, cols: np.ndarray, coefs: np.ndarray, log_weights: np.ndarray) -> None:
    """row[cols] = coefs * exp(log_weights), evaluated only where coefs != 0"""
    nz = np.nonzero(coefs)[0]
    if nz.size:
        row[cols[nz]] = coefs[nz] * np.exp(log_weights[nz])


def _row_builder(kind: OperatorKind, symbol: Optional[HarmonicSymbol], params: SpaceParams,
                 convention: str) -> Callable[[int], np.ndarray]:
    N, k = params.dim, params.k
    size = (k + 1) * N + 1
    L = weight_table(params.alpha, size).log_weights
    a = symbol.anti_array(size) if symbol is not None else None
    b = symbol.analytic_array(size) if symbol is not None else None
    cols = np.arange(N)
    normalized = convention == NORMALIZED

    def toeplitz(m: int) -> np.ndarray:
        row = np.zeros(N, dtype=complex)
        up, low = cols[m:], cols[:m]
        _fill(row, up, a[up - m], L[up] - L[m])
        _fill(row, low, b[m - low], L[m] - L[low])
        return row

    def hankel(m: int) -> np.ndarray:
        row = np.zeros(N, dtype=complex)
        j = cols + m
        _fill(row, cols, a[j], 2.0 * L[j] - L[cols] - L[m])
        return row

    def slant_shift(m: int) -> np.ndarray:
        row = np.zeros(N, dtype=complex)
        km = k * m
        if km < N:
            row[km] = 1.0 if normalized else np.exp(L[m] - L[km])
        return row

    def slant_shift_adjoint(r: int) -> np.ndarray:
        row = np.zeros(N, dtype=complex)
        if r % k == 0:
            n = r // k
            row[n] = 1.0 if normalized else np.exp(L[n] - L[r])
        return row

    def slant_toeplitz(m: int) -> np.ndarray:
        row = np.zeros(N, dtype=complex)
        km = k * m
        shift = L[km] - L[m] if normalized else 0.0
        up = cols[cols >= km]
        low = cols[cols < km]
        _fill(row, up, a[up - km], L[m] + L[up] - 2.0 * L[km] + shift)
        _fill(row, low, b[km - low], L[m] - L[low] + shift)
        return row

    def slant_hankel(m: int) -> np.ndarray:
        row = np.zeros(N, dtype=complex)
        km = k * m
        shift = L[km] - L[m] if normalized else 0.0
        j = cols + km
        _fill(row, cols, a[j], L[m] + 2.0 * L[j] - L[cols] - 2.0 * L[km] + shift)
        return row

    return {
        OperatorKind.TOEPLITZ: toeplitz,
        OperatorKind.LITTLE_HANKEL: hankel,
        OperatorKind.SLANT_SHIFT: slant_shift,
        OperatorKind.SLANT_SHIFT_ADJOINT: slant_shift_adjoint,
        OperatorKind.SLANT_TOEPLITZ: slant_toeplitz,
        OperatorKind.SLANT_LITTLE_HANKEL: slant_hankel,
    }[kind]


def build_matrix(kind: OperatorKind, symbol: Optional[HarmonicSymbol], params: SpaceParams,
                 convention: str = MONOMIAL, workers: Optional[int] = None) -> OperatorMatrix:
    """
    Assemble the N x N truncation of an operator

    Rows are computed independently, so the result is bit-identical for any
    worker count.

    Args:
        kind: Operator kind
        symbol: Harmonic symbol; required for every kind except the slant shifts
        params: alpha, k and truncation dimension
        convention: Slant-shift convention ('monomial' or 'normalized')
        workers: Row-parallel worker threads (default from settings)

    Returns:
        The truncation as an immutable OperatorMatrix
    """
    kind = OperatorKind(kind)
    check_symbol(kind, symbol)
    check_convention(convention)
    workers = workers or settings.WORKERS

    build_row = _row_builder(kind, symbol, params, convention)
    if workers > 1 and params.dim > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(build_row, range(params.dim)))
    else:
        rows = [build_row(m) for m in range(params.dim)]

    entries = np.vstack(rows)
    entries.setflags(write=False)
    logger.info(f"Built {kind.value} truncation N={params.dim} alpha={params.alpha} k={params.k} ({convention})")
    return OperatorMatrix(kind=kind, params=params, entries=entries, convention=convention, symbol=symbol)


def adjoint(A: OperatorMatrix) -> np.ndarray:
    """Conjugate transpose of the truncation, i.e. the truncation of A*"""
    return A.conj_transpose()


def weight_similarity(A: OperatorMatrix) -> np.ndarray:
    """D A D^-1 with D = diag(gamma_0 .. gamma_(N-1))"""
    L = weight_table(A.params.alpha, A.dim).log_weights[:A.dim]
    return np.exp(L)[:, None] * A.entries * np.exp(-L)[None, :]


def support(A: OperatorMatrix, tol: float = 0.0) -> List[Tuple[int, int]]:
    """Row-major list of (m, n) with |entry| > tol"""
    rows, cols = np.nonzero(np.abs(A.entries) > tol)
    return list(zip(rows.tolist(), cols.tolist()))


# Export
def matrix_to_csv_rows(A: OperatorMatrix) -> List[Tuple[int, int, float, float]]:
    """Entries with |entry| > 0 in row-major order as (m, n, re, im)"""
    return [
        (m, n, float(A.entries[m, n].real), float(A.entries[m, n].imag))
        for m, n in support(A)
    ]


def matrix_to_json(A: OperatorMatrix) -> dict:
    return {
        "kind": A.kind.value,
        "alpha": A.params.alpha,
        "k": A.params.k,
        "n_dim": A.dim,
        "convention": A.convention,
        "entries": [[float(z.real), float(z.imag)] for z in A.entries.ravel()],
    }
