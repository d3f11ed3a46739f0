"""Construction and eigen-solve timings of operator truncations."""

import logging
import time
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..config import settings
from ..errors import ValidationError
from ..schemas import BenchRecord, SpaceParams
from .analysis import sparsity_ratio
from .operators import MONOMIAL, OperatorKind, build_matrix
from .spectral import eigenvalues
from .symbols import HarmonicSymbol, harmonic_exponential

logger = logging.getLogger(__name__)

# complex128
ENTRY_BYTES = 16

DEFAULT_KINDS = (OperatorKind.SLANT_TOEPLITZ, OperatorKind.SLANT_LITTLE_HANKEL)
DEFAULT_DEGREE = 15


def default_symbol() -> HarmonicSymbol:
    """e^z + e^conj(z) - 1 truncated at degree 15"""
    return harmonic_exponential(DEFAULT_DEGREE)


class BenchService:
    """
    Times construction and eigen-solves of operator truncations

    Repetitions and the stored-entry threshold come from settings unless a
    call overrides them.
    """

    def __init__(self):
        self.reps = settings.BENCH_REPS
        self.zero_tol = settings.ZERO_TOL

    def median_time(self, fn: Callable[[], object], reps: Optional[int] = None) -> float:
        """Median wall time of reps calls"""
        samples = []
        for _ in range(reps or self.reps):
            start = time.perf_counter()
            fn()
            samples.append(time.perf_counter() - start)
        return float(np.median(samples))

    def measure(self, kind: OperatorKind, symbol: Optional[HarmonicSymbol], params: SpaceParams,
                reps: int, convention: str, tol: float) -> BenchRecord:
        A = build_matrix(kind, symbol, params, convention)
        construction = self.median_time(lambda: build_matrix(kind, symbol, params, convention), reps)
        eigen = self.median_time(lambda: eigenvalues(A), reps)
        stored = int(np.count_nonzero(np.abs(A.entries) > tol))
        logger.info(f"Bench {kind.value} N={params.dim}: build {construction:.4f}s, eig {eigen:.4f}s")
        return BenchRecord(
            kind=kind.value,
            n_dim=params.dim,
            construction_wall_time=construction,
            sparsity=sparsity_ratio(A, tol),
            eigen_time=eigen,
            peak_entry_storage=stored * ENTRY_BYTES,
        )

    def bench(self, kinds: Sequence[OperatorKind], symbol: Optional[HarmonicSymbol], params: SpaceParams,
              dims: Sequence[int], reps: Optional[int] = None, convention: str = MONOMIAL,
              tol: Optional[float] = None) -> List[BenchRecord]:
        """
        Time construction and eigen-solves over kinds and dimensions

        Args:
            kinds: Operator kinds; slant shifts ignore the symbol
            symbol: Symbol for the symbol-bearing kinds (default: harmonic exponential)
            params: alpha and k; the dimension is taken from dims
            dims: Truncation dimensions
            reps: Repetitions per measurement (>= 3), the median is reported
            convention: Slant-shift convention
            tol: Threshold for counting an entry as stored

        Returns:
            Records sorted by (kind, N); sparsity and storage are deterministic
        """
        reps = self.reps if reps is None else reps
        tol = self.zero_tol if tol is None else tol
        if reps < 3:
            raise ValidationError(f"bench needs at least 3 repetitions, got {reps}")
        symbol = symbol if symbol is not None else default_symbol()

        records = []
        for kind in kinds:
            kind = OperatorKind(kind)
            s = symbol if kind.requires_symbol else None
            for N in dims:
                records.append(self.measure(kind, s, params.with_dim(N), reps, convention, tol))

        return sorted(records, key=lambda r: (r.kind, r.n_dim))


# Global bench service instance
bench_service = BenchService()
