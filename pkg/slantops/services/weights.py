"""Basis weights of the weighted Bergman space.

The orthonormal basis is e_n = z^n / gamma_n with

    gamma_n = sqrt(Gamma(n+1) Gamma(alpha+2) / Gamma(n+alpha+2)).

Everything is evaluated in the log domain through ``scipy.special.gammaln``;
direct Gamma quotients overflow near n = 170 in double precision.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from ..errors import DomainError
from ..schemas import ALPHA_FLOOR

logger = logging.getLogger(__name__)


def check_alpha(alpha: float) -> float:
    """Reject weight exponents at or below -1"""
    if not np.isfinite(alpha) or alpha <= ALPHA_FLOOR:
        raise DomainError(f"alpha must be greater than -1, got {alpha}")
    return float(alpha)


def check_index(n: int, name: str = "n") -> int:
    if n < 0:
        raise DomainError(f"{name} must be non-negative, got {n}")
    return int(n)


def check_slant_order(k: int) -> int:
    if k < 2:
        raise DomainError(f"slant order k must be at least 2, got {k}")
    return int(k)


def log_gamma_weight(n, alpha: float):
    """log gamma_n; accepts a scalar or an integer array"""
    n = np.asarray(n, dtype=float)
    return 0.5 * (gammaln(n + 1.0) + gammaln(alpha + 2.0) - gammaln(n + alpha + 2.0))


def gamma_weight(n: int, alpha: float) -> float:
    """
    Basis weight gamma_n

    Args:
        n: Basis index (n >= 0)
        alpha: Weight exponent (alpha > -1)

    Returns:
        gamma_n, equal to 1 exactly for n = 0
    """
    alpha = check_alpha(alpha)
    n = check_index(n)
    if n == 0:
        return 1.0
    return float(np.exp(log_gamma_weight(n, alpha)))


def log_weight_ratio(p, q, alpha: float):
    """log(gamma_p / gamma_q); the Gamma(alpha+2) terms cancel before evaluation"""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return 0.5 * (
        gammaln(p + 1.0) - gammaln(q + 1.0)
        - gammaln(p + alpha + 2.0) + gammaln(q + alpha + 2.0)
    )


def weight_ratio(p: int, q: int, alpha: float) -> float:
    """gamma_p / gamma_q without forming either weight"""
    alpha = check_alpha(alpha)
    p = check_index(p, "p")
    q = check_index(q, "q")
    if p == q:
        return 1.0
    return float(np.exp(log_weight_ratio(p, q, alpha)))


def projection_coeff(s: int, t: int, alpha: float) -> float:
    """
    Coefficient of z^(s-t) in the Bergman projection of conj(z)^t z^s

    Gamma(s+1) Gamma(s-t+alpha+2) / (Gamma(s+alpha+2) Gamma(s-t+1)) when s >= t,
    zero otherwise. Equals gamma_s^2 / gamma_(s-t)^2.
    """
    alpha = check_alpha(alpha)
    s = check_index(s, "s")
    t = check_index(t, "t")
    if s < t:
        return 0.0
    if t == 0:
        return 1.0
    return float(np.exp(2.0 * log_weight_ratio(s, s - t, alpha)))


def slant_ratio(m: int, k: int, alpha: float) -> float:
    """gamma_m / gamma_(km); increases in m towards k^((alpha+1)/2)"""
    k = check_slant_order(k)
    return weight_ratio(m, k * m, alpha)


def slant_ratio_limit(k: int, alpha: float) -> float:
    check_slant_order(k)
    return float(k ** ((check_alpha(alpha) + 1.0) / 2.0))


def asymptotic_weight(n: int, alpha: float) -> float:
    """
    Large-n form sqrt(Gamma(alpha+2)) n^(-(alpha+1)/2) of gamma_n

    Diagnostic only; nothing else depends on it.
    """
    alpha = check_alpha(alpha)
    if n < 1:
        raise DomainError(f"asymptotic weight needs n >= 1, got {n}")
    return float(np.exp(0.5 * gammaln(alpha + 2.0) - 0.5 * (alpha + 1.0) * np.log(n)))


def commutation_weight_ratio(p: int, m: int, k: int, alpha: float) -> float:
    """
    gamma_(k(p+km)) / gamma_(p+km)^2

    The slant-Hankel commutation argument claims this tends to k^(alpha+1);
    it actually grows without bound, so it is exposed for measurement only.
    """
    k = check_slant_order(k)
    q = p + k * m
    check_index(q, "p + km")
    alpha = check_alpha(alpha)
    log_value = log_gamma_weight(k * q, alpha) - 2.0 * log_gamma_weight(q, alpha)
    return float(np.exp(log_value))


@dataclass(frozen=True)
class WeightTable:
    """Immutable table of log gamma_n for n = 0..max_index"""

    alpha: float
    max_index: int
    log_weights: np.ndarray

    @classmethod
    def build(cls, alpha: float, max_index: int) -> "WeightTable":
        alpha = check_alpha(alpha)
        max_index = check_index(max_index, "max_index")
        values = log_gamma_weight(np.arange(max_index + 1), alpha)
        values[0] = 0.0
        values.setflags(write=False)
        return cls(alpha=alpha, max_index=max_index, log_weights=values)

    def log(self, n):
        return self.log_weights[n]

    def weight(self, n):
        return np.exp(self.log_weights[n])


@lru_cache(maxsize=64)
def weight_table(alpha: float, max_index: int) -> WeightTable:
    """Shared, cached weight table"""
    logger.debug(f"Building weight table alpha={alpha} max_index={max_index}")
    return WeightTable.build(alpha, max_index)
