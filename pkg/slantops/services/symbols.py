"""Bounded harmonic symbols with finitely many nonzero coefficients.

    phi(z) = sum_{j>=0} a_j conj(z)^j + sum_{j>=1} b_j z^j

The constant term lives once, in the anti-analytic list at j = 0.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from ..errors import FileAccessError, SymbolParseError, ValidationError
from .weights import gamma_weight

logger = logging.getLogger(__name__)

# Relative tolerance for coefficientwise proportionality
DEPENDENCE_RTOL = 1e-12

ANALYTIC_EXP = "analytic-exp"
ANTI_EXP = "anti-exp"
ANTI_GEOMETRIC = "anti-geometric"


def _trim(coeffs: Tuple[complex, ...], keep: int) -> Tuple[complex, ...]:
    end = len(coeffs)
    while end > keep and coeffs[end - 1] == 0:
        end -= 1
    return coeffs[:end]


@dataclass(frozen=True)
class HarmonicSymbol:
    """
    Immutable harmonic symbol

    anti[j] is the coefficient of conj(z)^j (j >= 0, never empty);
    analytic[j-1] is the coefficient of z^j (j >= 1).
    """

    anti: Tuple[complex, ...] = (0j,)
    analytic: Tuple[complex, ...] = ()

    def __post_init__(self):
        anti = tuple(complex(c) for c in self.anti) or (0j,)
        analytic = tuple(complex(c) for c in self.analytic)
        for c in anti + analytic:
            if not (np.isfinite(c.real) and np.isfinite(c.imag)):
                raise ValidationError(f"symbol coefficients must be finite, got {c}")
        object.__setattr__(self, "anti", _trim(anti, 1))
        object.__setattr__(self, "analytic", _trim(analytic, 0))

    @classmethod
    def constant(cls, c: complex) -> "HarmonicSymbol":
        return cls(anti=(c,))

    @classmethod
    def monomial(cls, j: int, c: complex = 1.0, conjugate: bool = False) -> "HarmonicSymbol":
        """c z^j, or c conj(z)^j when conjugate is set"""
        if j < 0:
            raise ValidationError(f"monomial degree must be non-negative, got {j}")
        if conjugate or j == 0:
            return cls(anti=(0j,) * j + (c,))
        return cls(anti=(0j,), analytic=(0j,) * (j - 1) + (c,))

    @property
    def anti_degree(self) -> int:
        return len(self.anti) - 1

    @property
    def analytic_degree(self) -> int:
        return len(self.analytic)

    @property
    def is_zero(self) -> bool:
        return self.anti == (0j,) and not self.analytic

    @property
    def is_constant(self) -> bool:
        return self.anti_degree == 0 and not self.analytic

    @property
    def is_analytic(self) -> bool:
        return self.anti_degree == 0

    @property
    def is_anti_analytic(self) -> bool:
        return not self.analytic

    def a(self, j: int) -> complex:
        """Coefficient of conj(z)^j; zero outside the support"""
        return self.anti[j] if 0 <= j < len(self.anti) else 0j

    def b(self, j: int) -> complex:
        """Coefficient of z^j for j >= 1; zero outside the support"""
        return self.analytic[j - 1] if 1 <= j <= len(self.analytic) else 0j

    def anti_array(self, length: int) -> np.ndarray:
        """a_0..a_(length-1) as a complex array, zero padded"""
        out = np.zeros(length, dtype=complex)
        n = min(length, len(self.anti))
        out[:n] = self.anti[:n]
        return out

    def analytic_array(self, length: int) -> np.ndarray:
        """Array whose entry j is b_j (entry 0 is always zero)"""
        out = np.zeros(length, dtype=complex)
        n = min(length - 1, len(self.analytic))
        if n > 0:
            out[1:n + 1] = self.analytic[:n]
        return out

    def coefficient_vector(self, anti_len: int, analytic_len: int) -> np.ndarray:
        return np.concatenate([self.anti_array(anti_len), self.analytic_array(analytic_len + 1)[1:]])

    def scale(self, c: complex) -> "HarmonicSymbol":
        c = complex(c)
        return HarmonicSymbol(
            anti=tuple(c * x for x in self.anti),
            analytic=tuple(c * x for x in self.analytic),
        )

    def add(self, other: "HarmonicSymbol") -> "HarmonicSymbol":
        p = max(len(self.anti), len(other.anti))
        q = max(len(self.analytic), len(other.analytic))
        anti = self.anti_array(p) + other.anti_array(p)
        analytic = self.analytic_array(q + 1)[1:] + other.analytic_array(q + 1)[1:]
        return HarmonicSymbol(anti=tuple(anti), analytic=tuple(analytic))

    def conjugate(self) -> "HarmonicSymbol":
        """Symbol of conj(phi): analytic and anti-analytic parts trade places"""
        anti = (self.anti[0].conjugate(),) + tuple(c.conjugate() for c in self.analytic)
        analytic = tuple(c.conjugate() for c in self.anti[1:])
        return HarmonicSymbol(anti=anti, analytic=analytic)

    def anti_part(self) -> "HarmonicSymbol":
        return HarmonicSymbol(anti=self.anti)

    def analytic_part(self) -> "HarmonicSymbol":
        return HarmonicSymbol(anti=(0j,), analytic=self.analytic)

    def evaluate_analytic(self, w: complex) -> complex:
        """phi(w) for an analytic symbol (the value targeted by kernel residuals)"""
        if not self.is_analytic:
            raise ValidationError("evaluate_analytic requires an analytic symbol")
        value = self.anti[0]
        for j, c in enumerate(self.analytic, start=1):
            value += c * w ** j
        return complex(value)


def from_normalized(anti: Sequence[complex], analytic: Sequence[complex], alpha: float) -> HarmonicSymbol:
    """
    Convert normalized coefficients (c_j multiplying z^j / gamma_j) to plain ones

    Only non-negative indices are accepted; gamma is undefined below zero.
    """
    plain_anti = [complex(c) / gamma_weight(j, alpha) for j, c in enumerate(anti)]
    plain_analytic = [complex(c) / gamma_weight(j, alpha) for j, c in enumerate(analytic, start=1)]
    return HarmonicSymbol(anti=tuple(plain_anti), analytic=tuple(plain_analytic))


def truncate_exponential(kind: str, degree: int) -> HarmonicSymbol:
    """
    Taylor truncation of e^z (analytic-exp) or e^conj(z) (anti-exp)

    Args:
        kind: 'analytic-exp' or 'anti-exp'
        degree: Highest retained power (>= 0)

    Returns:
        Symbol with coefficient 1/j! at power j; the constant 1 sits in the anti list
    """
    if degree < 0:
        raise ValidationError(f"degree must be non-negative, got {degree}")
    if kind not in (ANALYTIC_EXP, ANTI_EXP):
        raise ValidationError(f"unknown exponential kind '{kind}'")

    coeffs = [1.0]
    for j in range(1, degree + 1):
        coeffs.append(coeffs[-1] / j)

    if kind == ANTI_EXP:
        return HarmonicSymbol(anti=tuple(coeffs))
    return HarmonicSymbol(anti=(1.0,), analytic=tuple(coeffs[1:]))


def harmonic_exponential(degree: int) -> HarmonicSymbol:
    """e^z + e^conj(z) - 1 truncated at degree; the benchmark symbol"""
    return truncate_exponential(ANTI_EXP, degree).add(
        truncate_exponential(ANALYTIC_EXP, degree).analytic_part()
    )


def geometric_symbol(degree: int) -> HarmonicSymbol:
    """1/(1 - conj(z)) truncated at degree"""
    if degree < 0:
        raise ValidationError(f"degree must be non-negative, got {degree}")
    return HarmonicSymbol(anti=(1.0,) * (degree + 1))


SYMBOL_FAMILIES = {
    ANALYTIC_EXP: lambda d: truncate_exponential(ANALYTIC_EXP, d),
    ANTI_EXP: lambda d: truncate_exponential(ANTI_EXP, d),
    "harmonic-exp": harmonic_exponential,
    ANTI_GEOMETRIC: geometric_symbol,
}


def family_symbol(family: str, degree: int) -> HarmonicSymbol:
    try:
        return SYMBOL_FAMILIES[family](degree)
    except KeyError:
        raise ValidationError(f"unknown symbol family '{family}', expected one of {sorted(SYMBOL_FAMILIES)}") from None


# Serialization
def _reject_constant(name: str):
    raise ValidationError(f"non-finite coefficient '{name}' is not allowed")


def _read_pairs(data: dict, key: str) -> Tuple[complex, ...]:
    if key not in data:
        raise SymbolParseError(f"missing field '{key}'")
    pairs = data[key]
    if not isinstance(pairs, list):
        raise SymbolParseError(f"field '{key}' must be a list of [re, im] pairs")
    out = []
    for i, pair in enumerate(pairs):
        if (
            not isinstance(pair, list) or len(pair) != 2
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in pair)
        ):
            raise SymbolParseError(f"'{key}[{i}]' must be a two-element [re, im] array of numbers")
        try:
            re, im = float(pair[0]), float(pair[1])
        except OverflowError:
            raise ValidationError(f"'{key}[{i}]' is not finite") from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ValidationError(f"'{key}[{i}]' is not finite")
        out.append(complex(re, im))
    return tuple(out)


def parse_symbol(text: str, normalized: bool = False, alpha: Optional[float] = None) -> HarmonicSymbol:
    """
    Parse a symbol from its JSON form

    Args:
        text: JSON object with "anti" and "analytic" lists of [re, im] pairs
        normalized: Treat coefficients as multiplying z^j / gamma_j
        alpha: Weight exponent, required when normalized is set

    Returns:
        The parsed symbol with trailing zeros trimmed
    """
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise SymbolParseError(f"malformed symbol JSON: {e.msg}", position=e.pos)

    if not isinstance(data, dict):
        raise SymbolParseError("symbol JSON must be an object", position=0)

    anti = _read_pairs(data, "anti")
    analytic = _read_pairs(data, "analytic")
    if normalized:
        if alpha is None:
            raise ValidationError("normalized coefficients need alpha")
        return from_normalized(anti, analytic, alpha)
    return HarmonicSymbol(anti=anti, analytic=analytic)


def serialize_symbol(s: HarmonicSymbol) -> str:
    """Canonical JSON: sorted keys, compact separators, shortest round-trip floats"""
    payload = {
        "anti": [[float(c.real), float(c.imag)] for c in s.anti],
        "analytic": [[float(c.real), float(c.imag)] for c in s.analytic],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def load_symbol(path: Union[str, Path], normalized: bool = False, alpha: Optional[float] = None) -> HarmonicSymbol:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FileAccessError(f"cannot read symbol file {path}: {e}")
    symbol = parse_symbol(text, normalized=normalized, alpha=alpha)
    logger.info(f"Loaded symbol from {path}: anti degree {symbol.anti_degree}, analytic degree {symbol.analytic_degree}")
    return symbol


# Algebra
def _close(x: complex, y: complex) -> bool:
    return abs(x - y) <= DEPENDENCE_RTOL * max(abs(x), abs(y))


def linear_dependence(phi: HarmonicSymbol, psi: HarmonicSymbol) -> Optional[complex]:
    """
    Scalar c with psi = c * phi coefficientwise, or None

    When phi is zero, returns 0 if psi is zero too and None otherwise.
    """
    p = max(len(phi.anti), len(psi.anti))
    q = max(len(phi.analytic), len(psi.analytic))
    u = phi.coefficient_vector(p, q)
    v = psi.coefficient_vector(p, q)

    if not np.any(u):
        return 0j if not np.any(v) else None

    pivot = int(np.argmax(np.abs(u)))
    c = complex(v[pivot] / u[pivot])
    for x, y in zip(u, v):
        if not _close(complex(y), c * complex(x)):
            return None
    return c


def random_symbol(rng: np.random.Generator, max_degree: int, exact_degree: bool = False) -> HarmonicSymbol:
    """Symbol with standard complex normal coefficients (test and sweep fixtures)"""
    if exact_degree:
        p = q = max_degree
    else:
        p = int(rng.integers(0, max_degree + 1))
        q = int(rng.integers(0, max_degree + 1))

    def draw(n: int) -> Iterable[complex]:
        return tuple(complex(x, y) for x, y in zip(rng.standard_normal(n), rng.standard_normal(n)))

    return HarmonicSymbol(anti=draw(p + 1), analytic=draw(q))


# Hankel-active coefficient sequences
CoefficientSource = Union[HarmonicSymbol, Callable[[int], complex], str]

COEFFICIENT_FAMILIES = {
    "factorial": lambda j: float(np.exp(-gammaln(j + 1.0))),
    "inverse-square": lambda j: 1.0 / (j + 1.0) ** 2,
    "constant": lambda j: 1.0,
}


def hankel_active(source: CoefficientSource) -> Callable[[int], complex]:
    """
    Resolve j -> c_j, the coefficient sequence entering (slant) Hankel entries

    A symbol contributes its anti-analytic coefficients a_j; a callable is used
    as is; a string names one of the infinite families in COEFFICIENT_FAMILIES.
    """
    if isinstance(source, HarmonicSymbol):
        return source.a
    if isinstance(source, str):
        try:
            return COEFFICIENT_FAMILIES[source]
        except KeyError:
            raise ValidationError(
                f"unknown coefficient family '{source}', expected one of {sorted(COEFFICIENT_FAMILIES)}"
            ) from None
    if callable(source):
        return source
    raise ValidationError(f"cannot read coefficients from {type(source).__name__}")
