"""Compositional oracle for the operator truncations.

Operators are applied termwise to mixed polynomials sum c_(p,q) z^p conj(z)^q
by composing multiplication, the flip, the Bergman projection and the slant
shift. The oracle shares only the weights module with the closed-form entry
formulas, so agreement between the two is a genuine cross-check.
"""

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Mapping, Optional, Tuple, Union

import numpy as np

from ..errors import ValidationError
from ..schemas import SpaceParams
from .operators import (
    MONOMIAL,
    NORMALIZED,
    OperatorKind,
    OperatorMatrix,
    check_convention,
    check_symbol,
)
from .symbols import HarmonicSymbol
from .weights import check_alpha, check_slant_order, gamma_weight, projection_coeff, weight_ratio

logger = logging.getLogger(__name__)

Exponents = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class MixedPolynomial:
    """Finite sum of c * z^p conj(z)^q keyed by (p, q); zero coefficients are never stored"""

    terms: Mapping[Exponents, complex]

    def __post_init__(self):
        clean: Dict[Exponents, complex] = {}
        for (p, q), c in self.terms.items():
            if p < 0 or q < 0:
                raise ValidationError(f"exponents must be non-negative, got ({p}, {q})")
            c = complex(c)
            if c != 0:
                clean[(int(p), int(q))] = c
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(clean.items()))))

    @classmethod
    def zero(cls) -> "MixedPolynomial":
        return cls({})

    @classmethod
    def monomial(cls, p: int, q: int = 0, c: complex = 1.0) -> "MixedPolynomial":
        return cls({(p, q): c})

    def __eq__(self, other) -> bool:
        return isinstance(other, MixedPolynomial) and dict(self.terms) == dict(other.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, p: int, q: int = 0) -> complex:
        return self.terms.get((p, q), 0j)

    @property
    def is_analytic(self) -> bool:
        return all(q == 0 for _, q in self.terms)


def _accumulate(out: Dict[Exponents, complex], key: Exponents, c: complex) -> None:
    out[key] = out.get(key, 0j) + c


def symbol_polynomial(symbol: Union[HarmonicSymbol, MixedPolynomial]) -> MixedPolynomial:
    """Harmonic symbol as a mixed polynomial: a_j -> (0, j), b_j -> (j, 0)"""
    if isinstance(symbol, MixedPolynomial):
        return symbol
    terms = {(0, j): c for j, c in enumerate(symbol.anti)}
    terms.update({(j, 0): c for j, c in enumerate(symbol.analytic, start=1)})
    return MixedPolynomial(terms)


def basis_vector(n: int, alpha: float) -> MixedPolynomial:
    """e_n = z^n / gamma_n"""
    return MixedPolynomial.monomial(n, 0, 1.0 / gamma_weight(n, alpha))


# Primitives
def multiply(f: MixedPolynomial, g: MixedPolynomial) -> MixedPolynomial:
    out: Dict[Exponents, complex] = {}
    for (p1, q1), c1 in f.terms.items():
        for (p2, q2), c2 in g.terms.items():
            _accumulate(out, (p1 + p2, q1 + q2), c1 * c2)
    return MixedPolynomial(out)


def flip(f: MixedPolynomial) -> MixedPolynomial:
    """J: z^p conj(z)^q -> z^q conj(z)^p"""
    return MixedPolynomial({(q, p): c for (p, q), c in f.terms.items()})


def project(f: MixedPolynomial, alpha: float) -> MixedPolynomial:
    """Bergman projection: z^p conj(z)^q -> projection_coeff(p, q) z^(p-q), zero when p < q"""
    out: Dict[Exponents, complex] = {}
    for (p, q), c in f.terms.items():
        if p >= q:
            _accumulate(out, (p - q, 0), c * projection_coeff(p, q, alpha))
    return MixedPolynomial(out)


def _require_analytic(f: MixedPolynomial, step: str) -> None:
    if not f.is_analytic:
        raise ValidationError(f"{step} acts on analytic polynomials only; project first")


def slant(f: MixedPolynomial, k: int, alpha: float, convention: str = MONOMIAL) -> MixedPolynomial:
    """
    Slant shift W_k on an analytic polynomial

    monomial:   z^p -> z^(p/k)
    normalized: z^p -> (gamma_p / gamma_(p/k)) z^(p/k)
    Powers not divisible by k are annihilated.
    """
    check_convention(convention)
    _require_analytic(f, "slant shift")
    out: Dict[Exponents, complex] = {}
    for (p, _), c in f.terms.items():
        if p % k:
            continue
        r = p // k
        factor = weight_ratio(p, r, alpha) if convention == NORMALIZED else 1.0
        _accumulate(out, (r, 0), c * factor)
    return MixedPolynomial(out)


def slant_adjoint(f: MixedPolynomial, k: int, alpha: float, convention: str = MONOMIAL) -> MixedPolynomial:
    """
    Adjoint of the slant shift on an analytic polynomial

    monomial:   z^m -> (gamma_m / gamma_km)^2 z^(km)
    normalized: z^m -> (gamma_m / gamma_km) z^(km)
    """
    check_convention(convention)
    _require_analytic(f, "slant shift adjoint")
    out: Dict[Exponents, complex] = {}
    for (m, _), c in f.terms.items():
        ratio = weight_ratio(m, k * m, alpha)
        factor = ratio if convention == NORMALIZED else ratio * ratio
        _accumulate(out, (k * m, 0), c * factor)
    return MixedPolynomial(out)


def coordinates(f: MixedPolynomial, alpha: float, N: int) -> np.ndarray:
    """Coordinates <f, e_m> = gamma_m * coeff(z^m) for m < N; higher powers fall outside the truncation"""
    _require_analytic(f, "coordinate extraction")
    out = np.zeros(N, dtype=complex)
    for (m, _), c in f.terms.items():
        if m < N:
            out[m] = c * gamma_weight(m, alpha)
    return out


# Composition
def oracle_apply(kind: OperatorKind, symbol: Optional[Union[HarmonicSymbol, MixedPolynomial]],
                 params: SpaceParams, convention: str, f: MixedPolynomial) -> MixedPolynomial:
    """
    Apply the operator to a mixed polynomial by composing its defining steps

    Toeplitz          P M_phi
    LittleHankel      P J M_phi
    SlantShift        W_k P
    SlantShiftAdjoint W_k* P
    SlantToeplitz     W_k P M_phi
    SlantLittleHankel W_k P J M_phi

    Inputs to the slant shifts are projected first, which is the identity on
    analytic polynomials.
    """
    kind = OperatorKind(kind)
    check_symbol(kind, symbol)
    check_convention(convention)
    alpha = check_alpha(params.alpha)
    k = check_slant_order(params.k)

    if kind == OperatorKind.SLANT_SHIFT:
        return slant(project(f, alpha), k, alpha, convention)
    if kind == OperatorKind.SLANT_SHIFT_ADJOINT:
        return slant_adjoint(project(f, alpha), k, alpha, convention)

    product = multiply(f, symbol_polynomial(symbol))
    if kind in (OperatorKind.LITTLE_HANKEL, OperatorKind.SLANT_LITTLE_HANKEL):
        product = flip(product)
    g = project(product, alpha)
    if kind.is_slant:
        g = slant(g, k, alpha, convention)
    return g


def oracle_matrix(kind: OperatorKind, symbol: Optional[Union[HarmonicSymbol, MixedPolynomial]],
                  params: SpaceParams, convention: str = MONOMIAL) -> OperatorMatrix:
    """Truncation whose column n is the coordinate vector of the oracle applied to e_n"""
    kind = OperatorKind(kind)
    N = params.dim
    columns = [
        coordinates(oracle_apply(kind, symbol, params, convention, basis_vector(n, params.alpha)), params.alpha, N)
        for n in range(N)
    ]
    entries = np.column_stack(columns)
    entries.setflags(write=False)
    logger.debug(f"Oracle truncation {kind.value} N={N} alpha={params.alpha} k={params.k}")
    harmonic = symbol if isinstance(symbol, HarmonicSymbol) else None
    return OperatorMatrix(kind=kind, params=params, entries=entries, convention=convention, symbol=harmonic)
