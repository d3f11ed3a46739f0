import numpy as np
import pytest

from slantops.errors import ValidationError
from slantops.schemas import SpaceParams
from slantops.services.analysis import (
    column_norms,
    commutator,
    commutator_norms,
    compactness_tail,
    decay_profile,
    hankel_support_count,
    hilbert_schmidt_tail,
    self_commutator_defect,
    sparsity_ratio,
)
from slantops.services.operators import OperatorKind, build_matrix, support
from slantops.services.spectral import operator_norm
from slantops.services.symbols import (
    HarmonicSymbol,
    geometric_symbol,
    harmonic_exponential,
    linear_dependence,
    random_symbol,
    truncate_exponential,
)

SLANT_KINDS = [OperatorKind.SLANT_TOEPLITZ, OperatorKind.SLANT_LITTLE_HANKEL]


def build(kind, phi, alpha=1.0, k=2, dim=16):
    return build_matrix(kind, phi, SpaceParams(alpha=alpha, k=k, dim=dim))


class TestCommutators:
    def test_self_commutator_is_exactly_zero(self):
        A = build(OperatorKind.SLANT_TOEPLITZ, harmonic_exponential(5))
        norms = commutator_norms(A, A)
        assert norms.operator_norm == 0.0
        assert norms.frobenius == 0.0

    def test_dependent_symbols_commute(self):
        phi = HarmonicSymbol(anti=(0, 1), analytic=(1,))
        A = build(OperatorKind.SLANT_TOEPLITZ, phi)
        B = build(OperatorKind.SLANT_TOEPLITZ, phi.scale(2))
        assert commutator_norms(A, B).operator_norm <= 1e-12 * operator_norm(A) * operator_norm(B)

    @pytest.mark.parametrize("kind", SLANT_KINDS)
    def test_dependent_pairs_across_parameters(self, kind):
        rng = np.random.default_rng(31)
        for trial in range(25):
            alpha = float(rng.choice([0.0, 1.0, 2.0, 2.5]))
            k = int(rng.choice([2, 3]))
            phi = random_symbol(rng, 5)
            c = complex(rng.standard_normal(), rng.standard_normal())
            A = build(kind, phi, alpha, k, 32)
            B = build(kind, phi.scale(c), alpha, k, 32)
            bound = 1e-10 * max(1.0, operator_norm(A) * operator_norm(B))
            assert commutator_norms(A, B).operator_norm <= bound, (trial, alpha, k)

    def test_monomials_of_different_degree_do_not_commute(self):
        A = build(OperatorKind.SLANT_TOEPLITZ, HarmonicSymbol.monomial(1))
        B = build(OperatorKind.SLANT_TOEPLITZ, HarmonicSymbol.monomial(2))
        expected = np.linalg.norm(A.entries @ B.entries - B.entries @ A.entries, 2)
        assert expected > 0
        assert commutator_norms(A, B).operator_norm == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("kind", SLANT_KINDS)
    def test_independent_pairs_do_not_commute(self, kind):
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 20:
            phi = random_symbol(rng, 4, exact_degree=True)
            psi = random_symbol(rng, 4, exact_degree=True)
            if linear_dependence(phi, psi) is not None:
                continue
            A = build(kind, phi, dim=32)
            B = build(kind, psi, dim=32)
            assert commutator_norms(A, B).operator_norm > 1e-6
            checked += 1

    def test_norms_are_symmetric(self):
        rng = np.random.default_rng(3)
        A = build(OperatorKind.SLANT_TOEPLITZ, random_symbol(rng, 4))
        B = build(OperatorKind.SLANT_TOEPLITZ, random_symbol(rng, 4))
        ab, ba = commutator_norms(A, B), commutator_norms(B, A)
        assert ab.operator_norm == pytest.approx(ba.operator_norm, rel=1e-12)
        assert ab.frobenius == ba.frobenius

    def test_accepts_plain_arrays(self):
        X = np.array([[0, 1], [0, 0]], dtype=complex)
        Y = X.T.copy()
        np.testing.assert_array_equal(commutator(X, Y), np.diag([1, -1]))

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            commutator(np.eye(3), np.eye(4))


class TestNormality:
    def test_constant_toeplitz_is_normal(self):
        A = build(OperatorKind.TOEPLITZ, HarmonicSymbol.constant(5))
        assert self_commutator_defect(A) == 0.0

    def test_analytic_symbol_slant_hankel_is_zero(self):
        A = build(OperatorKind.SLANT_LITTLE_HANKEL, truncate_exponential("analytic-exp", 8).analytic_part())
        assert self_commutator_defect(A) == 0.0

    def test_shift_defect_value(self):
        # alpha = 1: the last diagonal entry of T*T - TT* is -(N-1)/(N+1)
        A = build(OperatorKind.TOEPLITZ, HarmonicSymbol.monomial(1))
        assert self_commutator_defect(A) == pytest.approx(15 / 17, rel=1e-12)

    def test_shift_defect_non_decreasing(self):
        defects = [
            self_commutator_defect(build(OperatorKind.TOEPLITZ, HarmonicSymbol.monomial(1), dim=N))
            for N in (8, 16, 32, 64)
        ]
        assert defects[0] > 0
        assert all(b >= a for a, b in zip(defects, defects[1:]))

    def test_non_constant_slant_toeplitz_is_not_normal(self):
        A = build(OperatorKind.SLANT_TOEPLITZ, HarmonicSymbol(anti=(1, 1)))
        assert self_commutator_defect(A) > 1e-3


class TestCompactnessTail:
    def test_polynomial_tail_is_eventually_zero(self):
        phi = HarmonicSymbol(anti=(1, 2, 0, 0, 0, 3), analytic=(4, 5, 6, 7, 8, 9, 10))
        report = compactness_tail(phi, 2, 1.0, 40)
        assert report.j_values == list(range(41))
        assert report.eventually_zero_from() == 6
        assert all(v == 0.0 for v in report.sup_values[6:])

    def test_factorial_coefficients_decay(self):
        report = compactness_tail("factorial", 2, 1.0, 60)
        values = report.sup_values
        assert all(values[j + 1] < values[j] for j in range(4, 60))
        assert values[60] < 1e-12
        assert report.eventually_zero_from() is None

    def test_constant_coefficients_have_positive_floor(self):
        report = compactness_tail("constant", 2, 1.0, 400)
        assert min(report.sup_values) >= 0.1

    def test_floor_attained_near_middle_row(self):
        # at m = j/(2k) the weight factor approaches k/4
        report = compactness_tail("constant", 2, 1.0, 400)
        assert report.sup_values[400] == pytest.approx(0.5, abs=0.02)

    def test_callable_source(self):
        report = compactness_tail(lambda j: 1.0 / (j + 1.0) ** 2, 3, 0.0, 50)
        assert report.sup_values[50] < report.sup_values[10]

    def test_rejects_short_range(self):
        with pytest.raises(ValidationError):
            compactness_tail("constant", 2, 1.0, 0)

    def test_hilbert_schmidt_tail_matches_matrix(self):
        phi = geometric_symbol(10)
        S = build(OperatorKind.SLANT_LITTLE_HANKEL, phi, dim=11).entries
        frobenius_sq = float(np.sum(np.abs(S) ** 2))
        # j = 0 contributes the single entry S[0, 0] = 1
        assert hilbert_schmidt_tail(phi, 2, 1.0, 0, 10) == pytest.approx(frobenius_sq - 1.0, rel=1e-12)

    def test_hilbert_schmidt_tail_vanishes_beyond_degree(self):
        assert hilbert_schmidt_tail(geometric_symbol(6), 2, 1.0, 6, 50) == 0.0


class TestFiniteRank:
    @pytest.mark.parametrize("P, k, N, expected", [(0, 2, 8, 1), (2, 2, 8, 4), (5, 2, 6, 12), (5, 2, 50, 12)])
    def test_support_counts(self, P, k, N, expected):
        assert hankel_support_count(P, k, N) == expected

    @pytest.mark.parametrize("P, k, N", [(9, 3, 4), (7, 2, 20), (12, 3, 5)])
    def test_count_matches_built_support(self, P, k, N):
        S = build(OperatorKind.SLANT_LITTLE_HANKEL, geometric_symbol(P), k=k, dim=N)
        assert len(support(S)) == hankel_support_count(P, k, N)

    def test_sparsity_examples(self):
        assert sparsity_ratio(np.zeros((5, 5)), 0.0) == 0.0
        assert sparsity_ratio(np.eye(10), 1e-15) == pytest.approx(0.1)
        with pytest.raises(ValidationError):
            sparsity_ratio(np.eye(2), -1.0)

    def test_slant_hankel_sparser_than_slant_toeplitz(self):
        phi = harmonic_exponential(15)
        S = build(OperatorKind.SLANT_LITTLE_HANKEL, phi, dim=100)
        B = build(OperatorKind.SLANT_TOEPLITZ, phi, dim=100)
        assert sparsity_ratio(S, 1e-12) < sparsity_ratio(B, 1e-12)

    def test_column_norms(self):
        A = build(OperatorKind.SLANT_SHIFT, None, dim=6)
        norms = column_norms(A)
        assert norms[0] == 1.0
        assert norms[1] == 0.0
        assert norms[2] == pytest.approx(A.entry(1, 2).real)


class TestDecayProfile:
    def test_zero_matrix(self):
        assert decay_profile(np.zeros((4, 4)), "row").values == [0.0] * 4
        assert decay_profile(np.zeros((4, 4)), "diagonal").values == [0.0]

    def test_unknown_axis(self):
        with pytest.raises(ValidationError):
            decay_profile(np.eye(2), "anti-diagonal")

    def test_slant_hankel_diagonal_decays_super_exponentially(self):
        S = build(OperatorKind.SLANT_LITTLE_HANKEL, truncate_exponential("anti-exp", 20), dim=20)
        profile = decay_profile(S, "diagonal")
        assert len(profile.values) == 21
        ratios = profile.ratios()
        for j in range(6, len(ratios)):
            assert ratios[j] <= 1.0 / (j - 2)

    def test_slant_toeplitz_rows_decay_slower(self):
        B = build(OperatorKind.SLANT_TOEPLITZ, truncate_exponential("analytic-exp", 20), dim=20)
        S = build(OperatorKind.SLANT_LITTLE_HANKEL, truncate_exponential("anti-exp", 20), dim=20)
        row_ratios = decay_profile(B, "row").ratios()[:8]
        diag_ratios = decay_profile(S, "diagonal").ratios()[6:]
        assert min(row_ratios) >= 0.5
        assert min(row_ratios) > max(diag_ratios)

    def test_diagonal_index_for_non_slant_kinds(self):
        H = build(OperatorKind.LITTLE_HANKEL, HarmonicSymbol(anti=(0, 0, 0, 1)), dim=8)
        profile = decay_profile(H, "diagonal")
        assert len(profile.values) == 4
        assert profile.values[:3] == [0.0, 0.0, 0.0]
        assert profile.values[3] > 0
