import itertools
from fractions import Fraction

import numpy as np
import pytest

from qcompare import finite, oracle
from qcompare.combinatorics import binom, lemma_b_applies
from qcompare.finite import (
    EnsembleSpec,
    ProbabilityRangeError,
    as_probability,
    avg_success,
    avg_success_exact,
    avg_success_from_moments,
    delta_extra_copy,
    lambda_split,
    limit_one_vs_infinity,
    mean_overlap_power,
    optimal_split,
    success_prob_pure,
)

GRID = np.linspace(0.0, 1.0, 1001)


class TestSuccessProbPure:
    @pytest.mark.parametrize("k, l", [(1, 1), (3, 2), (5, 7), (12, 12)])
    def test_identical_states_never_succeed(self, k, l):
        assert success_prob_pure(1.0, k, l) == 0.0

    def test_orthogonal_single_copies(self):
        assert success_prob_pure(0.0, 1, 1) == 0.5

    def test_hand_evaluated(self):
        # 1 - (1 + 4 * 0.25 + 0.25**2) / 6
        assert success_prob_pure(0.25, 2, 2) == 0.65625

    def test_matches_permutation_oracle(self):
        rng = np.random.default_rng(3)
        e0, e1 = np.array([1, 0], complex), np.array([0, 1], complex)
        assert oracle.sym_overlap_permutation_sum(e0, e1, 1, 1) == pytest.approx(1 - success_prob_pure(0.0, 1, 1), abs=1e-14)
        a, b = oracle.random_pair(2, rng)
        x = oracle.overlap_squared(a, b)
        assert oracle.sym_overlap_permutation_sum(a, b, 2, 2) == pytest.approx(1 - success_prob_pure(x, 2, 2), abs=1e-12)

    def test_array_path_agrees_with_exact_scalar_path(self):
        for k, l in [(1, 4), (6, 6), (11, 3)]:
            arr = success_prob_pure(GRID[::50], k, l)
            scalars = [success_prob_pure(float(x), k, l) for x in GRID[::50]]
            np.testing.assert_allclose(arr, scalars, rtol=0, atol=1e-15)

    def test_accepts_fractions(self):
        assert success_prob_pure(Fraction(1, 4), 2, 2) == 0.65625

    @pytest.mark.parametrize("x", [-0.1, 1.5, float("nan")])
    def test_rejects_bad_overlap(self, x):
        with pytest.raises(ValueError):
            success_prob_pure(x, 1, 1)

    def test_rejects_bad_copies(self):
        with pytest.raises(ValueError):
            success_prob_pure(0.5, 0, 1)

    def test_symmetric_in_copy_numbers(self):
        for k, l in itertools.product(range(1, 9), repeat=2):
            np.testing.assert_array_equal(success_prob_pure(GRID, k, l), success_prob_pure(GRID, l, k))
            assert success_prob_pure(0.3, k, l) == success_prob_pure(0.3, l, k)

    def test_nonincreasing_in_overlap(self):
        for k, l in itertools.product(range(1, 9), repeat=2):
            assert np.all(np.diff(success_prob_pure(GRID, k, l)) <= 1e-12)


class TestProbabilityClamp:
    def test_clamps_round_off(self):
        assert as_probability(-5e-15) == 0.0
        assert as_probability(1 + 5e-15) == 1.0

    def test_rejects_real_excursions(self):
        with pytest.raises(ProbabilityRangeError):
            as_probability(-1e-10)
        with pytest.raises(ProbabilityRangeError):
            as_probability(np.array([0.2, 1.01]))


class TestAverage:
    @pytest.mark.parametrize("d, k, l, expected", [(2, 1, 1, 0.25), (3, 1, 1, 1 / 3)])
    def test_dimension_ratio(self, d, k, l, expected):
        assert avg_success(d, k, l) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize(
        "d, k, l, expected",
        # frozen from direct quadrature of P(x) against the Haar density (d-1)(1-x)^(d-2)
        [(2, 2, 2, Fraction(4, 9)), (3, 2, 1, Fraction(4, 9)), (4, 3, 2, Fraction(18, 25))],
    )
    def test_against_overlap_density_quadrature(self, d, k, l, expected):
        assert avg_success_exact(d, k, l) == expected

    def test_moment_sum_equals_dimension_ratio(self):
        for d in range(2, 6):
            for k, l in itertools.product(range(1, 31), repeat=2):
                assert avg_success_from_moments(d, k, l) == avg_success_exact(d, k, l)

    def test_monotone_in_copies_and_dimension(self):
        for d in range(2, 8):
            values = [avg_success_exact(d, k, 3) for k in range(1, 30)]
            assert values == sorted(values)
        for k in range(1, 6):
            values = [avg_success_exact(d, k, k) for d in range(2, 30)]
            assert values == sorted(values)

    def test_large_copies_approach_one(self):
        assert avg_success_exact(2, 60, 60) >= Fraction(96, 100)
        assert avg_success(2, 60, 60) >= 0.96

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            avg_success(1, 1, 1)
        with pytest.raises(ValueError):
            EnsembleSpec(0, 1, 2)


class TestExtraCopy:
    def test_identical_states(self):
        value, _ = delta_extra_copy(1.0, 3, 5)
        assert value == 0.0

    def test_orthogonal_one_one(self):
        # (1 - 1/3) - (1 - 1/2)
        value, _ = delta_extra_copy(0.0, 1, 1)
        assert value == pytest.approx(1 / 6, abs=1e-15)

    def test_instance_nonnegative_and_matches_polynomial(self):
        value, poly = delta_extra_copy(0.5, 2, 3)
        assert value >= 0
        assert poly(0.5) == pytest.approx(value, abs=1e-15)

    def test_polynomial_contains_extra_term_when_k_below_l(self):
        # k < l: degree k+1 term is -C(l, k+1) / C(k+l+1, k+1)
        k, l = 2, 5
        _, poly = delta_extra_copy(0.3, k, l)
        assert poly.degree == k + 1
        expected = -Fraction(binom(k + 1, k + 1) * binom(l, k + 1), binom(k + l + 1, k + 1))
        assert poly.coefficients[-1] == pytest.approx(float(expected), rel=1e-15)

    def test_nonnegative_on_grid_and_lemma_applies(self):
        for k, l in itertools.product(range(1, 13), repeat=2):
            value, poly = delta_extra_copy(GRID, k, l)
            assert value.min() >= -1e-12
            assert lemma_b_applies(poly)

    def test_sign_threshold_matches(self):
        for k, l in itertools.product(range(1, 13), repeat=2):
            thr = finite.delta_threshold(k, l)
            for m, a in enumerate(finite.delta_coefficients(k, l)):
                if a != 0:
                    assert (a > 0) == (m <= thr), (k, l, m)


class TestSplit:
    def test_examples(self):
        assert lambda_split(0.5, 1, 4) >= 0
        assert lambda_split(0.5, 2, 4) <= 0
        for k, N in [(1, 3), (4, 9), (7, 10)]:
            assert lambda_split(1.0, k, N) == 0.0

    def test_mirror_split_is_zero(self):
        assert lambda_split(0.37, 2, 5) == 0.0

    def test_range_guard(self):
        for k, N in [(0, 4), (3, 4), (1, 2)]:
            with pytest.raises(ValueError):
                lambda_split(0.5, k, N)

    @pytest.mark.parametrize("N, expected", [(4, 2), (5, 2), (2, 1), (25, 12)])
    def test_optimal_split(self, N, expected):
        assert optimal_split(N) == expected

    def test_optimal_split_guard(self):
        with pytest.raises(ValueError):
            optimal_split(1)

    def test_half_split_is_argmax(self):
        for N in range(2, 25):
            table = np.array([success_prob_pure(GRID, k, N - k) for k in range(1, N)])
            assert np.all(table[optimal_split(N) - 1] >= table.max(axis=0) - 1e-12)


class TestLimits:
    @pytest.mark.parametrize("x, expected", [(0.0, 1.0), (1.0, 0.0), (0.36, 0.64)])
    def test_one_vs_infinity(self, x, expected):
        assert limit_one_vs_infinity(x) == pytest.approx(expected, abs=1e-15)

    def test_finite_l_convergence(self):
        assert abs(success_prob_pure(0.36, 1, 10_000) - 0.64) <= 1e-3

    def test_exact_finite_l_form(self):
        # P(x, 1, l) = l (1 - x) / (l + 1)
        for l in (1, 2, 10, 1000):
            for x in (0.0, 0.2, 0.9):
                assert success_prob_pure(x, 1, l) == pytest.approx(l * (1 - x) / (l + 1), abs=1e-15)


class TestOverlapMoments:
    @pytest.mark.parametrize("d, m, expected", [(2, 1, 0.5), (5, 0, 1.0), (3, 2, 1 / 6), (2, 3, 0.25)])
    def test_values(self, d, m, expected):
        assert mean_overlap_power(d, m) == pytest.approx(expected, abs=1e-15)

    def test_guards(self):
        with pytest.raises(ValueError):
            mean_overlap_power(1, 2)
        with pytest.raises(ValueError):
            mean_overlap_power(2, -1)
