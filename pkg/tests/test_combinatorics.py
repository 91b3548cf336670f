import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcompare.combinatorics import (
    SignedPolynomial,
    binom,
    lemma_b_applies,
    poly_min_on_unit_interval,
    sym_dim,
)
from qcompare.validation import random_lemma_polynomial


@pytest.mark.parametrize("n, r, expected", [(4, 2, 6), (5, 0, 1), (3, 5, 0), (3, -1, 0), (0, 0, 1)])
def test_binom_examples(n, r, expected):
    assert binom(n, r) == expected


def test_binom_is_exact_beyond_64_bits():
    assert binom(120, 60) == math.factorial(120) // (math.factorial(60) ** 2)
    assert binom(120, 60) > 2**64


def test_binom_rejects_negative_n():
    with pytest.raises(ValueError):
        binom(-1, 0)


def _count_symmetric_monomials(d, n):
    return sum(1 for _ in itertools.combinations_with_replacement(range(d), n))


@pytest.mark.parametrize("d, n", [(2, 2), (3, 2), (2, 5), (4, 3), (5, 0), (1, 7)])
def test_sym_dim_matches_monomial_enumeration(d, n):
    assert sym_dim(d, n) == _count_symmetric_monomials(d, n)


def test_sym_dim_examples():
    assert sym_dim(2, 2) == 3
    assert sym_dim(3, 2) == 6
    assert sym_dim(7, 0) == 1


@given(st.integers(2, 40), st.integers(1, 40))
def test_sym_dim_pascal(d, n):
    assert sym_dim(d, n) == sym_dim(d - 1, n) + sym_dim(d, n - 1)


@given(st.integers(0, 200), st.data())
def test_binom_symmetric(n, data):
    r = data.draw(st.integers(-3, n + 3))
    assert binom(n, r) == binom(n, n - r)


class TestLemma:
    @pytest.mark.parametrize(
        "coeffs, expected",
        [([1, -1], True), ([-1, 1], False), ([0.5, 0.5, -1], True), ([1, -2, 1], False), ([0.0], True)],
    )
    def test_applies_examples(self, coeffs, expected):
        assert lemma_b_applies(SignedPolynomial(coeffs)) is expected

    def test_needs_root_at_one(self):
        assert not lemma_b_applies(SignedPolynomial([1.0, -0.5]))

    def test_tolerance_is_relative_to_largest_coefficient(self):
        big = SignedPolynomial([1e6, -1e6 + 1e-7])
        assert lemma_b_applies(big)

    def test_split_index(self):
        assert SignedPolynomial([2, 1, 0, -3]).r0 in (1, 2)
        assert SignedPolynomial([1, -1, 1]).r0 is None
        assert SignedPolynomial([-1, -1]).r0 == -1

    @pytest.mark.parametrize(
        "coeffs, grid",
        [([1, -1], 11), ([0, 1], 11), ([1, -2, 1], 101)],
    )
    def test_min_on_unit_interval(self, coeffs, grid):
        assert poly_min_on_unit_interval(SignedPolynomial(coeffs), grid) == pytest.approx(0.0, abs=1e-15)

    def test_min_grid_guard(self):
        with pytest.raises(ValueError):
            poly_min_on_unit_interval(SignedPolynomial([1.0]), 1)

    def test_empty_polynomial_rejected(self):
        with pytest.raises(ValueError):
            SignedPolynomial(())

    @given(st.integers(0, 2**32 - 1))
    def test_conclusion_on_random_polynomials(self, seed):
        p = random_lemma_polynomial(np.random.default_rng(seed))
        assert lemma_b_applies(p)
        assert poly_min_on_unit_interval(p, 1001) >= -1e-12
