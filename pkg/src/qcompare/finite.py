"""Optimal unambiguous comparison of k copies of one unknown pure state with
l copies of another.

The optimal measurement projects onto the symmetric subspace of all k + l
systems (inconclusive) or its complement (the states differ).  The success
probability depends on the states only through the squared overlap
x = |<psi1|psi2>|^2, so everything here takes x rather than state vectors.

Scalar inputs are evaluated in exact rational arithmetic and rounded once.
Array inputs use the factored form P(x) = (1 - x) * sum_j t_j x^j, where t_j
is the tail sum of the failure coefficients beyond degree j.  All t_j are
positive, so the float evaluation vanishes exactly at x = 1 and never goes
negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Real

import numpy as np

from .combinatorics import SignedPolynomial, binom, sym_dim

CLAMP_TOL = 1e-14


class ProbabilityRangeError(ValueError):
    """A computed probability left [0, 1] by more than round-off."""


@dataclass(frozen=True)
class EnsembleSpec:
    k: int
    l: int
    d: int = 2

    def __post_init__(self) -> None:
        if self.k < 1 or self.l < 1:
            raise ValueError(f"need k, l >= 1, got k={self.k}, l={self.l}")
        if self.d < 2:
            raise ValueError(f"need d >= 2, got d={self.d}")

    @property
    def n(self) -> int:
        return self.k + self.l


def _check_copies(k: int, l: int) -> None:
    if k < 1 or l < 1:
        raise ValueError(f"need k, l >= 1, got k={k}, l={l}")


def _check_overlap(x) -> None:
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("squared overlap must lie in [0, 1]")


def as_probability(p):
    """Clamp round-off excursions below CLAMP_TOL, reject anything larger."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr < -CLAMP_TOL) or np.any(arr > 1.0 + CLAMP_TOL):
        worst = float(arr.min()) if np.any(arr < -CLAMP_TOL) else float(arr.max())
        raise ProbabilityRangeError(f"probability {worst!r} outside [0, 1]")
    clipped = np.clip(arr, 0.0, 1.0)
    if clipped.ndim == 0:
        return float(clipped)
    return clipped


@lru_cache(maxsize=4096)
def failure_coefficients(k: int, l: int) -> tuple[Fraction, ...]:
    """Coefficients c_m = C(k,m) C(l,m) / C(k+l,k) of <Psi|P_sym|Psi> in x^m."""
    _check_copies(k, l)
    total = binom(k + l, k)
    return tuple(Fraction(binom(k, m) * binom(l, m), total) for m in range(min(k, l) + 1))


def success_coefficients(k: int, l: int) -> list[Fraction]:
    """Exact coefficients of the success probability as a polynomial in x."""
    c = failure_coefficients(k, l)
    return [1 - c[0]] + [-cm for cm in c[1:]]


def _eval_exact(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _is_scalar(x) -> bool:
    return isinstance(x, (Real, Fraction)) and not isinstance(x, bool)


def _tail_sums(k: int, l: int) -> tuple[float, ...]:
    c = failure_coefficients(k, l)
    return tuple(float(sum(c[j + 1 :], Fraction(0))) for j in range(len(c) - 1))


def success_prob_pure(x, k: int, l: int):
    """Optimal probability of revealing that psi1 != psi2.

    ``x`` is the squared overlap, a float or an array of floats.
    """
    _check_overlap(x)
    if _is_scalar(x):
        return as_probability(float(_eval_exact(success_coefficients(k, l), Fraction(x))))
    x = np.asarray(x, dtype=float)
    tails = _tail_sums(k, l)
    acc = np.zeros_like(x)
    for t in reversed(tails):
        acc = acc * x + t
    return as_probability((1.0 - x) * acc)


def avg_success_exact(d: int, k: int, l: int) -> Fraction:
    """Haar-averaged success probability as an exact rational."""
    EnsembleSpec(k, l, d)
    return 1 - Fraction(sym_dim(d, k + l), sym_dim(d, k) * sym_dim(d, l))


def avg_success(d: int, k: int, l: int) -> float:
    """One minus the ratio of the joint symmetric-subspace dimension to the
    product of the individual ones."""
    return as_probability(float(avg_success_exact(d, k, l)))


def avg_success_from_moments(d: int, k: int, l: int) -> Fraction:
    """Same average, summed term by term from the overlap moments E[x^m]."""
    EnsembleSpec(k, l, d)
    return 1 - sum(
        (c * mean_overlap_power_exact(d, m) for m, c in enumerate(failure_coefficients(k, l))),
        Fraction(0),
    )


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [p - q for p, q in zip(a, b)]


def delta_coefficients(k: int, l: int) -> list[Fraction]:
    """Exact coefficients of P(x, k+1, l) - P(x, k, l)."""
    return _poly_sub(success_coefficients(k + 1, l), success_coefficients(k, l))


def delta_threshold(k: int, l: int) -> Fraction:
    """Degree at which the extra-copy coefficients are expected to turn negative.

    Coefficients with m <= (k+1) l / (k+l+1) should be nonnegative and the
    rest negative.  Used only to cross-check the empirical sign pattern.
    """
    return Fraction((k + 1) * l, k + l + 1)


def delta_extra_copy(x, k: int, l: int) -> tuple[float, SignedPolynomial]:
    """Gain from one extra copy of the first state.

    Returns the gain at ``x`` together with the gain as a polynomial in x.
    """
    value = success_prob_pure(x, k + 1, l) - success_prob_pure(x, k, l)
    return value, SignedPolynomial.from_fractions(delta_coefficients(k, l))


def _check_split(k: int, N: int) -> None:
    if not 1 <= k <= N - 2:
        raise ValueError(f"need 1 <= k <= N - 2, got k={k}, N={N}")


def lambda_coefficients(k: int, N: int) -> list[Fraction]:
    """Exact coefficients of P(x, k+1, N-k-1) - P(x, k, N-k)."""
    _check_split(k, N)
    return _poly_sub(success_coefficients(k + 1, N - k - 1), success_coefficients(k, N - k))


def lambda_polynomial(k: int, N: int) -> SignedPolynomial:
    return SignedPolynomial.from_fractions(lambda_coefficients(k, N))


def lambda_split(x, k: int, N: int):
    """Change in success when one of N fixed copies moves from the second
    ensemble to the first."""
    _check_split(k, N)
    return success_prob_pure(x, k + 1, N - k - 1) - success_prob_pure(x, k, N - k)


def lambda_sign(k: int, N: int) -> int:
    """Expected sign of ``lambda_split``: +1 while the move balances the split,
    -1 once it unbalances it, 0 when both splits are mirror images."""
    _check_split(k, N)
    if 2 * k + 1 == N:
        return 0
    return 1 if 2 * k + 1 < N else -1


def optimal_split(N: int) -> int:
    """Number of copies of the first state that maximizes success for N total."""
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    return N // 2


def limit_one_vs_infinity(x):
    """Success with one copy against infinitely many: 1 - x."""
    _check_overlap(x)
    return as_probability(1.0 - np.asarray(x, dtype=float))


def mean_overlap_power_exact(d: int, m: int) -> Fraction:
    if d < 2 or m < 0:
        raise ValueError(f"need d >= 2 and m >= 0, got d={d}, m={m}")
    return Fraction(1, binom(m + d - 1, d - 1))


def mean_overlap_power(d: int, m: int) -> float:
    """Haar average of |<psi1|psi2>|^(2m) over independent pure states."""
    return float(mean_overlap_power_exact(d, m))
