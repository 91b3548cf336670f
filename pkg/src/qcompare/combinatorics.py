"""Exact integer combinatorics and the sign-pattern positivity lemma.

Binomials and symmetric-subspace dimensions are Python ints, so they never
overflow.  The lemma helpers work on plain float coefficient lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-12


def binom(n: int, r: int) -> int:
    """C(n, r) with the convention C(n, r) = 0 outside 0 <= r <= n."""
    if n < 0:
        raise ValueError(f"binom requires n >= 0, got {n}")
    if r < 0 or r > n:
        return 0
    return math.comb(n, r)


def sym_dim(d: int, n: int) -> int:
    """Dimension of the symmetric subspace of n copies of a d-level system."""
    if d < 1 or n < 0:
        raise ValueError(f"sym_dim requires d >= 1 and n >= 0, got d={d}, n={n}")
    return binom(n + d - 1, d - 1)


@dataclass(frozen=True)
class SignedPolynomial:
    """Real polynomial sum_m a_m x^m, coefficients in increasing degree."""

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_fractions(cls, coefficients: Sequence[Fraction]) -> "SignedPolynomial":
        return cls(tuple(float(c) for c in coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def scale(self) -> float:
        return max(abs(c) for c in self.coefficients)

    def normalized(self) -> tuple[float, ...]:
        s = self.scale
        if s == 0.0:
            return self.coefficients
        return tuple(c / s for c in self.coefficients)

    def split_index(self, tol: float = DEFAULT_TOL) -> int | None:
        """Last index r0 with a_m >= -tol for m <= r0 and a_m <= tol beyond.

        Works on the max-abs normalized coefficients.  Returns -1 when every
        coefficient is nonpositive and None when no such r0 exists.
        """
        a = self.normalized()
        r0 = -1
        while r0 + 1 < len(a) and a[r0 + 1] >= -tol:
            r0 += 1
        if all(c <= tol for c in a[r0 + 1 :]):
            return r0
        return None

    @property
    def r0(self) -> int | None:
        return self.split_index()

    def __call__(self, x):
        # numpy wants the highest degree first
        return np.polyval(self.coefficients[::-1], x)

    def __neg__(self) -> "SignedPolynomial":
        return SignedPolynomial(tuple(-c for c in self.coefficients))


def lemma_b_applies(p: SignedPolynomial, tol: float = DEFAULT_TOL) -> bool:
    """Check the hypotheses of the positivity lemma on normalized coefficients.

    The polynomial must vanish at x = 1 and its coefficients must switch sign
    at most once, from nonnegative to nonpositive.  When both hold the
    polynomial is nonnegative on [0, 1].
    """
    a = p.normalized()
    if abs(math.fsum(a)) > tol:
        return False
    return p.split_index(tol) is not None


def poly_min_on_unit_interval(p: SignedPolynomial, grid_points: int = 1001) -> float:
    """Minimum of p over a uniform grid on [0, 1], both endpoints included."""
    if grid_points < 2:
        raise ValueError(f"grid_points must be >= 2, got {grid_points}")
    x = np.linspace(0.0, 1.0, grid_points)
    return float(np.min(p(x)))
