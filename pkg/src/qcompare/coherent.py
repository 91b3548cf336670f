"""Comparison of coherent states and the beam-splitter network that does it.

Beam splitters send products of coherent states to products of coherent
states, so the network is simulated exactly on one complex amplitude per
mode.  Mode registers are 1-D complex numpy arrays.

Sign convention: a splitter maps (a, b) to (sqrt(T) a + sqrt(R) b,
-sqrt(R) a + sqrt(T) b).  After the final splitter the second output,
sqrt(kl/(k+l)) (alpha2 - alpha1), is the monitored (detector) port; it is
dark exactly when the two amplitudes agree.  The first output carries
(k alpha1 + l alpha2) / sqrt(k + l).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .finite import as_probability

SPLIT_TOL = 1e-14
IDENTICAL_TOL = 1e-12


@dataclass(frozen=True)
class CoherentPair:
    alpha1: complex
    alpha2: complex
    k: int = 1
    l: int = 1

    def __post_init__(self) -> None:
        if self.k < 1 or self.l < 1:
            raise ValueError(f"need k, l >= 1, got k={self.k}, l={self.l}")
        object.__setattr__(self, "alpha1", complex(self.alpha1))
        object.__setattr__(self, "alpha2", complex(self.alpha2))

    @property
    def effective_copies(self) -> float:
        """kl / (k + l), the weight multiplying |alpha1 - alpha2|^2."""
        return self.k * self.l / (self.k + self.l)


@dataclass(frozen=True)
class BeamSplitter:
    T: float
    R: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.T <= 1.0 and 0.0 <= self.R <= 1.0):
            raise ValueError(f"T and R must lie in [0, 1], got T={self.T}, R={self.R}")
        if abs(self.T + self.R - 1.0) > SPLIT_TOL:
            raise ValueError(f"T + R must equal 1, got {self.T + self.R!r}")

    @classmethod
    def from_ratio(cls, num: int, den: int) -> "BeamSplitter":
        """Splitter with T = num/den and R = (den - num)/den."""
        return cls(num / den, (den - num) / den)

    def matrix(self) -> np.ndarray:
        t, r = math.sqrt(self.T), math.sqrt(self.R)
        return np.array([[t, r], [-r, t]])


class DetectionOutcome(NamedTuple):
    clicked: bool
    photon_count: int


class NetworkResult(NamedTuple):
    detector_amplitude: complex
    success_prob: float
    bright_amplitude: complex


class Ordering(enum.Enum):
    GREATER = "greater"
    EQUAL = "equal"
    LESS = "less"


def success_prob_coherent(pair: CoherentPair) -> float:
    """1 - exp(-kl/(k+l) |alpha1 - alpha2|^2)."""
    mu = pair.effective_copies * abs(pair.alpha1 - pair.alpha2) ** 2
    return as_probability(-math.expm1(-mu))


def success_prob_coherent_from_overlap(x, k: int, l: int):
    """Coherent success written in the squared overlap x = exp(-|alpha1 - alpha2|^2).

    That is 1 - x^(kl/(k+l)); x = 0 gives 1.
    """
    if k < 1 or l < 1:
        raise ValueError(f"need k, l >= 1, got k={k}, l={l}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("squared overlap must lie in [0, 1]")
    return as_probability(1.0 - arr ** (k * l / (k + l)))


def bs_transform(a: complex, b: complex, bs: BeamSplitter) -> tuple[complex, complex]:
    t, r = math.sqrt(bs.T), math.sqrt(bs.R)
    return t * a + r * b, -r * a + t * b


def cascade_transmissivities(count: int) -> list[BeamSplitter]:
    """Splitters T_j = j/(j+1), j = 1..count-1, that pile count copies into one mode."""
    if count < 1:
        raise ValueError(f"need count >= 1, got {count}")
    return [BeamSplitter.from_ratio(j, j + 1) for j in range(1, count)]


def concentrate(register) -> np.ndarray:
    """Map count copies of |alpha> to |sqrt(count) alpha> (x) vacua.

    Splitter j merges the running mode 0 (holding sqrt(j) alpha) with fresh
    copy j; the discarded port of each splitter lands in mode j.
    """
    modes = np.array(register, dtype=complex).reshape(-1)
    if modes.size == 0:
        raise ValueError("register must hold at least one mode")
    if not np.all(np.isfinite(modes)):
        raise ValueError("register amplitudes must be finite")
    if np.max(np.abs(modes - modes[0])) > IDENTICAL_TOL:
        raise ValueError("concentrate needs identical input amplitudes")
    for j, bs in enumerate(cascade_transmissivities(modes.size), start=1):
        modes[0], modes[j] = bs_transform(modes[0], modes[j], bs)
    return modes


def final_splitter(k: int, l: int) -> BeamSplitter:
    """T_f = k/(k+l), R_f = l/(k+l), so that k R_f = l T_f."""
    if k < 1 or l < 1:
        raise ValueError(f"need k, l >= 1, got k={k}, l={l}")
    return BeamSplitter.from_ratio(k, k + l)


def comparator_network(pair: CoherentPair) -> NetworkResult:
    """Run both concentration cascades and the final splitter.

    The click probability at the detector port equals the optimal coherent
    success probability.
    """
    a = concentrate(np.full(pair.k, pair.alpha1))[0]
    b = concentrate(np.full(pair.l, pair.alpha2))[0]
    bright, dark = bs_transform(a, b, final_splitter(pair.k, pair.l))
    success = as_probability(-math.expm1(-abs(dark) ** 2))
    return NetworkResult(complex(dark), success, complex(bright))


def sample_detection(detector_amplitude: complex, rng: np.random.Generator) -> DetectionOutcome:
    """One shot of an ideal photon-number-resolving detector."""
    mean = abs(complex(detector_amplitude)) ** 2
    if not math.isfinite(mean):
        raise ValueError("detector amplitude must be finite")
    count = int(rng.poisson(mean))
    return DetectionOutcome(count >= 1, count)


def sample_photon_counts(detector_amplitude: complex, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent photon counts at the detector."""
    mean = abs(complex(detector_amplitude)) ** 2
    if not math.isfinite(mean):
        raise ValueError("detector amplitude must be finite")
    return rng.poisson(mean, size=size)


def copy_tradeoff(m: int, n: int, k: int, l: int) -> Ordering:
    """Order (m, n) copies against (k, l) copies by coherent success.

    Compares mn/(m+n) with kl/(k+l) by integer cross-multiplication.
    """
    if min(m, n, k, l) < 1:
        raise ValueError("all copy counts must be >= 1")
    lhs, rhs = m * n * (k + l), k * l * (m + n)
    if lhs > rhs:
        return Ordering.GREATER
    if lhs < rhs:
        return Ordering.LESS
    return Ordering.EQUAL
