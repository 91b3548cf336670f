"""Independent brute-force checks for the closed forms.

Nothing here uses the overlap-counting shortcut behind the closed-form
success probability: the symmetric projector is built from explicit
permutations, expectation values come from products of single-system inner
products, Haar averages from sampling, and the coherent-state failure
integral from a 2-D quadrature grid.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import finite

MAX_PERMUTATION_SITES = 8
MAX_PROJECTOR_DIM = 1024
STATE_NORM_TOL = 1e-12


def check_state(psi) -> np.ndarray:
    """Return ``psi`` as a complex vector, rejecting non-normalized input."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size == 0:
        raise ValueError("state must have at least one amplitude")
    norm = float(np.vdot(v, v).real)
    if abs(norm - 1.0) > STATE_NORM_TOL:
        raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
    return v


@dataclass(frozen=True)
class ProductState:
    """``factors[:boundary]`` hold copies of psi1, the rest copies of psi2."""

    factors: tuple[np.ndarray, ...]
    boundary: int

    @classmethod
    def from_pair(cls, psi1, psi2, k: int, l: int) -> "ProductState":
        if k < 1 or l < 1:
            raise ValueError(f"need k, l >= 1, got k={k}, l={l}")
        a, b = check_state(psi1), check_state(psi2)
        if a.shape != b.shape:
            raise ValueError("states live in different dimensions")
        return cls((a,) * k + (b,) * l, k)

    @property
    def sites(self) -> int:
        return len(self.factors)

    def vector(self) -> np.ndarray:
        return _kron_all(self.factors)


def _kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    workers: int = 1

    def z_score(self, exact: float) -> float:
        """Signed distance of ``exact`` from the estimate in standard errors."""
        diff = self.mean - exact
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error

    def agrees_with(self, exact: float, n_sigma: float = 3.0) -> bool:
        return abs(self.z_score(exact)) <= n_sigma


def haar_random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Unitarily invariant random pure state from normalized complex Gaussians."""
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    if d == 1:
        return np.ones(1, dtype=complex)
    return haar_random_states(d, 1, rng)[0]


def haar_random_states(d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent Haar states as the rows of a (size, d) array."""
    g = rng.standard_normal((size, d, 2))
    z = g[..., 0] + 1j * g[..., 1]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_pair(d: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    return haar_random_state(d, rng), haar_random_state(d, rng)


def overlap_squared(psi1, psi2) -> float:
    return float(abs(np.vdot(psi1, psi2)) ** 2)


def sym_overlap_permutation_sum(psi1, psi2, k: int, l: int) -> float:
    """<Psi|P_sym|Psi> for Psi = psi1^k (x) psi2^l, averaged over all (k+l)!
    site permutations, each term a fresh product of single-site overlaps."""
    state = ProductState.from_pair(psi1, psi2, k, l)
    n = state.sites
    if n > MAX_PERMUTATION_SITES:
        raise ValueError(f"k + l = {n} exceeds the enumeration cap {MAX_PERMUTATION_SITES}")
    f = state.factors
    total = 0j
    for sigma in itertools.permutations(range(n)):
        term = 1 + 0j
        for i, j in enumerate(sigma):
            term *= np.vdot(f[i], f[j])
        total += term
    return float((total / math.factorial(n)).real)


def _basis_digits(d: int, n: int) -> np.ndarray:
    return np.array(list(itertools.product(range(d), repeat=n)), dtype=np.int64).reshape(d**n, n)


def sym_projector_matrix(d: int, n: int, method: str = "auto") -> np.ndarray:
    """Dense projector onto the symmetric subspace of (C^d)^(x n).

    ``"enumerate"`` averages all n! permutation matrices.  ``"orbit"`` fills
    entry (i, j) with the fraction of permutations that carry basis word j to
    word i, which avoids the n! loop; ``"auto"`` enumerates up to 8 sites.
    """
    if d < 1 or n < 1:
        raise ValueError(f"need d, n >= 1, got d={d}, n={n}")
    D = d**n
    if D > MAX_PROJECTOR_DIM:
        raise ValueError(f"d^n = {D} exceeds the cap {MAX_PROJECTOR_DIM}")
    if method == "auto":
        method = "enumerate" if n <= MAX_PERMUTATION_SITES else "orbit"
    digits = _basis_digits(d, n)
    if method == "enumerate":
        place = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
        counts = np.zeros((D, D), dtype=np.int64)
        cols = np.arange(D)
        for sigma in itertools.permutations(range(n)):
            rows = digits[:, list(sigma)] @ place
            counts[rows, cols] += 1
        return counts.astype(complex) / math.factorial(n)
    if method == "orbit":
        words = [tuple(sorted(w)) for w in digits.tolist()]
        P = np.zeros((D, D), dtype=complex)
        for j in range(D):
            stab = math.prod(math.factorial(c) for c in np.bincount(digits[j], minlength=d))
            same = [i for i in range(D) if words[i] == words[j]]
            P[same, j] = stab / math.factorial(n)
        return P
    raise ValueError(f"unknown method {method!r}")


def _run_workers(
    samples: int, seed: int, workers: int, draw: Callable[[int, np.random.Generator], np.ndarray]
) -> np.ndarray:
    """Split ``samples`` into contiguous blocks, one seeded substream per
    worker, and concatenate the results in worker order."""
    if samples < 1:
        raise ValueError(f"need samples >= 1, got {samples}")
    if workers < 1:
        raise ValueError(f"need workers >= 1, got {workers}")
    children = np.random.SeedSequence(seed).spawn(workers)
    base, extra = divmod(samples, workers)
    sizes = [base + (1 if w < extra else 0) for w in range(workers)]
    jobs = [(size, np.random.default_rng(child)) for size, child in zip(sizes, children)]
    if workers == 1:
        parts = [draw(*jobs[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: draw(*job), jobs))
    return np.concatenate(parts)


def _estimate(values: np.ndarray, seed: int, workers: int) -> MCEstimate:
    n = values.size
    mean = float(np.mean(values))
    # a single sample carries no spread information; report zero
    se = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MCEstimate(mean, se, n, seed, workers)


def _haar_overlaps(d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if size == 0:
        return np.empty(0)
    a = haar_random_states(d, size, rng)
    b = haar_random_states(d, size, rng)
    return np.abs(np.einsum("ij,ij->i", a.conj(), b)) ** 2


def mc_average_success(
    spec: finite.EnsembleSpec, samples: int, seed: int, workers: int = 1
) -> MCEstimate:
    """Monte Carlo Haar average of the pure-state success probability."""

    def draw(size, rng):
        x = _haar_overlaps(spec.d, size, rng)
        return np.asarray(finite.success_prob_pure(np.clip(x, 0.0, 1.0), spec.k, spec.l))

    return _estimate(_run_workers(samples, seed, workers, draw), seed, workers)


def mc_mean_overlap_power(d: int, m: int, samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Monte Carlo estimate of E[|<psi1|psi2>|^(2m)] over Haar pairs."""
    if d < 1 or m < 0:
        raise ValueError(f"need d >= 1 and m >= 0, got d={d}, m={m}")

    def draw(size, rng):
        return _haar_overlaps(d, size, rng) ** m

    return _estimate(_run_workers(samples, seed, workers, draw), seed, workers)


def coherent_failure_quadrature(
    alpha1: complex,
    alpha2: complex,
    k: int,
    l: int,
    half_width: float = 8.0,
    points_per_axis: int = 201,
) -> float:
    """Success probability 1 - (k+l)/pi * integral of
    exp(-k|a1 - b|^2 - l|a2 - b|^2) over the complex plane.

    Tensor trapezoid rule on a square centred on the Gaussian peak
    (k a1 + l a2)/(k + l) with half side ``half_width / sqrt(k + l)``.
    """
    if k < 1 or l < 1:
        raise ValueError(f"need k, l >= 1, got k={k}, l={l}")
    if half_width <= 0:
        raise ValueError(f"half_width must be positive, got {half_width}")
    if points_per_axis < 16:
        raise ValueError(f"points_per_axis must be >= 16, got {points_per_axis}")
    n = k + l
    center = (k * alpha1 + l * alpha2) / n
    h = half_width / math.sqrt(n)
    t = np.linspace(-h, h, points_per_axis)
    w = np.full(points_per_axis, t[1] - t[0])
    w[0] = w[-1] = 0.5 * (t[1] - t[0])
    beta = center + t[:, None] + 1j * t[None, :]
    f = np.exp(-k * np.abs(alpha1 - beta) ** 2 - l * np.abs(alpha2 - beta) ** 2)
    integral = float(w @ f @ w)
    return 1.0 - n / math.pi * integral


def coherent_fock_vector(alpha: complex, cutoff: int) -> np.ndarray:
    """Number-basis amplitudes of |alpha> for n = 0..cutoff (unrenormalized)."""
    c = np.empty(cutoff + 1, dtype=complex)
    c[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, cutoff + 1):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


def fock_overlap_check(alpha: complex, beta: complex, cutoff: int) -> float:
    """|<alpha|beta>|^2 from truncated number-state expansions."""
    if cutoff < 1:
        raise ValueError(f"need cutoff >= 1, got {cutoff}")
    limit = math.sqrt(cutoff) / 2
    if abs(alpha) > limit or abs(beta) > limit:
        raise ValueError(f"|amplitude| must be <= sqrt(cutoff)/2 = {limit:.4g}")
    a = coherent_fock_vector(alpha, cutoff)
    b = coherent_fock_vector(beta, cutoff)
    return float(abs(np.vdot(a, b)) ** 2)
