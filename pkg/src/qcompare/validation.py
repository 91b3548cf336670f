"""Invariant suites run by ``qcompare validate``.

Every check returns a :class:`CheckResult` with the largest deviation it saw
and the tolerance it was held to.  Random inputs are drawn from streams
derived from the run seed, so a report is a pure function of
(seed, samples, workers).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import coherent, finite, oracle
from .combinatorics import SignedPolynomial, lemma_b_applies, poly_min_on_unit_interval

SUITES = ("oracle", "lemma", "coherent")

Check = tuple[str, Callable[[], "CheckResult | list[CheckResult]"]]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<36} max_dev={self.max_deviation:.3e}  tol={self.tolerance:.1e}"
        return f"{text}  {self.detail}" if self.detail else text


def derive_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, np.uint64)[0])


def _rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng([seed, *keys])


def _le(name: str, dev: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(dev <= tol), float(dev), tol, detail)


# --- oracle suite -----------------------------------------------------------


def check_closed_form_vs_permutations(seed: int, pairs: int = 100) -> CheckResult:
    rng = _rng(seed, 1)
    worst = 0.0
    for d in (2, 3):
        for k in range(1, 5):
            for l in range(1, 6 - k):
                for _ in range(pairs):
                    a, b = oracle.random_pair(d, rng)
                    brute = oracle.sym_overlap_permutation_sum(a, b, k, l)
                    closed = 1.0 - finite.success_prob_pure(oracle.overlap_squared(a, b), k, l)
                    worst = max(worst, abs(brute - closed))
    return _le("closed_form_vs_permutation_sum", worst, 1e-10)


def _small_shapes(max_dim: int = 256):
    for d in (2, 3, 4):
        n = 1
        while d**n <= max_dim:
            yield d, n
            n += 1


def check_projector_laws(seed: int) -> list[CheckResult]:
    herm = idem = trace = matrix_vs_sum = no_error = 0.0
    rng = _rng(seed, 2)
    for d, n in _small_shapes():
        P = oracle.sym_projector_matrix(d, n)
        herm = max(herm, float(np.max(np.abs(P - P.conj().T))))
        idem = max(idem, float(np.max(np.abs(P @ P - P))))
        trace = max(trace, abs(float(np.trace(P).real) - finite.sym_dim(d, n)))
        for _ in range(100):
            psi = oracle.haar_random_state(d, rng)
            v = oracle._kron_all([psi] * n)
            no_error = max(no_error, float((np.vdot(v, v) - np.vdot(v, P @ v)).real))
        if n >= 2:
            for _ in range(10):
                k = int(rng.integers(1, n))
                a, b = oracle.random_pair(d, rng)
                v = oracle.ProductState.from_pair(a, b, k, n - k).vector()
                via_matrix = float(np.vdot(v, P @ v).real)
                via_sum = oracle.sym_overlap_permutation_sum(a, b, k, n - k)
                matrix_vs_sum = max(matrix_vs_sum, abs(via_matrix - via_sum))
    return [
        _le("projector_hermitian", herm, 1e-12),
        _le("projector_idempotent", idem, 1e-12),
        _le("projector_trace_is_sym_dim", trace, 1e-10),
        _le("no_error_condition", no_error, 1e-12),
        _le("projector_matrix_vs_permutation_sum", matrix_vs_sum, 1e-10),
    ]


def check_average_vs_moments() -> CheckResult:
    mismatches = 0
    for d in range(2, 6):
        for k in range(1, 31):
            for l in range(1, 31):
                if finite.avg_success_from_moments(d, k, l) != finite.avg_success_exact(d, k, l):
                    mismatches += 1
    return CheckResult("average_dimension_ratio_vs_moments", mismatches == 0, float(mismatches), 0.0,
                       "exact rational comparison")


def check_mc_average(seed: int, samples: int, workers: int) -> CheckResult:
    worst = 0.0
    for i, (d, (k, l)) in enumerate(itertools.product((2, 3, 4), ((1, 1), (2, 1), (2, 2), (3, 2))), 1):
        spec = finite.EnsembleSpec(k, l, d)
        est = oracle.mc_average_success(spec, samples, derive_seed(seed, 3, i), workers)
        worst = max(worst, abs(est.z_score(finite.avg_success(d, k, l))))
    return _le("mc_average_success", worst, 3.0, f"|z| over 12 cases, {samples} samples")


def check_mc_overlap_powers(seed: int, samples: int, workers: int) -> CheckResult:
    worst = 0.0
    for i, (d, m) in enumerate(itertools.product((2, 3, 4), range(5)), 1):
        est = oracle.mc_mean_overlap_power(d, m, samples, derive_seed(seed, 4, i), workers)
        worst = max(worst, abs(est.z_score(finite.mean_overlap_power(d, m))))
    return _le("mc_mean_overlap_power", worst, 3.0, f"|z| over 15 cases, {samples} samples")


def oracle_suite(seed: int, samples: int, workers: int) -> list[Check]:
    return [
        ("closed_form_vs_permutation_sum", lambda: check_closed_form_vs_permutations(seed)),
        ("projector_laws", lambda: check_projector_laws(seed)),
        ("average_dimension_ratio_vs_moments", check_average_vs_moments),
        ("mc_average_success", lambda: check_mc_average(seed, samples, workers)),
        ("mc_mean_overlap_power", lambda: check_mc_overlap_powers(seed, samples, workers)),
    ]


# --- lemma suite ------------------------------------------------------------

GRID = np.linspace(0.0, 1.0, 1001)


def check_delta(max_copies: int = 12) -> list[CheckResult]:
    worst = 0.0
    not_applicable = []
    threshold_misses = []
    for k in range(1, max_copies + 1):
        for l in range(1, max_copies + 1):
            value, poly = finite.delta_extra_copy(GRID, k, l)
            worst = max(worst, float(-np.min(value)))
            if not lemma_b_applies(poly):
                not_applicable.append((k, l))
            thr = finite.delta_threshold(k, l)
            for m, a in enumerate(finite.delta_coefficients(k, l)):
                if a != 0 and (a > 0) != (m <= thr):
                    threshold_misses.append((k, l, m))
    return [
        _le("delta_extra_copy_nonnegative", worst, 1e-12),
        CheckResult("delta_lemma_hypotheses", not not_applicable, float(len(not_applicable)), 0.0,
                    f"failing (k,l): {not_applicable}" if not_applicable else ""),
        CheckResult("delta_sign_threshold", not threshold_misses, float(len(threshold_misses)), 0.0,
                    f"misses: {threshold_misses}" if threshold_misses else ""),
    ]


def check_lambda(max_total: int = 24) -> list[CheckResult]:
    worst = 0.0
    not_applicable = []
    for N in range(3, max_total + 1):
        for k in range(1, N - 1):
            sign = finite.lambda_sign(k, N)
            lam = np.asarray(finite.lambda_split(GRID, k, N))
            poly = finite.lambda_polynomial(k, N)
            if sign > 0:
                worst = max(worst, float(-lam.min()))
            elif sign < 0:
                worst = max(worst, float(lam.max()))
                poly = -poly
            else:
                worst = max(worst, float(np.abs(lam).max()))
            if sign != 0 and not lemma_b_applies(poly):
                not_applicable.append((k, N))
    return [
        _le("lambda_split_sign", worst, 1e-12),
        CheckResult("lambda_lemma_hypotheses", not not_applicable, float(len(not_applicable)), 0.0,
                    f"failing (k,N): {not_applicable}" if not_applicable else ""),
    ]


def check_split_optimum(max_total: int = 24) -> CheckResult:
    misses = []
    for N in range(2, max_total + 1):
        table = np.array([finite.success_prob_pure(GRID, k, N - k) for k in range(1, N)])
        best = table.max(axis=0)
        at_half = table[finite.optimal_split(N) - 1]
        gap = float(np.max(best - at_half))
        if gap > 1e-12:
            misses.append((N, gap))
    return CheckResult("split_argmax_is_half", not misses, float(len(misses)), 0.0,
                       f"misses: {misses}" if misses else "")


def check_symmetry_and_monotone(max_copies: int = 12) -> list[CheckResult]:
    asym = 0.0
    rise = 0.0
    for k in range(1, max_copies + 1):
        for l in range(1, max_copies + 1):
            p = finite.success_prob_pure(GRID, k, l)
            asym = max(asym, float(np.max(np.abs(p - finite.success_prob_pure(GRID, l, k)))))
            rise = max(rise, float(np.max(np.diff(p), initial=0.0)))
    return [_le("success_symmetric_in_k_l", asym, 0.0), _le("success_nonincreasing_in_x", rise, 1e-12)]


def check_lemma_on_random_polynomials(seed: int, count: int = 500) -> CheckResult:
    rng = _rng(seed, 5)
    worst = 0.0
    for _ in range(count):
        p = random_lemma_polynomial(rng)
        worst = max(worst, -poly_min_on_unit_interval(p, 1001))
    return _le("lemma_conclusion_random_polys", worst, 1e-12)


def random_lemma_polynomial(rng: np.random.Generator) -> SignedPolynomial:
    """Random polynomial with a +/- sign split and coefficients summing to 0."""
    r = int(rng.integers(1, 16))
    r0 = int(rng.integers(0, r))
    pos = rng.random(r0 + 1)
    neg = rng.random(r - r0)
    neg *= pos.sum() / neg.sum()
    return SignedPolynomial(tuple(pos) + tuple(-neg))


def lemma_suite(seed: int) -> list[Check]:
    return [
        ("delta_extra_copy", check_delta),
        ("lambda_split", check_lambda),
        ("split_argmax_is_half", check_split_optimum),
        ("success_symmetry_and_monotonicity", check_symmetry_and_monotone),
        ("lemma_conclusion_random_polys", lambda: check_lemma_on_random_polynomials(seed)),
    ]


# --- coherent suite ---------------------------------------------------------


def random_disc_points(rng: np.random.Generator, size: int, radius: float) -> list[complex]:
    """Points uniform on the disc |z| <= radius."""
    r = radius * np.sqrt(rng.random(size))
    theta = rng.uniform(0.0, 2 * math.pi, size)
    return [complex(z) for z in r * np.exp(1j * theta)]


def check_network_and_quadrature(seed: int, cases: int = 1000) -> list[CheckResult]:
    rng = _rng(seed, 6)
    net = quad = 0.0
    for _ in range(cases):
        a1, a2 = random_disc_points(rng, 2, radius=2.0)
        k, l = (int(v) for v in rng.integers(1, 6, 2))
        pair = coherent.CoherentPair(a1, a2, k, l)
        closed = coherent.success_prob_coherent(pair)
        net = max(net, abs(coherent.comparator_network(pair).success_prob - closed))
        quad = max(quad, abs(oracle.coherent_failure_quadrature(a1, a2, k, l) - closed))
    return [_le("network_vs_closed_form", net, 1e-12), _le("quadrature_vs_closed_form", quad, 1e-8)]


def check_cascade(seed: int) -> list[CheckResult]:
    rng = _rng(seed, 7)
    primary = residual = energy = 0.0
    for count in range(1, 11):
        for _ in range(100):
            alpha = complex(*rng.normal(size=2))
            out = coherent.concentrate([alpha] * count)
            primary = max(primary, abs(out[0] - math.sqrt(count) * alpha))
            residual = max(residual, float(np.max(np.abs(out[1:]), initial=0.0)))
            energy = max(energy, abs(float(np.sum(np.abs(out) ** 2)) - count * abs(alpha) ** 2))
    return [
        _le("cascade_primary_amplitude", primary, 1e-12),
        _le("cascade_residual_vacuum", residual, 1e-12),
        _le("cascade_energy_conserved", energy, 1e-12),
    ]


def check_detection(seed: int, samples: int) -> CheckResult:
    worst = 0.0
    for i, mean in enumerate((0.5, 1.0, 4.0), 1):
        counts = coherent.sample_photon_counts(math.sqrt(mean), samples, _rng(seed, 8, i))
        freq = float(np.mean(counts >= 1))
        p = -math.expm1(-mean)
        worst = max(worst, abs(freq - p) / math.sqrt(p * (1 - p) / samples))
    return _le("detection_click_frequency", worst, 3.0, f"|z| over 3 means, {samples} samples")


def check_copy_tradeoff() -> list[CheckResult]:
    extra = [(k, l) for k in range(1, 101) for l in range(1, 101)
             if coherent.copy_tradeoff(k + 1, l, k, l) is not coherent.Ordering.GREATER]
    split = []
    for N in range(2, 101):
        values = [k * (N - k) for k in range(1, N)]
        if values[N // 2 - 1] != max(values):
            split.append(N)
    return [
        CheckResult("coherent_extra_copy_helps", not extra, float(len(extra)), 0.0),
        CheckResult("coherent_split_argmax_is_half", not split, float(len(split)), 0.0),
    ]


def check_dominance() -> CheckResult:
    x = GRID[1:-1]
    worst = 0.0
    for k in range(1, 11):
        for l in range(1, 11):
            gap = finite.success_prob_pure(x, k, l) - coherent.success_prob_coherent_from_overlap(x, k, l)
            worst = max(worst, float(np.max(gap)))
    return _le("coherent_beats_generic", worst, 1e-12)


def check_fock_overlaps(seed: int) -> CheckResult:
    rng = _rng(seed, 9)
    worst = 0.0
    for _ in range(50):
        a, b = (complex(*rng.uniform(-1.5, 1.5, 2)) for _ in range(2))
        got = oracle.fock_overlap_check(a, b, 60)
        worst = max(worst, abs(got - math.exp(-abs(a - b) ** 2)))
    return _le("fock_overlap_vs_closed_form", worst, 1e-10)


def coherent_suite(seed: int, samples: int) -> list[Check]:
    return [
        ("network_and_quadrature", lambda: check_network_and_quadrature(seed)),
        ("cascade", lambda: check_cascade(seed)),
        ("detection_click_frequency", lambda: check_detection(seed, samples)),
        ("copy_tradeoff", check_copy_tradeoff),
        ("coherent_beats_generic", check_dominance),
        ("fock_overlap_vs_closed_form", lambda: check_fock_overlaps(seed)),
    ]


def _run_checks(checks: list[Check]) -> list[CheckResult]:
    results: list[CheckResult] = []
    for name, check in checks:
        try:
            out = check()
        except Exception as exc:  # a crashing check is a failed check
            results.append(CheckResult(name, False, math.inf, math.nan, f"raised {type(exc).__name__}: {exc}"))
            continue
        results.extend(out if isinstance(out, list) else [out])
    return results


def run_suite(suite: str, seed: int, samples: int, workers: int) -> list[CheckResult]:
    """Run one suite (or ``"all"``) and return its results in a fixed order."""
    builders: dict[str, Callable[[], list[Check]]] = {
        "oracle": lambda: oracle_suite(seed, samples, workers),
        "lemma": lambda: lemma_suite(seed),
        "coherent": lambda: coherent_suite(seed, samples),
    }
    if suite != "all" and suite not in builders:
        raise ValueError(f"unknown suite {suite!r}")
    names = SUITES if suite == "all" else (suite,)
    return [r for name in names for r in _run_checks(builders[name]())]
