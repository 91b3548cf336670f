"""Optimal unambiguous comparison of ensembles of pure and coherent states."""

from .coherent import (
    BeamSplitter,
    CoherentPair,
    DetectionOutcome,
    NetworkResult,
    Ordering,
    bs_transform,
    cascade_transmissivities,
    comparator_network,
    concentrate,
    copy_tradeoff,
    final_splitter,
    sample_detection,
    success_prob_coherent,
    success_prob_coherent_from_overlap,
)
from .combinatorics import SignedPolynomial, binom, lemma_b_applies, poly_min_on_unit_interval, sym_dim
from .finite import (
    EnsembleSpec,
    ProbabilityRangeError,
    avg_success,
    delta_extra_copy,
    lambda_split,
    limit_one_vs_infinity,
    mean_overlap_power,
    optimal_split,
    success_prob_pure,
)

__version__ = "0.1.0"
