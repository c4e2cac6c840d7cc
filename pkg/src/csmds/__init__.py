"""Gradient-free multidimensional scaling by randomized coordinate search.

Three optimizers share one engine (:func:`run_csmds`):

* full search evaluates all 2L signed axis steps of every point,
* randomized search evaluates each step with a fixed probability,
* bootstrapped search adapts those probabilities towards steps that
  recently won, down to a floor.

SMACOF and classical scaling (:mod:`csmds.baselines`) are provided for
comparison, along with Swiss-roll/geodesic targets, MNIST IDX loading and
a KNN accuracy harness.
"""

from ._backend import NAME as BACKEND
from .baselines import classical_mds, double_center, guttman_step, run_smacof, symmetric_eig
from .engine import (
    CandidateStep,
    MoveOutcome,
    config_for_variant,
    optimal_move,
    run_csmds,
    search_coordinates,
    update_probabilities,
)
from .stress import compute_distance_matrix, move_delta_stress, raw_stress, stress1
from .types import (
    Embedding,
    InvalidConfigError,
    ProbabilityMatrix,
    RunConfig,
    TargetMatrix,
    TraceRecord,
    ValidationError,
    Variant,
    bernoulli,
    validate_target,
)

__version__ = "0.1.0"
