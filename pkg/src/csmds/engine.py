"""Coordinate-search MDS: full-search, randomized and bootstrapped variants.

Each epoch visits every point once, in ascending index order. A point draws
the subset of its 2L signed axis steps to evaluate (one Bernoulli draw per
step, from its row of the probability matrix), moves greedily along the
step with the lowest stress, and, for the bootstrapped variant, shifts
probability mass towards the winning step. The search radius halves when an
epoch's relative stress improvement drops to ``epsilon`` or below, and the
run stops once the radius falls to ``delta``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import _backend
from .stress import move_delta_stress, raw_stress
from .types import (
    CONSISTENCY_TOL,
    ConsistencyError,
    Embedding,
    InvalidConfigError,
    ProbabilityMatrix,
    RunConfig,
    RunState,
    TargetMatrix,
    TraceRecord,
    Variant,
    bernoulli,
    make_rng,
)

_VARIANT_DEFAULTS = {
    Variant.FULL_SEARCH: {"p_init": 1.0, "p_a": 0.0, "p_th": 0.0},
    Variant.RANDOMIZED: {"p_init": 0.7, "p_a": 0.0, "p_th": 0.0},
    Variant.BOOTSTRAPPED: {"p_init": 0.7, "p_a": 0.05, "p_th": 0.2},
}


@dataclass(frozen=True)
class CandidateStep:
    dim: int
    sign: int
    radius: float

    def displacement(self, l: int) -> np.ndarray:
        v = np.zeros(l)
        v[self.dim] = self.sign * self.radius
        return v

    def column(self, l: int) -> int:
        return self.dim if self.sign > 0 else self.dim + l


@dataclass(frozen=True)
class MoveOutcome:
    chosen: CandidateStep | None  # None is the zero step
    new_stress: float
    evaluated: int

    @property
    def is_zero_step(self) -> bool:
        return self.chosen is None


class EpochResult(NamedTuple):
    moves: np.ndarray  # accepted column per point, -1 for the zero step
    point_stress: np.ndarray  # stress after each point's move
    evals: int


class CSMDSResult(NamedTuple):
    embedding: Embedding
    trace: list
    probabilities: ProbabilityMatrix
    converged: bool
    state: RunState  # final radius, halvings, evals


def config_for_variant(variant, l: int, overrides: dict | None = None) -> RunConfig:
    """Build a :class:`RunConfig` with the variant's forced and default settings.

    Raises :class:`InvalidConfigError` when ``overrides`` contradict the
    variant, e.g. a full search with ``p_init=0.5``.
    """
    v = Variant.parse(variant)
    overrides = {k: val for k, val in (overrides or {}).items() if val is not None}
    unknown = set(overrides) - set(RunConfig.__dataclass_fields__) - {"variant", "l"}
    if unknown:
        raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
    params = dict(_VARIANT_DEFAULTS[v])
    params.update(overrides)
    params.pop("variant", None)
    params.pop("l", None)
    return RunConfig(variant=v, l=l, **params)


def search_coordinates(r: float, i: int, p: ProbabilityMatrix, rng) -> list[CandidateStep]:
    """Sample the signed axis steps point ``i`` evaluates this epoch.

    Draw order is fixed (ascending dimension, + before -), one Bernoulli
    draw per step.
    """
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    l = p.l
    row = p.probs[i]
    steps = []
    for s in range(l):
        if bernoulli(row[s], rng):
            steps.append(CandidateStep(s, 1, r))
        if bernoulli(row[s + l], rng):
            steps.append(CandidateStep(s, -1, r))
    return steps


def optimal_move(t: TargetMatrix, emb: Embedding, i: int, candidates, e: float,
                 check: bool = True) -> MoveOutcome:
    """Apply the best strictly-improving candidate step for point ``i``.

    Ties on equal stress go to the earliest candidate; the zero step wins
    only when no candidate lowers the stress. ``emb`` is updated in place.
    """
    if check:
        full = raw_stress(t, emb.distances)
        if abs(full - e) > CONSISTENCY_TOL * max(abs(full), 1.0):
            raise ConsistencyError(f"stale stress: given {e!r}, actual {full!r}")
    best, best_stress, best_row = None, e, None
    for step in candidates:
        cand = emb.coords[i] + step.displacement(emb.l)
        new_stress, row = move_delta_stress(t, emb, i, cand, stress=e)
        if new_stress < best_stress:
            best, best_stress, best_row = step, new_stress, row
    if best is not None:
        emb.coords[i] += best.displacement(emb.l)
        emb.distances[i, :] = best_row
        emb.distances[:, i] = best_row
    return MoveOutcome(best, best_stress, len(candidates))


def update_probabilities(p: ProbabilityMatrix, i: int, outcome: MoveOutcome,
                         p_a: float, p_th: float) -> ProbabilityMatrix:
    """Return a copy of ``p`` with point ``i``'s row reinforced towards the winning step.

    The winner is raised by ``2 * p_a`` (capped at 1), then every entry of
    the row, winner included, is lowered by ``p_a`` (floored at ``p_th``).
    """
    if outcome.is_zero_step or p_a == 0:
        return p
    out = p.copy()
    row = out.probs[i]
    col = outcome.chosen.column(p.l)
    row[col] = min(row[col] + 2.0 * p_a, 1.0)
    np.maximum(row - p_a, p_th, out=row)
    return out


def init_run(t: TargetMatrix, config: RunConfig):
    """Random initial embedding, probability matrix and run state."""
    if t.n < 2:
        raise ValueError(f"need at least 2 points, got {t.n}")
    rng = make_rng(config.seed)
    emb = Embedding.from_coords(rng.random((t.n, config.l)))
    probs = ProbabilityMatrix.full(t.n, config.l, config.p_init)
    state = RunState(epoch=0, radius=float(config.r0),
                     stress=raw_stress(t, emb.distances), prev_stress=math.inf,
                     evals=0, rng=rng)
    return emb, probs, state


def run_epoch(t: TargetMatrix, emb: Embedding, probs: ProbabilityMatrix,
              state: RunState, config: RunConfig, backend: str | None = None) -> EpochResult:
    """One pass over all points at the current radius; mutates its arguments."""
    kernels = _backend.BACKENDS[backend] if backend else _backend
    n, l = emb.coords.shape
    # all draws for the epoch come off the stream before any evaluation
    uniforms = state.rng.random((n, 2 * l))
    moves = np.empty(n, dtype=np.int64)
    point_stress = np.empty(n)
    before = state.stress
    stress, evals = kernels.csmds_epoch(
        t.values, emb.coords, emb.distances, probs.probs, uniforms,
        float(state.radius), float(state.stress), float(config.p_a),
        float(config.p_th), moves, point_stress)
    state.prev_stress = before
    state.stress = float(stress)
    state.evals += int(evals)
    state.epoch += 1
    return EpochResult(moves, point_stress, int(evals))


def run_csmds(t: TargetMatrix, config: RunConfig, backend: str | None = None,
              on_epoch: Callable | None = None) -> CSMDSResult:
    """Optimize an embedding of ``t`` with coordinate search.

    Parameters
    ----------
    t : TargetMatrix
        Dissimilarities to reproduce.
    config : RunConfig
        Variant and hyperparameters; see :func:`config_for_variant`.
    backend : {"cython", "python"}, optional
        Kernel implementation; defaults to the one picked at import.
    on_epoch : callable, optional
        Called as ``on_epoch(state, epoch_result, embedding, probabilities)``
        after every epoch. The last two are live objects; copy before keeping.

    Returns
    -------
    CSMDSResult
        Final embedding, per-epoch trace (record 0 is the initial state),
        final probability matrix, whether the radius reached ``delta``
        before ``max_epochs``, and the final run state.
    """
    emb, probs, state = init_run(t, config)
    start = time.perf_counter()
    trace = [TraceRecord(0, state.stress, state.radius, 0, 0.0)]
    while state.radius > config.delta:
        if state.epoch >= config.max_epochs:
            break
        if state.prev_stress - state.stress <= config.epsilon * state.stress:
            state.radius /= 2.0
            state.halvings += 1
            if state.radius <= config.delta:
                break
        result = run_epoch(t, emb, probs, state, config, backend)
        trace.append(TraceRecord(state.epoch, state.stress, state.radius, state.evals,
                                 (time.perf_counter() - start) * 1e3))
        if on_epoch is not None:
            on_epoch(state, result, emb, probs)
    converged = state.radius <= config.delta
    return CSMDSResult(emb, trace, probs, converged, state)

