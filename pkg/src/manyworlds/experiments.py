"""Seeded statistical experiments on branching and measurement chains.

Four drivers: uniform-random overlap statistics, the polarizer chain and its
random-projection counterpart, world-count order-of-magnitude estimates, and
complexity random walks with a reflecting barrier at zero. Every trial draws
from its own (seed, trial index) generator and results are accumulated in
trial order, so reports are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .rng import gaussian_amplitude_batch, trial_rng

WALK_DEPTH_CAP = 24  # full-branching mode enumerates 2**depth histories

DEFAULT_UNIVERSE_AGE_S = 4.35e17
DEFAULT_PLANCK_TIME_S = 5.39e-44


@dataclass(frozen=True)
class OverlapReport:
    hilbert_dim: int
    trials: int
    mean_overlap_sq: float
    std_error: float
    seed: int


@dataclass(frozen=True)
class ZenoReport:
    n_intermediate: int
    transmission_probability: float
    mode: str                      # "deterministic-polarizer" | "random-projection"
    trials: Optional[int] = None   # random mode only
    seed: Optional[int] = None     # random mode only


@dataclass(frozen=True)
class WorldCountConfig:
    universe_age_s: float = DEFAULT_UNIVERSE_AGE_S
    planck_time_s: float = DEFAULT_PLANCK_TIME_S
    growth_model: str = "linear"   # "linear" | "exponential"

    def __post_init__(self):
        if not (self.universe_age_s > 0.0 and self.planck_time_s > 0.0):
            raise ValueError("ages and times must be positive")
        if self.universe_age_s <= self.planck_time_s:
            raise ValueError("universe age must exceed the elementary time step")
        if self.growth_model not in ("linear", "exponential"):
            raise ValueError(f"unknown growth model {self.growth_model!r}")


@dataclass(frozen=True)
class WorldCountReport:
    log10_ratio: float
    log10_worlds: Optional[float] = None          # linear model
    log10_log10_worlds: Optional[float] = None    # exponential model


@dataclass(frozen=True)
class ComplexityReport:
    depth: int
    mode: str                      # "single-history" | "full-branching"
    max_complexity: int
    mean_final_complexity: float
    branch_count: Optional[int] = None  # full-branching mode


def _mean_and_std_error(samples: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(samples))
    if samples.size < 2:
        return mean, 0.0
    return mean, float(np.std(samples, ddof=1) / math.sqrt(samples.size))


def _normalized_rows(raw: np.ndarray) -> np.ndarray:
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def overlap_statistics(dim: int, trials: int, seed: int) -> OverlapReport:
    """Average squared overlap of independent uniformly random state pairs.

    For states drawn uniformly on the unit sphere of an N-dimensional
    complex space the squared overlap follows Beta(1, N-1), so the mean
    tends to 1/N.
    """
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    overlaps = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        pair = _normalized_rows(gaussian_amplitude_batch(trial_rng(seed, t), 2, dim))
        overlaps[t] = abs(np.vdot(pair[0], pair[1])) ** 2
    mean, err = _mean_and_std_error(overlaps)
    return OverlapReport(dim, trials, mean, err, seed)


def polarizer_chain(k: int) -> ZenoReport:
    """Transmission through k equally rotated polarizers between crossed ones.

    A vertically prepared photon traverses k+1 projective stages, each
    rotated by pi/(2(k+1)) from the previous axis. Computed by sequential
    two-dimensional projection and cross-checked against the closed form
    cos^(2(k+1))(pi / (2(k+1))).
    """
    if k < 0:
        raise ValueError(f"intermediate lens count must be >= 0, got {k}")
    stages = k + 1
    step = math.pi / (2 * stages)
    probability = 1.0
    direction = np.array([1.0, 0.0])
    for m in range(1, stages + 1):
        axis = np.array([math.cos(m * step), math.sin(m * step)])
        amplitude = float(axis @ direction)
        probability *= amplitude**2
        direction = axis
    closed_form = math.cos(step) ** (2 * stages)
    if abs(probability - closed_form) > 1e-12:
        raise ArithmeticError(
            f"sequential projection {probability!r} disagrees with closed form {closed_form!r}"
        )
    return ZenoReport(k, probability, "deterministic-polarizer")


def random_projection_chain(dim: int, k: int, trials: int, seed: int) -> ZenoReport:
    """Mean survival-and-transition probability through k random projectors.

    Each trial draws an initial state, k rank-one intermediate projector
    states, and a final state, all uniformly at random, and multiplies the
    squared overlaps along the chain. With k = 0 this reduces exactly to
    the pairwise overlap statistic.
    """
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    if k < 0:
        raise ValueError(f"intermediate projector count must be >= 0, got {k}")
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    probs = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        states = _normalized_rows(
            gaussian_amplitude_batch(trial_rng(seed, t), k + 2, dim)
        )
        p = 1.0
        for stage in range(k + 1):
            p *= abs(np.vdot(states[stage], states[stage + 1])) ** 2
        probs[t] = p
    mean, _ = _mean_and_std_error(probs)
    return ZenoReport(k, mean, "random-projection", trials=trials, seed=seed)


def world_count(config: WorldCountConfig) -> WorldCountReport:
    """Order-of-magnitude world count from the age-to-elementary-time ratio.

    Works entirely in the log domain so arbitrarily extreme inputs cannot
    overflow. The linear model counts one world per elementary time step;
    the exponential model compounds the count once per step and is reported
    as a doubly-iterated log10.
    """
    log10_ratio = math.log10(config.universe_age_s) - math.log10(config.planck_time_s)
    if config.growth_model == "linear":
        return WorldCountReport(log10_ratio, log10_worlds=log10_ratio)
    # log10 log10 e^(ratio) = log10(ratio * log10 e), evaluated in logs
    log10_log10 = log10_ratio + math.log10(math.log10(math.e))
    return WorldCountReport(log10_ratio, log10_log10_worlds=log10_log10)


def evolution_walk(
    depth: int,
    mode: str,
    seed: int = 0,
    trials: int = 100_000,
) -> ComplexityReport:
    """Complexity random walk with a reflecting barrier at zero.

    Complexity starts at 0; each step is a +-1 mutation and a downward step
    at 0 stays at 0. In "full-branching" mode every one of the 2**depth
    outcome sequences is realized as its own branch (uniform weights), so
    the maximal branch always reaches complexity = depth. In
    "single-history" mode one seeded trajectory is followed per trial and
    statistics are taken over trials.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    if mode == "full-branching":
        if depth > WALK_DEPTH_CAP:
            raise ValueError(
                f"depth {depth} exceeds the exhaustive-enumeration cap {WALK_DEPTH_CAP}"
            )
        complexities = np.zeros(1, dtype=np.int8)
        for _ in range(depth):
            complexities = np.concatenate(
                [np.maximum(complexities - 1, 0), complexities + 1]
            )
        return ComplexityReport(
            depth=depth,
            mode=mode,
            max_complexity=int(complexities.max()),
            mean_final_complexity=float(complexities.mean(dtype=np.float64)),
            branch_count=int(complexities.size),
        )
    if mode == "single-history":
        if trials < 1:
            raise ValueError(f"need at least one trial, got {trials}")
        finals = np.empty(trials, dtype=np.int64)
        for t in range(trials):
            steps = trial_rng(seed, t).integers(0, 2, size=depth) * 2 - 1
            c = 0
            for s in steps:
                c = max(c + int(s), 0)
            finals[t] = c
        return ComplexityReport(
            depth=depth,
            mode=mode,
            max_complexity=int(finals.max()),
            mean_final_complexity=float(finals.mean(dtype=np.float64)),
            branch_count=None,
        )
    raise ValueError(f"unknown walk mode {mode!r}")
