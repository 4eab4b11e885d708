"""Bootstrap and randomized leave-one-out splits of an initial base.

Replicate ``b`` (redraw attempt ``a``) of method ``m`` reads from the stream
seeded with ``derive_seed(master_seed, METHOD_KEY[m], b, a)``. A split is
therefore a function of its own coordinates only and is the same whatever
order, or process, it is built in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .rng import Stream, derive_seed

BOOTSTRAP = "bootstrap"
LOO = "loo"
METHODS = (BOOTSTRAP, LOO)
METHOD_KEY = {BOOTSTRAP: 1, LOO: 2}


@dataclass(frozen=True)
class ResamplePlan:
    B: int = 50
    method: str = BOOTSTRAP
    master_seed: int = 0
    max_redraws: int = 3

    def __post_init__(self):
        if self.B < 1:
            raise ValueError("B must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.max_redraws < 0:
            raise ValueError("max_redraws must be >= 0")


@dataclass(frozen=True)
class Split:
    train: Dataset
    test: Dataset
    replicate_index: int
    draw_log: tuple[int, ...]
    attempt: int = 0


def replicate_seed(plan: ResamplePlan, replicate_index: int, attempt: int = 0) -> int:
    return derive_seed(plan.master_seed, METHOD_KEY[plan.method], replicate_index, attempt)


def _check_index(plan: ResamplePlan, replicate_index: int) -> None:
    if not 0 <= replicate_index < plan.B:
        raise IndexError(f"replicate_index {replicate_index} outside [0, {plan.B})")


def bootstrap_split(
    base: Dataset, replicate_index: int, plan: ResamplePlan, attempt: int = 0
) -> Split:
    """Train on n uniform draws with replacement; test on the whole base."""
    _check_index(plan, replicate_index)
    stream = Stream(replicate_seed(plan, replicate_index, attempt))
    idx = stream.integers(base.n, base.n)
    return Split(base.take(idx), base, replicate_index, tuple(int(i) for i in idx), attempt)


def loo_split(
    base: Dataset, replicate_index: int, plan: ResamplePlan, attempt: int = 0
) -> Split:
    """Hold out one uniformly drawn row; train on the remaining n - 1."""
    if base.n < 2:
        raise ValueError("leave-one-out needs at least two observations")
    _check_index(plan, replicate_index)
    stream = Stream(replicate_seed(plan, replicate_index, attempt))
    held = int(stream.integers(base.n, 1)[0])
    keep = np.delete(np.arange(base.n), held)
    return Split(base.take(keep), base.take([held]), replicate_index, (held,), attempt)


def make_split(base: Dataset, replicate_index: int, plan: ResamplePlan, attempt: int = 0) -> Split:
    if plan.method == BOOTSTRAP:
        return bootstrap_split(base, replicate_index, plan, attempt)
    return loo_split(base, replicate_index, plan, attempt)


def bootstrap_std(values) -> tuple[float, float]:
    """Mean and (B - 1)-divisor standard deviation of replicate statistics."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 2:
        raise ValueError("need at least two replicate values")
    mean = float(np.mean(v))
    return mean, float(np.sqrt(np.sum((v - mean) ** 2) / (v.shape[0] - 1)))


def bootstrap_statistic(sample, statistic, B: int, seed: int) -> tuple[np.ndarray, float, float]:
    """Bootstrap replicates of ``statistic`` over a 1-D or row-indexed sample.

    Returns the replicate values with their mean and standard deviation.
    """
    sample = np.asarray(sample)
    n = sample.shape[0]
    values = np.empty(B)
    for b in range(B):
        idx = Stream(derive_seed(seed, 0, b)).integers(n, n)
        values[b] = statistic(sample[idx])
    mean, std = bootstrap_std(values)
    return values, mean, std
