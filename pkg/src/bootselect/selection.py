"""Resampling-based comparison of candidate models.

Each candidate is refit on B resampled bases and scored on the matching test
base; the per-replicate mean squared errors are summarized by their mean and
standard deviation, and candidates are ranked on both.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from .dataset import Dataset
from .errors import ReplicateFailed, SingularDesignError, TrainingDiverged
from .linreg import LinearSpec, fit_ols, predict_linear
from .mlp import MlpSpec, TrainConfig, fit_mlp
from .resampling import METHOD_KEY, ResamplePlan, Split, bootstrap_std, make_split
from .rng import derive_seed

LINEAR = "linear"
MLP = "mlp"
INIT_KEY = 7
DEFAULT_TAU = 0.05
DEFAULT_BINS = 20


@dataclass(frozen=True)
class ModelSpec:
    family: str
    p: int
    H: int | None = None
    name: str = ""

    def __post_init__(self):
        if self.family == LINEAR:
            if self.H is not None:
                raise ValueError("linear models take no hidden-unit count")
            LinearSpec(self.p)
        elif self.family == MLP:
            if self.H is None:
                raise ValueError("mlp models need H")
            MlpSpec(self.p, self.H)
        else:
            raise ValueError(f"unknown model family {self.family!r}")
        if not self.name:
            object.__setattr__(self, "name", self.label)

    @property
    def label(self) -> str:
        if self.family == LINEAR:
            return f"linear:p={self.p}"
        return f"mlp:p={self.p},H={self.H}"

    @property
    def n_params(self) -> int:
        if self.family == LINEAR:
            return LinearSpec(self.p).n_params
        return MlpSpec(self.p, self.H).n_params


@dataclass(frozen=True)
class ReplicateResult:
    replicate_index: int
    theta_hat: np.ndarray
    residuals: np.ndarray
    tsse: float
    tmse: float
    redraws_used: int = 0
    draw_log: tuple[int, ...] = ()


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray


@dataclass(frozen=True)
class ModelEntry:
    model: ModelSpec
    results: tuple[ReplicateResult, ...]
    failures: tuple[dict, ...]
    mu: float | None
    sigma: float | None
    histogram: Histogram | None

    @property
    def failed(self) -> bool:
        return self.mu is None

    @property
    def tmse_vector(self) -> np.ndarray:
        return np.array([r.tmse for r in self.results])


@dataclass(frozen=True)
class SelectionReport:
    method: str
    plan: ResamplePlan
    entries: tuple[ModelEntry, ...]

    def entry(self, name: str) -> ModelEntry:
        for e in self.entries:
            if e.model.name == name:
                return e
        raise KeyError(f"no model named {name!r} in the report")

    @property
    def ok(self) -> bool:
        return all(not e.failed for e in self.entries)


@dataclass(frozen=True)
class Ranking:
    order: tuple[str, ...]
    pareto: tuple[str, ...]
    failed: tuple[str, ...] = field(default=())

    @property
    def best(self) -> str:
        return self.order[0]


def fit_and_predict(model: ModelSpec, train: Dataset, test: Dataset, cfg: TrainConfig):
    """Fit ``model`` on ``train``; return (theta_hat, predictions on test)."""
    train = train.columns(model.p)
    test = test.columns(model.p)
    if model.family == LINEAR:
        theta = fit_ols(LinearSpec(model.p), train)
        return theta, np.atleast_1d(predict_linear(theta, test.x))
    fitted = fit_mlp(MlpSpec(model.p, model.H), train, cfg)
    return fitted.theta, fitted.predict(test.x)


def evaluate_replicate(model: ModelSpec, split: Split, cfg: TrainConfig) -> ReplicateResult:
    theta, pred = fit_and_predict(model, split.train, split.test, cfg)
    residuals = split.test.y - pred
    tsse = float(np.dot(residuals, residuals))
    return ReplicateResult(
        split.replicate_index,
        theta,
        residuals,
        tsse,
        tsse / residuals.shape[0],
        split.attempt,
        split.draw_log,
    )


def replicate_train_config(cfg: TrainConfig, plan: ResamplePlan, index: int, attempt: int) -> TrainConfig:
    seed = derive_seed(plan.master_seed, METHOD_KEY[plan.method], index, attempt, INIT_KEY)
    return replace(cfg, seed=seed)


def run_replicate(model: ModelSpec, base: Dataset, plan: ResamplePlan, cfg: TrainConfig, index: int):
    """One replicate with the redraw policy applied.

    Returns ``(result, log)`` where ``log`` lists every failed attempt.
    Raises ReplicateFailed once ``plan.max_redraws`` redraws are used up.
    """
    log = []
    for attempt in range(plan.max_redraws + 1):
        split = make_split(base, index, plan, attempt)
        try:
            result = evaluate_replicate(model, split, replicate_train_config(cfg, plan, index, attempt))
        except (SingularDesignError, TrainingDiverged) as exc:
            log.append({"replicate": index, "attempt": attempt, "error": str(exc)})
            last = exc
            continue
        return result, log
    exc = ReplicateFailed(index, plan.max_redraws + 1, last)
    exc.log = log
    raise exc


def _task(job, base, plan, cfg):
    model, index = job
    try:
        result, log = run_replicate(model, base, plan, cfg, index)
    except ReplicateFailed as exc:
        fatal = {"replicate": index, "attempt": exc.attempts, "error": str(exc), "fatal": True}
        return None, [*exc.log, fatal]
    return result, log


def run_selection(
    models,
    base: Dataset,
    plan: ResamplePlan,
    cfg: TrainConfig,
    workers: int = 1,
    bins: int = DEFAULT_BINS,
) -> SelectionReport:
    """Evaluate every model on the same B splits and summarize each.

    A model whose replicate exhausts its redraws is kept in the report with
    ``mu``/``sigma`` set to None and the failure logged.
    """
    models = list(models)
    if not models:
        raise ValueError("no models to evaluate")
    names = [m.name for m in models]
    if len(set(names)) != len(names):
        raise ValueError(f"model names must be unique, got {names}")
    if plan.B < 2:
        raise ValueError("B must be >= 2 to estimate a standard deviation")
    for m in models:
        if m.p > base.p:
            raise ValueError(f"model {m.name} needs {m.p} inputs but the data has {base.p}")

    jobs = [(m, b) for m in models for b in range(plan.B)]
    run = partial(_task, base=base, plan=plan, cfg=cfg)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, math.ceil(len(jobs) / (4 * workers)))
            outputs = list(pool.map(run, jobs, chunksize=chunk))
    else:
        outputs = [run(job) for job in jobs]

    entries = []
    for k, model in enumerate(models):
        block = outputs[k * plan.B : (k + 1) * plan.B]
        results = tuple(r for r, _ in block if r is not None)
        failures = tuple(item for _, log in block for item in log)
        if len(results) == plan.B:
            mu, sigma = bootstrap_std([r.tmse for r in results])
            hist = residual_histogram(results, bins)
        else:
            mu = sigma = None
            hist = residual_histogram(results, bins) if results else None
        entries.append(ModelEntry(model, results, failures, mu, sigma, hist))
    return SelectionReport(plan.method, plan, tuple(entries))



def residual_histogram(results, bins: int) -> Histogram:
    """Equal-width histogram of all test residuals.

    Bins are half-open ``[lo, hi)`` except the last, which is closed. A
    zero-width range is widened to ``[v - 0.5, v + 0.5]``.
    """
    values = [np.asarray(r.residuals, dtype=np.float64) for r in results]
    return histogram(np.concatenate(values) if values else np.empty(0), bins)


def histogram(values, bins: int) -> Histogram:
    if bins < 1:
        raise ValueError("bins must be >= 1")
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValueError("no residuals to bin")
    counts, edges = np.histogram(values, bins=bins)
    return Histogram(edges, counts.astype(np.int64))


def rank_scores(scores, tau: float = DEFAULT_TAU) -> Ranking:
    """Rank ``{name: (mu, sigma)}`` by the mu-band-then-sigma rule.

    Models whose mu is within a relative ``tau`` of the smallest mu come
    first, by ascending sigma; the rest follow by ascending mu. Remaining
    ties go by name. The Pareto set under joint minimization is returned
    alongside.
    """
    if not scores:
        raise ValueError("no successful models to rank")
    mu_min = min(mu for mu, _ in scores.values())
    limit = mu_min * (1.0 + tau)
    band = sorted((s, m, name) for name, (m, s) in scores.items() if m <= limit)
    rest = sorted((m, s, name) for name, (m, s) in scores.items() if m > limit)
    order = tuple(name for *_, name in band) + tuple(name for *_, name in rest)

    def dominated(name):
        m, s = scores[name]
        return any(
            (m2 <= m and s2 <= s) and (m2 < m or s2 < s)
            for other, (m2, s2) in scores.items()
            if other != name
        )

    pareto = tuple(name for name in order if not dominated(name))
    return Ranking(order, pareto)


def rank_models(report: SelectionReport, tau: float = DEFAULT_TAU) -> Ranking:
    scores = {e.model.name: (e.mu, e.sigma) for e in report.entries if not e.failed}
    failed = tuple(e.model.name for e in report.entries if e.failed)
    if not scores:
        raise ValueError("every model failed; nothing to rank")
    ranking = rank_scores(scores, tau)
    return Ranking(ranking.order, ranking.pareto, failed)
