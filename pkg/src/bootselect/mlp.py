"""One-hidden-layer perceptron with sigmoid hidden units and a linear output.

Parameters live in a flat vector with the layout::

    (w0, w_1..w_H, b_1..b_H, w_in[1,1], ..., w_in[p,1], w_in[1,2], ..., w_in[p,H])

i.e. output bias, hidden-to-output weights, hidden biases, then the input
weights grouped by hidden unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dataset import Dataset
from .errors import DimensionError, TrainingDiverged
from .rng import Stream


@dataclass(frozen=True)
class MlpSpec:
    p: int
    H: int

    def __post_init__(self):
        if self.p < 1 or self.H < 1:
            raise ValueError(f"need p >= 1 and H >= 1, got p={self.p}, H={self.H}")

    @property
    def n_params(self) -> int:
        return param_count(self.p, self.H)


def param_count(p: int, H: int) -> int:
    return H * (p + 1) + H + 1


class Params(NamedTuple):
    w0: float
    w: np.ndarray  # (H,)
    b: np.ndarray  # (H,)
    w_in: np.ndarray  # (p, H); w_in[j, h] feeds input j into hidden unit h


def unflatten(spec: MlpSpec, theta) -> Params:
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (spec.n_params,):
        raise DimensionError(
            f"theta has shape {theta.shape}, expected ({spec.n_params},) for {spec}"
        )
    H, p = spec.H, spec.p
    return Params(
        float(theta[0]),
        theta[1 : 1 + H].copy(),
        theta[1 + H : 1 + 2 * H].copy(),
        theta[1 + 2 * H :].reshape(H, p).T.copy(),
    )


def flatten(params: Params) -> np.ndarray:
    w_in = np.asarray(params.w_in, dtype=np.float64)
    return np.concatenate(
        [[params.w0], np.ravel(params.w), np.ravel(params.b), w_in.T.ravel()]
    )


def sigmoid(x):
    """Logistic function, evaluated without overflow for any finite input."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out if out.ndim else float(out)


def _check_x(spec: MlpSpec, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.ndim != 2 or x.shape[1] != spec.p:
        raise DimensionError(f"inputs must have {spec.p} columns, got shape {x.shape}")
    return x


def predict(spec: MlpSpec, theta, x) -> np.ndarray:
    """Network outputs for each row of ``x``."""
    w0, w, b, w_in = unflatten(spec, theta)
    hidden = sigmoid(_check_x(spec, x) @ w_in + b)
    return w0 + hidden @ w


def forward(spec: MlpSpec, theta, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (spec.p,):
        raise DimensionError(f"x must have length {spec.p}, got shape {x.shape}")
    return float(predict(spec, theta, x)[0])


def mse(spec: MlpSpec, theta, data: Dataset) -> float:
    r = data.y - predict(spec, theta, data.x)
    return float(np.mean(r * r))


def loss_and_gradient(spec: MlpSpec, theta, x: np.ndarray, y: np.ndarray):
    """Mean squared error and its gradient by backpropagation."""
    w0, w, b, w_in = unflatten(spec, theta)
    x = _check_x(spec, x)
    n = y.shape[0]
    if n == 0:
        raise ValueError("empty dataset")
    s = sigmoid(x @ w_in + b)  # (n, H)
    r = y - (w0 + s @ w)
    d_out = (-2.0 / n) * r  # d loss / d output
    d_pre = np.outer(d_out, w) * s * (1.0 - s)  # (n, H)
    grad = np.empty(spec.n_params)
    H = spec.H
    grad[0] = d_out.sum()
    grad[1 : 1 + H] = s.T @ d_out
    grad[1 + H : 1 + 2 * H] = d_pre.sum(axis=0)
    grad[1 + 2 * H :] = (d_pre.T @ x).ravel()
    return float(np.mean(r * r)), grad


def gradient(spec: MlpSpec, theta, data: Dataset) -> np.ndarray:
    return loss_and_gradient(spec, theta, data.x, data.y)[1]


@dataclass(frozen=True)
class TrainConfig:
    max_epochs: int = 2000
    learning_rate: float = 0.1
    momentum: float = 0.9
    init_scale: float = 0.5
    tolerance: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must lie in [0, 1)")
        if not self.init_scale > 0:
            raise ValueError("init_scale must be > 0")
        if not self.tolerance >= 0:
            raise ValueError("tolerance must be >= 0")


def init_params(spec: MlpSpec, cfg: TrainConfig) -> np.ndarray:
    u = Stream(cfg.seed).uniform(spec.n_params)
    return (2.0 * u - 1.0) * cfg.init_scale


def train(spec: MlpSpec, data: Dataset, cfg: TrainConfig) -> np.ndarray:
    """Full-batch gradient descent with classical momentum.

    Stops after ``cfg.max_epochs`` steps, or once an epoch lowers the loss by
    less than ``cfg.tolerance`` (an epoch that raises the loss, as momentum
    overshoot can, does not count as a plateau). Returns the lowest-loss
    parameters visited, so the result is never worse than the initialization.

    Raises TrainingDiverged if the loss stops being finite.
    """
    if data.p != spec.p:
        raise DimensionError(f"data has {data.p} columns, model expects {spec.p}")
    theta = init_params(spec, cfg)
    velocity = np.zeros_like(theta)
    with np.errstate(over="ignore", invalid="ignore"):
        loss, grad = loss_and_gradient(spec, theta, data.x, data.y)
    if not (np.isfinite(loss) and np.isfinite(grad).all()):
        raise TrainingDiverged(0, loss)
    best_loss, best_theta = loss, theta
    for epoch in range(1, cfg.max_epochs + 1):
        velocity = cfg.momentum * velocity - cfg.learning_rate * grad
        theta = theta + velocity
        with np.errstate(over="ignore", invalid="ignore"):
            new_loss, grad = loss_and_gradient(spec, theta, data.x, data.y)
        if not (np.isfinite(new_loss) and np.isfinite(grad).all()):
            raise TrainingDiverged(epoch, new_loss)
        if new_loss < best_loss:
            best_loss, best_theta = new_loss, theta
        improvement = loss - new_loss
        loss = new_loss
        if 0 <= improvement < cfg.tolerance:
            break
    return best_theta


@dataclass(frozen=True)
class FittedMlp:
    """Trained network plus the input standardization it was trained under."""

    spec: MlpSpec
    theta: np.ndarray
    center: np.ndarray
    scale: np.ndarray

    def predict(self, x) -> np.ndarray:
        x = _check_x(self.spec, x)
        return predict(self.spec, self.theta, (x - self.center) / self.scale)


def fit_mlp(spec: MlpSpec, data: Dataset, cfg: TrainConfig) -> FittedMlp:
    """Standardize features with the training base's statistics, then train."""
    center = data.x.mean(axis=0)
    scale = data.x.std(axis=0)
    scale[scale == 0] = 1.0
    z = Dataset((data.x - center) / scale, data.y, data.feature_names)
    return FittedMlp(spec, train(spec, z, cfg), center, scale)
