"""Exact least squares for linear models with an intercept."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DimensionError, SingularDesignError

# Relative size of a QR pivot below which the design counts as rank deficient.
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class LinearSpec:
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"need p >= 1, got {self.p}")

    @property
    def n_params(self) -> int:
        return self.p + 1


def design_matrix(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.column_stack([np.ones(x.shape[0]), x])


def fit_ols(spec: LinearSpec, data: Dataset) -> np.ndarray:
    """Least-squares coefficients ``(theta0, theta1, ..., thetap)``.

    Solved through a QR factorization of the column-equilibrated design.
    Raises SingularDesignError when the design has rank below ``p + 1``.
    """
    if data.p != spec.p:
        raise DimensionError(f"data has {data.p} columns, model expects {spec.p}")
    k = spec.n_params
    a = design_matrix(data.x)
    if a.shape[0] < k:
        raise SingularDesignError(k, a.shape[0])
    norms = np.linalg.norm(a, axis=0)
    norms[norms == 0] = 1.0
    a_scaled = a / norms
    q, r = np.linalg.qr(a_scaled)
    diag = np.abs(np.diag(r))
    if diag.min() <= RANK_RTOL * diag.max():
        raise SingularDesignError(k, int(np.linalg.matrix_rank(a_scaled, tol=RANK_RTOL * diag.max())))
    coef = np.linalg.solve(np.triu(r), q.T @ data.y)
    return coef / norms


def predict_linear(theta, x) -> np.ndarray | float:
    theta = np.asarray(theta, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if theta.ndim != 1 or x.shape[-1] != theta.shape[0] - 1:
        raise DimensionError(
            f"theta of length {theta.shape[0]} does not match inputs of shape {x.shape}"
        )
    out = theta[0] + x @ theta[1:]
    return float(out) if np.ndim(out) == 0 else out
