"""Simulated bases for the two worked examples.

Gaussian parameters are read as (mean, variance): example 1 noise has
variance 4, example 2 draws x1 ~ N(0.2, 4), x2 ~ N(-0.1, 0.25) and noise of
variance 0.04. Normals come from the package's SplitMix64 stream through
Box-Muller, so a seed always yields the same file.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .mlp import MlpSpec, predict
from .rng import Stream, derive_seed

EX1 = "ex1"
EX2 = "ex2"
_STREAM_KEY = {EX1: 101, EX2: 102}

EX1_COEF = (2.0, 0.7, 0.5)
EX1_NOISE_SD = 2.0

EX2_SPEC = MlpSpec(p=2, H=4)
# Listed order mapped onto the flat layout: w0, w1..w4, b1..b4, then input
# weights grouped by hidden unit.
EX2_THETA = np.array(
    [0.5, -0.1, 0.2, 0.5, -0.4, 0.2, 0.1, 3, 0.3, 2, 0.5, 0.1, 0.2, 2, 0.2, 3, 0.1],
    dtype=np.float64,
)
EX2_X_MEAN = (0.2, -0.1)
EX2_X_SD = (2.0, 0.5)
EX2_NOISE_SD = 0.2


@dataclass(frozen=True)
class GenSpec:
    example: str
    n: int = 500
    seed: int = 0
    include_x3: bool = False

    def __post_init__(self):
        if self.example not in (EX1, EX2):
            raise ValueError(f"unknown example {self.example!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")


def _stream(spec: GenSpec) -> Stream:
    return Stream(derive_seed(spec.seed, _STREAM_KEY[spec.example]))


def example1_mean(i) -> np.ndarray:
    i = np.asarray(i, dtype=np.float64)
    a, b, c = EX1_COEF
    return a + b * i + c * np.sqrt(i)


def gen_example1(spec: GenSpec) -> Dataset:
    if spec.example != EX1:
        raise ValueError("gen_example1 needs example='ex1'")
    i = np.arange(1, spec.n + 1, dtype=np.float64)
    cols = [i, np.sqrt(i)]
    if spec.include_x3:
        cols.append(i * np.sqrt(i))
    eps = EX1_NOISE_SD * _stream(spec).normal(spec.n)
    return Dataset(np.column_stack(cols), example1_mean(i) + eps)


def example2_mean(x) -> np.ndarray:
    return predict(EX2_SPEC, EX2_THETA, x)


def gen_example2(spec: GenSpec) -> Dataset:
    if spec.example != EX2:
        raise ValueError("gen_example2 needs example='ex2'")
    # one row = (x1, x2, noise) from consecutive normals
    z = _stream(spec).normal(3 * spec.n).reshape(spec.n, 3)
    x = np.column_stack(
        [EX2_X_MEAN[0] + EX2_X_SD[0] * z[:, 0], EX2_X_MEAN[1] + EX2_X_SD[1] * z[:, 1]]
    )
    return Dataset(x, example2_mean(x) + EX2_NOISE_SD * z[:, 2])


def generate(spec: GenSpec) -> Dataset:
    return gen_example1(spec) if spec.example == EX1 else gen_example2(spec)
