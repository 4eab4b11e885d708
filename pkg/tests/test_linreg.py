import math

import numpy as np
import pytest

from bootselect.dataset import Dataset
from bootselect.errors import DimensionError, SingularDesignError
from bootselect.linreg import LinearSpec, design_matrix, fit_ols, predict_linear


def _linear_data(n=10, noise=0.0, seed=0):
    rng = np.random.default_rng(seed)
    i = np.arange(1, n + 1, dtype=float)
    x = np.column_stack([i, np.sqrt(i)])
    return Dataset(x, 2 + 0.7 * x[:, 0] + 0.5 * x[:, 1] + noise * rng.normal(size=n))


def test_recovers_noise_free_coefficients():
    theta = fit_ols(LinearSpec(2), _linear_data())
    np.testing.assert_allclose(theta, [2.0, 0.7, 0.5], atol=1e-8)


def test_constant_response():
    rng = np.random.default_rng(1)
    data = Dataset(rng.normal(size=(12, 3)), np.full(12, 4.25))
    np.testing.assert_allclose(fit_ols(LinearSpec(3), data), [4.25, 0, 0, 0], atol=1e-12)


def test_collinear_design_is_singular():
    x = np.array([[1.0, 2.0], [2.0, 3.0], [3.0, 4.0]])  # x2 = x1 + 1
    with pytest.raises(SingularDesignError) as info:
        fit_ols(LinearSpec(2), Dataset(x, np.array([1.0, 2.0, 4.0])))
    assert info.value.deficiency == 1


def test_repeated_rows_are_singular():
    x = np.array([[1.0, 5.0]] * 4)
    with pytest.raises(SingularDesignError) as info:
        fit_ols(LinearSpec(2), Dataset(x, np.arange(4.0)))
    assert info.value.deficiency == 2


def test_too_few_rows_are_singular():
    with pytest.raises(SingularDesignError):
        fit_ols(LinearSpec(2), Dataset(np.array([[1.0, 2.0], [3.0, 5.0]]), np.ones(2)))


def test_width_mismatch():
    with pytest.raises(DimensionError):
        fit_ols(LinearSpec(1), _linear_data())


def test_residuals_orthogonal_to_design():
    data = _linear_data(n=200, noise=2.0, seed=3)
    a = design_matrix(data.x)
    r = data.y - a @ fit_ols(LinearSpec(2), data)
    for col in a.T:
        assert abs(col @ r) < 1e-8 * np.linalg.norm(col) * np.linalg.norm(r)


def test_poorly_scaled_design():
    # columns 1, i, sqrt(i), i**1.5 span five orders of magnitude
    i = np.arange(1, 501, dtype=float)
    x = np.column_stack([i, np.sqrt(i), i**1.5])
    truth = np.array([2.0, 0.7, 0.5, 1e-3])
    theta = fit_ols(LinearSpec(3), Dataset(x, predict_linear(truth, x)))
    np.testing.assert_allclose(theta, truth, rtol=1e-7, atol=1e-9)


def test_duplicated_rows_give_same_fit():
    data = _linear_data(n=30, noise=1.0, seed=4)
    doubled = Dataset(np.vstack([data.x, data.x]), np.concatenate([data.y, data.y]))
    np.testing.assert_allclose(
        fit_ols(LinearSpec(2), doubled), fit_ols(LinearSpec(2), data), rtol=1e-10, atol=1e-10
    )


def test_ols_beats_perturbations():
    data = _linear_data(n=50, noise=2.0, seed=5)
    a = design_matrix(data.x)
    theta = fit_ols(LinearSpec(2), data)
    best = np.mean((data.y - a @ theta) ** 2)
    rng = np.random.default_rng(6)
    for _ in range(100):
        delta = rng.normal(scale=1e-3, size=3)
        assert best <= np.mean((data.y - a @ (theta + delta)) ** 2)


class TestPredict:
    def test_intercept_only(self):
        assert predict_linear([1.0, 0.0, 0.0], [5.0, -3.0]) == 1.0

    def test_identity(self):
        assert predict_linear([0.0, 1.0], [3.0]) == 3.0

    def test_example_point(self):
        expected = 2 + 7 + 0.5 * math.sqrt(10)  # 10.58113883008418966...
        assert predict_linear([2, 0.7, 0.5], [10, math.sqrt(10)]) == pytest.approx(expected, abs=1e-13)
        assert expected == pytest.approx(10.581138830084189, abs=1e-14)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            predict_linear([1.0, 2.0], [1.0, 2.0])
