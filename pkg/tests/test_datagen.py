import math

import numpy as np
import pytest

from bootselect.datagen import (
    EX2_SPEC,
    EX2_THETA,
    GenSpec,
    example2_mean,
    gen_example1,
    gen_example2,
    generate,
)
from bootselect.mlp import param_count


class TestExample1:
    def test_deterministic_columns(self):
        data = gen_example1(GenSpec("ex1", n=500, seed=1, include_x3=True))
        i = np.arange(1, 501, dtype=float)
        assert np.array_equal(data.x[:, 0], i)
        np.testing.assert_allclose(data.x[:, 1] ** 2, data.x[:, 0], rtol=0, atol=1e-12 * 500)
        np.testing.assert_allclose(data.x[:, 2] ** 2, data.x[:, 0] ** 3, rtol=1e-9)
        assert data.feature_names == ("x1", "x2", "x3")

    def test_row_four(self):
        data = gen_example1(GenSpec("ex1", n=5, seed=0, include_x3=True))
        assert data.x[3].tolist() == [4.0, 2.0, 8.0]
        assert 2 + 0.7 * 4 + 0.5 * 2 == pytest.approx(5.8)

    def test_without_x3(self):
        assert gen_example1(GenSpec("ex1", n=7)).p == 2

    @pytest.mark.parametrize("seed", range(5))
    def test_noise_moments(self, seed):
        data = gen_example1(GenSpec("ex1", n=500, seed=seed))
        eps = data.y - 2 - 0.7 * data.x[:, 0] - 0.5 * data.x[:, 1]
        assert -0.4 < eps.mean() < 0.4
        assert 2.8 < eps.var(ddof=1) < 5.4

    def test_seeded(self):
        a = gen_example1(GenSpec("ex1", n=50, seed=3))
        b = gen_example1(GenSpec("ex1", n=50, seed=3))
        c = gen_example1(GenSpec("ex1", n=50, seed=4))
        assert np.array_equal(a.y, b.y)
        assert not np.array_equal(a.y, c.y)


class TestExample2:
    def test_parameter_count(self):
        assert EX2_THETA.shape == (17,) == (param_count(2, 4),)
        assert EX2_SPEC.n_params == 17

    def test_noise_free_output_at_origin(self):
        # 0.5 + sum_h w_h * sigmoid(b_h), evaluated to 40 digits: 0.79652249445109322...
        expected = 0.5 + sum(
            w / (1 + math.exp(-b)) for w, b in zip((-0.1, 0.2, 0.5, -0.4), (0.2, 0.1, 3, 0.3))
        )
        assert example2_mean(np.zeros((1, 2)))[0] == pytest.approx(expected, abs=1e-15)
        assert example2_mean(np.zeros((1, 2)))[0] == pytest.approx(0.7965224944510932, abs=1e-15)

    @pytest.mark.parametrize("seed", range(5))
    def test_moments(self, seed):
        data = gen_example2(GenSpec("ex2", n=500, seed=seed))
        noise = data.y - example2_mean(data.x)
        assert 0.028 < noise.var(ddof=1) < 0.054
        assert abs(data.x[:, 0].mean() - 0.2) < 0.35
        assert 3.0 < data.x[:, 0].var(ddof=1) < 5.1
        assert abs(data.x[:, 1].mean() + 0.1) < 0.09
        assert 0.19 < data.x[:, 1].var(ddof=1) < 0.32

    def test_seeded(self):
        a = gen_example2(GenSpec("ex2", n=40, seed=8))
        b = gen_example2(GenSpec("ex2", n=40, seed=8))
        c = gen_example2(GenSpec("ex2", n=40, seed=9))
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
        assert not np.array_equal(a.y, c.y)

    def test_prefix_stable_in_n(self):
        small = gen_example2(GenSpec("ex2", n=10, seed=2))
        large = gen_example2(GenSpec("ex2", n=100, seed=2))
        assert np.array_equal(small.x, large.x[:10])


def test_dispatch_and_validation():
    assert generate(GenSpec("ex2", n=3)).p == 2
    with pytest.raises(ValueError):
        GenSpec("ex3")
    with pytest.raises(ValueError):
        GenSpec("ex1", n=0)
    with pytest.raises(ValueError):
        gen_example2(GenSpec("ex1", n=3))
