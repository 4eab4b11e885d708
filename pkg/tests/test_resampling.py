import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bootselect.dataset import Dataset
from bootselect.resampling import (
    ResamplePlan,
    bootstrap_split,
    bootstrap_statistic,
    bootstrap_std,
    loo_split,
    make_split,
)
from oracles import naive_mean_std


def _base(n, p=2):
    x = np.arange(n * p, dtype=float).reshape(n, p)
    return Dataset(x, np.arange(n, dtype=float) * 10)


def test_single_row_bootstrap_is_the_base():
    base = _base(1)
    split = bootstrap_split(base, 0, ResamplePlan(B=3))
    assert split.draw_log == (0,)
    assert np.array_equal(split.train.x, base.x) and np.array_equal(split.train.y, base.y)


def test_bootstrap_split_shape_and_test_base():
    base = _base(17)
    split = bootstrap_split(base, 4, ResamplePlan(B=10, master_seed=3))
    assert split.train.n == 17
    assert split.test is base
    assert all(0 <= i < 17 for i in split.draw_log)
    assert np.array_equal(split.train.y, base.y[list(split.draw_log)])


def test_bootstrap_split_deterministic_and_order_free():
    base = _base(30)
    plan = ResamplePlan(B=8, master_seed=99)
    forward = [bootstrap_split(base, b, plan).draw_log for b in range(8)]
    backward = [bootstrap_split(base, b, plan).draw_log for b in reversed(range(8))][::-1]
    assert forward == backward
    assert len(set(forward)) == 8


def test_bootstrap_split_golden_draw():
    plan = ResamplePlan(B=2, master_seed=2024)
    assert bootstrap_split(_base(6), 1, plan).draw_log == (1, 0, 1, 2, 5, 1)  # pinned at first build


def test_redraw_attempts_use_fresh_streams():
    base = _base(40)
    plan = ResamplePlan(B=2, master_seed=5)
    assert bootstrap_split(base, 0, plan, 0).draw_log != bootstrap_split(base, 0, plan, 1).draw_log


def test_bootstrap_index_frequencies():
    base = _base(5)
    plan = ResamplePlan(B=10_000, master_seed=1)
    counts = np.zeros(5)
    for b in range(plan.B):
        counts += np.bincount(bootstrap_split(base, b, plan).draw_log, minlength=5)
    freq = counts / counts.sum()
    assert np.all(np.abs(freq - 0.2) < 0.01)


def test_replicate_index_out_of_range():
    with pytest.raises(IndexError):
        bootstrap_split(_base(3), 5, ResamplePlan(B=5))


class TestLoo:
    def test_two_rows(self):
        base = _base(2)
        plan = ResamplePlan(B=200, method="loo", master_seed=0)
        for b in range(plan.B):
            split = loo_split(base, b, plan)
            (held,) = split.draw_log
            assert split.test.y.tolist() == [base.y[held]]
            assert split.train.y.tolist() == [base.y[1 - held]]

    def test_partition_and_order(self):
        base = _base(9)
        plan = ResamplePlan(B=20, method="loo", master_seed=8)
        for b in range(plan.B):
            split = loo_split(base, b, plan)
            (held,) = split.draw_log
            assert split.train.n == 8 and split.test.n == 1
            assert held not in split.train.y / 10
            assert sorted([*split.train.y, *split.test.y]) == base.y.tolist()
            assert list(split.train.y) == sorted(split.train.y)

    def test_deterministic(self):
        base = _base(50)
        plan = ResamplePlan(B=5, method="loo", master_seed=77)
        assert loo_split(base, 3, plan).draw_log == loo_split(base, 3, plan).draw_log

    def test_uniform_holdout(self):
        base = _base(10)
        plan = ResamplePlan(B=10_000, method="loo", master_seed=2)
        held = [loo_split(base, b, plan).draw_log[0] for b in range(plan.B)]
        freq = np.bincount(held, minlength=10) / plan.B
        assert np.all(np.abs(freq - 0.1) < 0.01)

    def test_needs_two_rows(self):
        with pytest.raises(ValueError):
            loo_split(_base(1), 0, ResamplePlan(B=1, method="loo"))

    def test_make_split_dispatch(self):
        base = _base(6)
        plan = ResamplePlan(B=3, method="loo", master_seed=4)
        assert make_split(base, 2, plan).draw_log == loo_split(base, 2, plan).draw_log


class TestBootstrapStd:
    def test_constant(self):
        assert bootstrap_std([2.5] * 7) == (2.5, 0.0)

    def test_two_values(self):
        mean, std = bootstrap_std([0.0, 2.0])
        assert mean == 1.0
        assert std == pytest.approx(np.sqrt(2.0), abs=1e-15)

    @given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=200))
    def test_matches_naive_loop(self, values):
        mean, std = bootstrap_std(values)
        ref_mean, ref_std = naive_mean_std(values)
        assert mean == pytest.approx(ref_mean, abs=1e-9)
        assert std == pytest.approx(ref_std, abs=1e-9)

    @given(st.lists(st.floats(0, 10), min_size=2, max_size=50), st.randoms())
    def test_permutation_invariant(self, values, rnd):
        shuffled = list(values)
        rnd.shuffle(shuffled)
        np.testing.assert_allclose(bootstrap_std(shuffled), bootstrap_std(values), atol=1e-12)

    def test_needs_two_values(self):
        with pytest.raises(ValueError):
            bootstrap_std([1.0])


def test_bootstrap_statistic_of_the_mean():
    sample = np.random.default_rng(0).normal(size=400)
    values, mean, std = bootstrap_statistic(sample, np.mean, B=400, seed=1)
    assert values.shape == (400,)
    # standard error of a mean of 400 unit normals is about 0.05
    assert 0.04 < std < 0.06
    assert abs(mean - sample.mean()) < 0.01
