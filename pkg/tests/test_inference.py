"""Tests for exact enumeration, the Gibbs sampler, and threshold grids."""
from __future__ import annotations

import math

import numpy as np
import pytest

import pttb
from pttb import (EnumerationCapError, ItemTable, NoisePrior, SamplerConfig,
                  ThresholdGrid, TtbStrategy, build_comparisons,
                  cue_rank_marginals, default_threshold_grid,
                  exhaustive_posterior, gibbs_sample)
from pttb.inference import cue_step_candidates

from conftest import empirical_tv, make_instance, strategy_key


def single_cue_comps(n_consistent: int) -> pttb.PairwiseComparisons:
    """Items on a line: all pairs agree with direction +1 on the one cue."""
    n = n_consistent + 1
    x = np.arange(n, dtype=float)[:, None]
    table = ItemTable(x, np.arange(n, dtype=float))
    pairs = [(i + 1, i) for i in range(n - 1)]
    return build_comparisons(table, pair_policy=pairs)


class TestExhaustivePosterior:
    def test_single_cue_direction_posterior(self):
        # Three consistent pairs: P(direction=+1) = (2 B(1,4)) /
        # (2 B(1,4) + 2 B(4,1)) = (15/32) / (15/32 + 1/32) = 15/16.
        comps = single_cue_comps(3)
        post = exhaustive_posterior(comps)
        assert post.n_entries == 2
        p_plus = sum(p for s, p in zip(post.strategies, post.probabilities)
                     if s.directions[0] == 1)
        assert p_plus == pytest.approx(15 / 16, rel=1e-12)

    def test_probabilities_sum_to_one(self, small_instances):
        for comps in small_instances:
            post = exhaustive_posterior(comps)
            assert post.probabilities.sum() == pytest.approx(1.0, abs=1e-9)

    def test_enumeration_size(self):
        comps = make_instance(0, n_items=6, n_cues=3)
        post = exhaustive_posterior(comps)
        assert post.n_entries == math.factorial(3) * 2**3

    def test_uniform_data_gives_uniform_posterior(self):
        # All pairs compare identical feature vectors: every strategy is
        # undecided everywhere, so the posterior equals the uniform prior.
        x = np.ones((4, 3))
        table = ItemTable(x, [4.0, 3.0, 2.0, 1.0])
        comps = build_comparisons(table)
        post = exhaustive_posterior(comps)
        assert post.n_entries == 48
        np.testing.assert_allclose(post.probabilities, 1 / 48, rtol=1e-12)

    def test_cap_exceeded(self):
        comps = make_instance(0, n_items=8, n_cues=4)
        with pytest.raises(EnumerationCapError):
            exhaustive_posterior(comps, cap=100)

    def test_relabeling_preserves_probability_values(self):
        comps = make_instance(1, n_items=8, n_cues=3)
        post = exhaustive_posterior(comps)
        perm = [2, 0, 1]  # old cue index -> new cue index
        inv = [1, 2, 0]
        x = comps.item_table.features[:, inv]
        table = ItemTable(x, comps.item_table.criterion)
        relabeled = pttb.PairwiseComparisons(table, comps.pairs, comps.weight)
        post2 = exhaustive_posterior(relabeled)
        lookup = {strategy_key(s): p
                  for s, p in zip(post2.strategies, post2.probabilities)}
        for s, p in zip(post.strategies, post.probabilities):
            mapped = TtbStrategy(
                tuple(perm[c] for c in s.order),
                tuple(s.directions[inv[c]] for c in range(3)),
                tuple(s.thresholds[inv[c]] for c in range(3)),
            )
            assert lookup[strategy_key(mapped)] == pytest.approx(p, rel=1e-9)

    def test_threshold_grid_expands_enumeration(self):
        comps = make_instance(2, n_items=8, n_cues=2)
        grid = default_threshold_grid(comps, k=4)
        post = exhaustive_posterior(comps, thresholds=grid)
        assert post.n_entries == 2 * 4 * grid.n_combinations


class TestThresholdGrid:
    def test_constant_cue_collapses_to_zero(self):
        x = np.column_stack([np.ones(5), np.arange(5.0)])
        table = ItemTable(x, np.arange(5.0))
        comps = build_comparisons(table)
        grid = default_threshold_grid(comps, k=4)
        assert grid.per_cue[0] == (0.0,)

    def test_quartile_values(self):
        # |delta| values {1,2,3,4} with linear-interpolation quantiles.
        x = np.array([[0.0], [1.0], [3.0], [6.0], [10.0]])
        table = ItemTable(x, np.arange(5.0))
        pairs = [(1, 0), (2, 1), (3, 2), (4, 3)]
        comps = build_comparisons(table, pair_policy=pairs)
        grid = default_threshold_grid(comps, k=4)
        assert grid.per_cue[0] == pytest.approx((0.0, 1.75, 2.5, 3.25))

    def test_k1_recovers_thresholdless_model(self):
        comps = make_instance(0, n_items=6, n_cues=2)
        grid = default_threshold_grid(comps, k=1)
        assert all(c == (0.0,) for c in grid.per_cue)

    def test_grid_must_be_sorted_nonnegative(self):
        with pytest.raises(ValueError):
            ThresholdGrid(((1.0, 0.5),))
        with pytest.raises(ValueError):
            ThresholdGrid(((-1.0, 0.0),))


class TestCueStepCandidates:
    def test_thresholdless_step_size(self):
        cands = cue_step_candidates([0, 1, 2, 3], [1, 1, 1, 1],
                                    [0.0] * 4, cue=2, cue_grid=(0.0,))
        assert len(cands) == 8  # M positions x 2 directions

    def test_with_threshold_grid(self):
        cands = cue_step_candidates([0, 1, 2], [1, -1, 1], [0.0] * 3,
                                    cue=0, cue_grid=(0.0, 0.5, 1.0))
        assert len(cands) == 3 * 2 * 3

    def test_contains_current_configuration(self):
        order, dirs, thrs = [2, 0, 1, 3], [1, -1, -1, 1], [0.0, 0.5, 0.0, 0.2]
        for cue in range(4):
            cands = cue_step_candidates(order, dirs, thrs, cue,
                                        (0.0, 0.2, 0.5))
            assert any(o == order and d == dirs and t == thrs
                       for o, d, t in cands)

    def test_other_cues_keep_relative_order(self):
        order = [3, 1, 0, 2]
        for cue in range(4):
            rest = [c for c in order if c != cue]
            for o, d, t in cue_step_candidates(order, [1] * 4, [0.0] * 4,
                                               cue, (0.0,)):
                assert [c for c in o if c != cue] == rest

    def test_all_candidates_valid_permutations(self):
        for o, d, t in cue_step_candidates([1, 0, 2], [1, 1, -1],
                                           [0.0] * 3, 1, (0.0, 1.0)):
            TtbStrategy(tuple(o), tuple(d), tuple(t))  # validates


class TestGibbsSampler:
    def test_seeded_determinism(self):
        comps = make_instance(0, n_items=10)
        cfg = SamplerConfig(samples=50, burn_in=10, seed=123)
        a = gibbs_sample(comps, config=cfg)
        b = gibbs_sample(comps, config=cfg)
        assert [strategy_key(s) for s in a.strategies] == \
            [strategy_key(s) for s in b.strategies]
        np.testing.assert_array_equal(a.log_post_trace, b.log_post_trace)

    def test_different_seeds_differ(self):
        comps = make_instance(0, n_items=10)
        a = gibbs_sample(comps, config=SamplerConfig(50, 10, seed=1))
        b = gibbs_sample(comps, config=SamplerConfig(50, 10, seed=2))
        assert [strategy_key(s) for s in a.strategies] != \
            [strategy_key(s) for s in b.strategies]

    def test_sample_count_and_trace_length(self):
        comps = make_instance(0, n_items=8)
        post = gibbs_sample(comps, config=SamplerConfig(25, 5, seed=0))
        assert len(post.strategies) == 25
        # trace: initial state plus one entry per sweep
        assert len(post.log_post_trace) == 1 + 25 + 5

    def test_total_variation_against_enumeration(self, small_instances):
        # Empirical sample frequencies must approach the exact posterior.
        for seed, comps in enumerate(small_instances):
            exact = exhaustive_posterior(comps)
            assert exact.n_entries == 384
            sampled = gibbs_sample(
                comps, config=SamplerConfig(10_000, 100, seed=seed + 100))
            assert empirical_tv(sampled, exact) < 0.05

    def test_tv_decreases_with_more_samples(self):
        comps = make_instance(0)
        exact = exhaustive_posterior(comps)
        tv_small = empirical_tv(
            gibbs_sample(comps, config=SamplerConfig(1_000, 100, 7)), exact)
        tv_large = empirical_tv(
            gibbs_sample(comps, config=SamplerConfig(20_000, 100, 7)), exact)
        assert tv_large < tv_small

    def test_init_strategy_honored(self):
        comps = make_instance(0, n_items=8, n_cues=3)
        init = TtbStrategy((2, 1, 0), (-1, -1, -1))
        post = gibbs_sample(comps, config=SamplerConfig(5, 0, 0), init=init)
        assert len(post.strategies) == 5

    def test_single_cue_marginal_matches_exact(self):
        comps = single_cue_comps(3)
        post = gibbs_sample(comps, config=SamplerConfig(20_000, 100, 0))
        p_plus = np.mean([s.directions[0] == 1 for s in post.strategies])
        assert p_plus == pytest.approx(15 / 16, abs=0.01)


class TestCueRankMarginals:
    def test_rows_sum_to_one_exact(self):
        comps = make_instance(0, n_items=8, n_cues=3)
        marg = cue_rank_marginals(exhaustive_posterior(comps))
        np.testing.assert_allclose(marg.sum(axis=1), 1.0, atol=1e-9)

    def test_uniform_posterior_gives_uniform_ranks(self):
        x = np.ones((4, 3))
        table = ItemTable(x, [4.0, 3.0, 2.0, 1.0])
        post = exhaustive_posterior(build_comparisons(table))
        marg = cue_rank_marginals(post)
        np.testing.assert_allclose(marg, 1 / 3, atol=1e-12)

    def test_concentrated_posterior_is_permutation_matrix(self):
        comps = make_instance(0, n_items=8, n_cues=3)
        post = exhaustive_posterior(comps)
        best = post.map_strategy()
        single = pttb.StrategyPosterior(
            mode="sampled", strategies=(best,),
            counts=post.counts[:1], log_unnorm=post.log_unnorm[:1],
            probabilities=None, burn_in=0, log_post_trace=None)
        marg = cue_rank_marginals(single)
        assert np.all((marg == 0) | (marg == 1))
        np.testing.assert_allclose(marg.sum(axis=0), 1.0)
        np.testing.assert_allclose(marg.sum(axis=1), 1.0)
