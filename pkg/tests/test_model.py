"""Tests for the deterministic predictor, comparison data, and weighting."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pttb
from pttb import (ItemTable, PairwiseComparisons, PredictionOutcome,
                  TtbStrategy, build_comparisons, transitivity_weight,
                  ttb_predict)


@st.composite
def strategy_and_pair(draw, max_cues: int = 5):
    m = draw(st.integers(min_value=1, max_value=max_cues))
    order = draw(st.permutations(range(m)))
    dirs = draw(st.lists(st.sampled_from([-1, 1]), min_size=m, max_size=m))
    thrs = draw(st.lists(st.floats(min_value=0, max_value=2), min_size=m,
                         max_size=m))
    vec = st.lists(st.floats(min_value=-5, max_value=5, allow_nan=False),
                   min_size=m, max_size=m)
    x1 = draw(vec)
    x2 = draw(vec)
    return TtbStrategy(tuple(order), tuple(dirs), tuple(thrs)), x1, x2


class TestTtbPredict:
    def test_first_cue_decides(self):
        s = TtbStrategy((0, 1), (1, 1))
        assert ttb_predict(s, [1, 0], [0, 0]) is PredictionOutcome.FIRST_WINS

    def test_identical_items_undecided(self):
        s = TtbStrategy((1, 0), (-1, 1))
        assert ttb_predict(s, [2, 3], [2, 3]) is PredictionOutcome.UNDECIDED

    def test_threshold_blocks_first_cue(self):
        s = TtbStrategy((0, 1), (1, 1), (0.5, 0.0))
        out = ttb_predict(s, [0.3, 1], [0, 1])
        assert out is PredictionOutcome.UNDECIDED

    def test_search_order_respected(self):
        s = TtbStrategy((1, 0), (1, 1), (0.0, 0.5))
        out = ttb_predict(s, [0, 1], [0, 0.4])
        assert out is PredictionOutcome.FIRST_WINS

    def test_equality_with_threshold_does_not_discriminate(self):
        s = TtbStrategy((0,), (1,), (0.5,))
        assert ttb_predict(s, [0.5], [0.0]) is PredictionOutcome.UNDECIDED

    def test_dimension_mismatch(self):
        s = TtbStrategy((0, 1), (1, 1))
        with pytest.raises(ValueError):
            ttb_predict(s, [1, 2, 3], [0, 0, 0])

    @given(strategy_and_pair())
    @settings(max_examples=200, deadline=None)
    def test_antisymmetry(self, case):
        s, x1, x2 = case
        fwd = ttb_predict(s, x1, x2)
        rev = ttb_predict(s, x2, x1)
        flip = {PredictionOutcome.FIRST_WINS: PredictionOutcome.SECOND_WINS,
                PredictionOutcome.SECOND_WINS: PredictionOutcome.FIRST_WINS,
                PredictionOutcome.UNDECIDED: PredictionOutcome.UNDECIDED}
        assert rev is flip[fwd]

    @given(strategy_and_pair())
    @settings(max_examples=200, deadline=None)
    def test_direction_flip_duality(self, case):
        s, x1, x2 = case
        flipped = TtbStrategy(s.order, tuple(-d for d in s.directions),
                              s.thresholds)
        fwd = ttb_predict(s, x1, x2)
        rev = ttb_predict(flipped, x1, x2)
        flip = {PredictionOutcome.FIRST_WINS: PredictionOutcome.SECOND_WINS,
                PredictionOutcome.SECOND_WINS: PredictionOutcome.FIRST_WINS,
                PredictionOutcome.UNDECIDED: PredictionOutcome.UNDECIDED}
        assert rev is flip[fwd]

    @given(strategy_and_pair(), st.randoms(use_true_random=False))
    @settings(max_examples=200, deadline=None)
    def test_cue_relabeling_invariance(self, case, rnd):
        s, x1, x2 = case
        m = s.n_cues
        perm = list(range(m))
        rnd.shuffle(perm)
        # perm maps old cue index -> new cue index.
        inv = [0] * m
        for old, new in enumerate(perm):
            inv[new] = old
        relabeled = TtbStrategy(
            tuple(perm[c] for c in s.order),
            tuple(s.directions[inv[c]] for c in range(m)),
            tuple(s.thresholds[inv[c]] for c in range(m)),
        )
        rx1 = [x1[inv[c]] for c in range(m)]
        rx2 = [x2[inv[c]] for c in range(m)]
        assert ttb_predict(relabeled, rx1, rx2) is ttb_predict(s, x1, x2)

    def test_zero_delta_zero_thresholds_undecided(self):
        s = TtbStrategy((0, 1, 2), (1, -1, 1))
        assert ttb_predict(s, [0, 0, 0], [0, 0, 0]) is \
            PredictionOutcome.UNDECIDED


class TestStrategyValidation:
    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            TtbStrategy((0, 0), (1, 1))

    def test_rejects_bad_direction(self):
        with pytest.raises(ValueError):
            TtbStrategy((0, 1), (1, 2))

    def test_rejects_negative_threshold(self):
        with pytest.raises(ValueError):
            TtbStrategy((0, 1), (1, 1), (-0.1, 0.0))


class TestTransitivityWeight:
    def test_two_items_one_bit(self):
        assert transitivity_weight(2) == pytest.approx(1.0, abs=1e-14)

    def test_three_items(self):
        assert transitivity_weight(3) == pytest.approx(math.log2(6) / 3,
                                                       rel=1e-12)

    def test_four_items(self):
        assert transitivity_weight(4) == pytest.approx(math.log2(24) / 6,
                                                       rel=1e-12)

    def test_ten_items(self):
        assert transitivity_weight(10) == pytest.approx(
            math.log2(3628800) / 45, rel=1e-12)
        assert transitivity_weight(10) == pytest.approx(0.48425, abs=1e-5)

    def test_rejects_single_item(self):
        with pytest.raises(ValueError):
            transitivity_weight(1)


class TestBuildComparisons:
    def test_single_pair(self):
        table = ItemTable([[1.0], [2.0]], [3.0, 1.0])
        comps = build_comparisons(table)
        assert comps.n_pairs == 1
        assert comps.weight == 1.0
        ((i, j, y),) = comps.pairs
        crit = comps.item_table.criterion
        assert bool(y) == (crit[i] > crit[j])

    def test_all_tied_is_error(self):
        table = ItemTable([[1.0], [2.0]], [1.0, 1.0])
        with pytest.raises(ValueError, match="tied"):
            build_comparisons(table)

    def test_tied_pairs_excluded(self):
        table = ItemTable([[1.0], [2.0], [3.0]], [1.0, 1.0, 2.0])
        comps = build_comparisons(table)
        assert comps.n_pairs == 2  # the (0,1) tie is dropped

    def test_weight_applied_for_all_pairs(self):
        table = ItemTable([[1.0], [2.0], [3.0]], [3.0, 2.0, 1.0])
        comps = build_comparisons(table, apply_weight=True)
        assert comps.n_pairs == 3
        assert comps.weight == pytest.approx(math.log2(6) / 3, rel=1e-12)

    def test_no_weight_for_explicit_pair_subset(self):
        table = ItemTable([[1.0], [2.0], [3.0]], [3.0, 2.0, 1.0])
        comps = build_comparisons(table, pair_policy=[(0, 1)],
                                  apply_weight=True)
        assert comps.n_pairs == 1
        assert comps.weight == 1.0

    def test_rejects_duplicate_unordered_pair(self):
        table = ItemTable([[1.0], [2.0]], [3.0, 1.0])
        with pytest.raises(ValueError):
            PairwiseComparisons(table, pairs=((0, 1, 1), (1, 0, 0)))

    def test_rejects_self_pair(self):
        table = ItemTable([[1.0], [2.0]], [3.0, 1.0])
        with pytest.raises(ValueError):
            PairwiseComparisons(table, pairs=((0, 0, 1),))

    def test_fewer_than_two_items(self):
        with pytest.raises(ValueError):
            build_comparisons(ItemTable([[1.0]], [1.0]))


class TestItemTable:
    def test_arrays_are_read_only(self):
        table = ItemTable([[1, 2], [3, 4]], [1.0, 2.0])
        with pytest.raises(ValueError):
            table.features[0, 0] = 9.0

    def test_subset_preserves_columns(self):
        table = ItemTable([[1, 2], [3, 4], [5, 6]], [1, 2, 3],
                          cue_names=("a", "b"))
        sub = table.subset([2, 0])
        assert sub.n_items == 2
        assert sub.cue_names == ("a", "b")
        np.testing.assert_array_equal(sub.features, [[5, 6], [1, 2]])

    def test_rejects_ragged_rows(self):
        with pytest.raises(ValueError):
            ItemTable([[1, 2], [3]], [1, 2])
