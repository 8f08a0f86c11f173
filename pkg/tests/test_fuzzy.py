import numpy as np
import pytest
from hypothesis import given, strategies as st

from nextpage import fuzzy

from helpers import random_partition


class TestDefaultPartition:
    def test_breakpoints_at_600(self):
        p = fuzzy.default_partition(600.0)
        short, medium, long_ = p.sets
        assert (short.a, short.b, short.c, short.d) == (0.0, 0.0, 30.0, 90.0)
        assert (medium.a, medium.b, medium.c, medium.d) == (30.0, 90.0, 210.0, 330.0)
        assert (long_.a, long_.b, long_.c, long_.d) == (210.0, 330.0, 600.0, 600.0)

    def test_zero_dwell_is_fully_short(self):
        for max_td in (1.0, 600.0, 1800.0, 86400.0):
            v = fuzzy.eval_raw(fuzzy.default_partition(max_td), 0.0)
            assert v.raw == (1.0, 0.0, 0.0)

    def test_threshold_dwell_is_fully_long(self):
        for max_td in (1.0, 600.0, 1800.0):
            v = fuzzy.eval_raw(fuzzy.default_partition(max_td), max_td)
            assert v.raw == (0.0, 0.0, 1.0)

    def test_nonpositive_max_td_rejected(self):
        with pytest.raises(ValueError):
            fuzzy.default_partition(0.0)
        with pytest.raises(ValueError):
            fuzzy.default_partition(-5.0)


class TestEvalRaw:
    def test_midpoint_of_short_medium_crossover(self):
        p = fuzzy.default_partition(1800.0)
        v = fuzzy.eval_raw(p, 0.10 * 1800.0)
        assert v.raw == pytest.approx((0.5, 0.5, 0.0), abs=1e-12)

    def test_clamp_beyond_threshold(self):
        p = fuzzy.default_partition(900.0)
        assert fuzzy.eval_raw(p, 2 * 900.0).raw == (0.0, 0.0, 1.0)
        assert fuzzy.eval_raw(p, 900.0 + 1e-9).raw == (0.0, 0.0, 1.0)

    def test_negative_dwell_rejected(self):
        p = fuzzy.default_partition()
        with pytest.raises(ValueError):
            fuzzy.eval_raw(p, -1.0)
        with pytest.raises(ValueError):
            fuzzy.eval_raw_many(p, np.array([1.0, -2.0]))

    @given(st.floats(min_value=0.0, max_value=1e6, allow_nan=False))
    def test_raw_values_stay_in_unit_interval(self, tau):
        p = fuzzy.default_partition(1800.0)
        raw = fuzzy.eval_raw(p, tau).raw
        assert all(0.0 <= x <= 1.0 for x in raw)


class TestNormalize:
    @pytest.mark.parametrize("raw,expected", [
        ((0.5, 0.5, 0.0), (0.5, 0.5, 0.0)),
        ((0.2, 0.6, 0.2), (0.2, 0.6, 0.2)),
        ((0.4, 0.4, 0.0), (0.5, 0.5, 0.0)),
    ])
    def test_examples(self, raw, expected):
        v = fuzzy.normalize(fuzzy.MembershipVector(raw=raw))
        assert v.normalized == pytest.approx(expected, abs=1e-12)
        assert v.raw == raw

    def test_all_zero_raw_rejected(self):
        with pytest.raises(ValueError):
            fuzzy.normalize(fuzzy.MembershipVector(raw=(0.0, 0.0, 0.0)))

    def test_unit_sum_on_grid_for_random_partitions(self):
        rng = np.random.default_rng(5)
        taus = np.linspace(0.0, 1800.0, 2001)
        for _ in range(10):
            p = random_partition(rng, n_sets=int(rng.integers(2, 6)))
            norm = fuzzy.normalize_many(fuzzy.eval_raw_many(p, taus))
            np.testing.assert_allclose(norm.sum(axis=1), 1.0, atol=1e-9, rtol=0)


class TestPartitionValidation:
    def test_needs_two_sets(self):
        with pytest.raises(ValueError):
            fuzzy.FuzzyTimePartition(
                max_td=10.0, sets=(fuzzy.FuzzySet("only", 0, 0, 10, 10),)
            )

    def test_first_set_must_cover_zero(self):
        with pytest.raises(ValueError, match="dwell 0"):
            fuzzy.FuzzyTimePartition(max_td=10.0, sets=(
                fuzzy.FuzzySet("a", 0, 1, 5, 6),
                fuzzy.FuzzySet("b", 5, 6, 10, 10),
            ))

    def test_last_set_must_saturate(self):
        with pytest.raises(ValueError, match="saturate"):
            fuzzy.FuzzyTimePartition(max_td=10.0, sets=(
                fuzzy.FuzzySet("a", 0, 0, 5, 6),
                fuzzy.FuzzySet("b", 5, 6, 9, 10),
            ))

    def test_coverage_gap_rejected(self):
        with pytest.raises(ValueError, match="zero membership"):
            fuzzy.FuzzyTimePartition(max_td=10.0, sets=(
                fuzzy.FuzzySet("a", 0, 0, 2, 3),
                fuzzy.FuzzySet("b", 7, 8, 10, 10),
            ))

    def test_bad_shoulder_order_rejected(self):
        with pytest.raises(ValueError):
            fuzzy.FuzzySet("bad", 5, 4, 6, 7)

    def test_coverage_everywhere_on_grid(self):
        rng = np.random.default_rng(8)
        taus = np.linspace(0.0, 1800.0, 5001)
        for _ in range(10):
            p = random_partition(rng)
            raw = fuzzy.eval_raw_many(p, taus)
            assert (raw.sum(axis=1) > 0.0).all()


def test_clamp_vector_is_constant_beyond_threshold():
    p = fuzzy.default_partition(100.0)
    taus = np.array([100.0, 100.5, 200.0, 1e9])
    raw = fuzzy.eval_raw_many(p, taus)
    expected = np.zeros((4, 3))
    expected[:, 2] = 1.0
    np.testing.assert_array_equal(raw, expected)


def test_config_round_trip():
    p = fuzzy.default_partition(1234.0)
    q = fuzzy.partition_from_config(fuzzy.partition_to_config(p))
    assert q == p

    with pytest.raises(ValueError):
        fuzzy.partition_from_config({"sets": []})
