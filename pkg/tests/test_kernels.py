"""The numba and numpy kernel builds must agree."""

import numpy as np
import pytest

from nextpage import _kernels

from helpers import random_partition

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba unavailable")


def _random_breaks(rng):
    return random_partition(rng, max_td=100.0, n_sets=int(rng.integers(2, 6)))._breaks


@needs_numba
def test_membership_builds_agree():
    rng = np.random.default_rng(11)
    for _ in range(25):
        breaks = _random_breaks(rng)
        taus = rng.uniform(-0.0, 150.0, size=64)
        a = _kernels.raw_memberships_jit(breaks, 100.0, taus)
        b = _kernels.raw_memberships_np(breaks, 100.0, taus)
        np.testing.assert_allclose(a, b, rtol=0, atol=0)


@needs_numba
def test_normalize_builds_agree():
    rng = np.random.default_rng(12)
    raw = rng.uniform(0.01, 1.0, size=(40, 4))
    np.testing.assert_allclose(
        _kernels.normalize_rows_jit(raw), _kernels.normalize_rows_np(raw),
        rtol=0, atol=1e-15,
    )


@needs_numba
def test_supports_builds_agree():
    rng = np.random.default_rng(13)
    medians = rng.uniform(0.0, 1.0, size=(30, 6))
    items = np.array([0, 1, 2, 3, 0, 5, 4], dtype=np.int64)
    offsets = np.array([0, 1, 4, 7], dtype=np.int64)
    a = _kernels.itemset_supports_jit(medians, items, offsets)
    b = _kernels.itemset_supports_np(medians, items, offsets)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)


def test_supports_match_direct_reduction():
    rng = np.random.default_rng(14)
    medians = rng.uniform(0.0, 1.0, size=(17, 5))
    items = np.array([2, 0, 3, 1], dtype=np.int64)
    offsets = np.array([0, 2, 4], dtype=np.int64)
    got = _kernels.itemset_supports(medians, items, offsets)
    want0 = np.minimum(medians[:, 2], medians[:, 0]).mean()
    want1 = np.minimum(medians[:, 3], medians[:, 1]).mean()
    np.testing.assert_allclose(got, [want0, want1], atol=1e-12)


def test_normalize_rejects_zero_rows():
    raw = np.array([[0.5, 0.5], [0.0, 0.0]])
    with pytest.raises(ValueError):
        _kernels.normalize_rows(raw)
    with pytest.raises(ValueError):
        _kernels.normalize_rows_np(raw)


def test_env_flag_reports():
    assert isinstance(_kernels.jit_enabled(), bool)
