"""Numeric inner-loop kernels, compiled with numba when available.

Every kernel ships in two builds: a loop form compiled with ``@njit`` and a
vectorized pure-numpy form.  The public aliases (``raw_memberships``,
``normalize_rows``, ``itemset_supports``) point at the numba build unless
numba is missing or ``NEXTPAGE_DISABLE_JIT=1`` is set in the environment,
in which case they fall back to numpy.  Both builds stay importable side by
side so tests and benchmarks can compare them directly.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

DISABLE_ENV = "NEXTPAGE_DISABLE_JIT"


def _loop_raw_memberships(breaks, max_td, taus):
    n = taus.shape[0]
    s = breaks.shape[0]
    out = np.empty((n, s))
    for i in range(n):
        t = taus[i]
        if t > max_td:
            # past the dwell threshold only the last set stays saturated
            for j in range(s):
                out[i, j] = 0.0
            out[i, s - 1] = 1.0
            continue
        for j in range(s):
            a = breaks[j, 0]
            b = breaks[j, 1]
            c = breaks[j, 2]
            d = breaks[j, 3]
            if t < a or t > d:
                v = 0.0
            elif t < b:
                v = (t - a) / (b - a)
            elif t <= c:
                v = 1.0
            else:
                v = (d - t) / (d - c)
            out[i, j] = v
    return out


def _loop_normalize_rows(raw):
    n = raw.shape[0]
    s = raw.shape[1]
    out = np.empty((n, s))
    for i in range(n):
        total = 0.0
        for j in range(s):
            total += raw[i, j]
        if total <= 0.0:
            raise ValueError("membership row sums to zero; cannot normalize")
        for j in range(s):
            out[i, j] = raw[i, j] / total
    return out


def _loop_itemset_supports(medians, items, offsets):
    n_candidates = offsets.shape[0] - 1
    n_sessions = medians.shape[0]
    out = np.empty(n_candidates)
    for c in range(n_candidates):
        lo = offsets[c]
        hi = offsets[c + 1]
        acc = 0.0
        for r in range(n_sessions):
            m = 1.0
            for p in range(lo, hi):
                v = medians[r, items[p]]
                if v < m:
                    m = v
            acc += m
        out[c] = acc / n_sessions
    return out


def raw_memberships_np(breaks, max_td, taus):
    """Trapezoid heights for each dwell in ``taus`` against each fuzzy set."""
    a, b, c, d = breaks[:, 0], breaks[:, 1], breaks[:, 2], breaks[:, 3]
    t = taus[:, None]
    rise_den = np.where(b > a, b - a, 1.0)
    fall_den = np.where(d > c, d - c, 1.0)
    out = np.zeros((taus.shape[0], breaks.shape[0]))
    out = np.where((t >= a) & (t < b), (t - a) / rise_den, out)
    out = np.where((t >= b) & (t <= c), 1.0, out)
    out = np.where((t > c) & (t <= d), (d - t) / fall_den, out)
    over = taus > max_td
    if over.any():
        out[over, :] = 0.0
        out[over, -1] = 1.0
    return out


def normalize_rows_np(raw):
    """Scale each row to unit sum; raises if a row has no mass."""
    sums = raw.sum(axis=1)
    if (sums <= 0.0).any():
        raise ValueError("membership row sums to zero; cannot normalize")
    return raw / sums[:, None]


def itemset_supports_np(medians, items, offsets):
    """Mean over sessions of the min median across each candidate itemset."""
    out = np.empty(offsets.shape[0] - 1)
    for c in range(out.shape[0]):
        cols = items[offsets[c]:offsets[c + 1]]
        out[c] = medians[:, cols].min(axis=1).mean()
    return out


if HAVE_NUMBA:
    raw_memberships_jit = njit(cache=True)(_loop_raw_memberships)
    normalize_rows_jit = njit(cache=True)(_loop_normalize_rows)
    itemset_supports_jit = njit(cache=True)(_loop_itemset_supports)
else:  # pragma: no cover
    raw_memberships_jit = None
    normalize_rows_jit = None
    itemset_supports_jit = None


def jit_enabled():
    """True when the active kernel aliases are the numba builds."""
    if not HAVE_NUMBA:
        return False
    return os.environ.get(DISABLE_ENV, "").lower() not in ("1", "true", "yes")


if jit_enabled():
    raw_memberships = raw_memberships_jit
    normalize_rows = normalize_rows_jit
    itemset_supports = itemset_supports_jit
else:
    raw_memberships = raw_memberships_np
    normalize_rows = normalize_rows_np
    itemset_supports = itemset_supports_np


def warmup():
    """Trigger jit compilation of the active kernels on tiny inputs."""
    breaks = np.array([[0.0, 0.0, 1.0, 2.0], [1.0, 2.0, 3.0, 3.0]])
    taus = np.array([0.0, 1.5, 4.0])
    raw = raw_memberships(breaks, 3.0, taus)
    normalize_rows(raw)
    medians = np.array([[1.0, 0.5], [0.0, 0.25]])
    itemset_supports(
        medians, np.array([0, 0, 1], dtype=np.int64), np.array([0, 1, 3], dtype=np.int64)
    )
