"""Dwell-time fuzzification.

A partition maps a dwell time (seconds a visitor stayed on a page) onto a
small ordered family of trapezoidal fuzzy sets, short/medium/long by
default.  Raw memberships are the trapezoid heights; normalized memberships
rescale them so each visit contributes exactly one unit of evidence.
Dwells beyond the partition ceiling saturate the last set.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

DEFAULT_MAX_TD = 1800.0


@dataclass(frozen=True)
class FuzzySet:
    """One trapezoidal membership function with shoulder points a<=b<=c<=d."""

    label: str
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (0.0 <= self.a <= self.b <= self.c <= self.d):
            raise ValueError(
                f"fuzzy set {self.label!r}: shoulders must satisfy 0 <= a <= b <= c <= d"
            )


@dataclass(frozen=True)
class FuzzyTimePartition:
    """Ordered family of fuzzy sets covering dwell times [0, max_td]."""

    max_td: float
    sets: tuple[FuzzySet, ...]
    _breaks: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.max_td <= 0:
            raise ValueError("max_td must be positive")
        object.__setattr__(self, "sets", tuple(self.sets))
        if len(self.sets) < 2:
            raise ValueError("partition needs at least two fuzzy sets")
        first, last = self.sets[0], self.sets[-1]
        if first.a != 0.0 or first.b != 0.0:
            raise ValueError("first set must have full membership at dwell 0")
        if last.c != self.max_td or last.d != self.max_td:
            raise ValueError("last set must saturate at max_td")
        for s in self.sets:
            if s.d > self.max_td:
                raise ValueError(f"fuzzy set {s.label!r} extends past max_td")
        breaks = np.array(
            [[s.a, s.b, s.c, s.d] for s in self.sets], dtype=np.float64
        )
        object.__setattr__(self, "_breaks", breaks)
        self._check_coverage()

    def _check_coverage(self):
        # the summed membership is piecewise linear, so positivity at every
        # shoulder point (plus the interval ends) is positivity everywhere
        points = np.unique(np.clip(self._breaks.ravel(), 0.0, self.max_td))
        points = np.union1d(points, [0.0, self.max_td])
        raw = _kernels.raw_memberships_np(self._breaks, self.max_td, points)
        if (raw.sum(axis=1) <= 0.0).any():
            raise ValueError("partition leaves part of [0, max_td] with zero membership")

    @property
    def size(self):
        return len(self.sets)

    @property
    def labels(self):
        return tuple(s.label for s in self.sets)


@dataclass(frozen=True)
class MembershipVector:
    """Raw trapezoid heights and, once normalized, the unit-sum version."""

    raw: tuple[float, ...]
    normalized: tuple[float, ...] | None = None


def default_partition(max_td=DEFAULT_MAX_TD):
    """Three-set short/medium/long partition scaled to ``max_td`` seconds.

    Shoulders sit at fixed fractions of max_td chosen so adjacent sets
    overlap (no sharp category boundaries) and the short set is fully on
    at dwell 0 while the long set saturates at max_td.
    """
    if max_td <= 0:
        raise ValueError("max_td must be positive")
    m = float(max_td)
    return FuzzyTimePartition(
        max_td=m,
        sets=(
            FuzzySet("short", 0.0, 0.0, 0.05 * m, 0.15 * m),
            FuzzySet("medium", 0.05 * m, 0.15 * m, 0.35 * m, 0.55 * m),
            FuzzySet("long", 0.35 * m, 0.55 * m, m, m),
        ),
    )


def eval_raw_many(partition, taus):
    """Raw membership matrix, one row per dwell in ``taus``."""
    taus = np.asarray(taus, dtype=np.float64)
    if taus.ndim != 1:
        raise ValueError("taus must be one-dimensional")
    if taus.shape[0] and taus.min() < 0:
        raise ValueError("dwell times must be non-negative")
    return _kernels.raw_memberships(partition._breaks, partition.max_td, taus)


def eval_raw(partition, tau):
    """Raw memberships of a single dwell time as a MembershipVector."""
    if tau < 0:
        raise ValueError("dwell times must be non-negative")
    row = eval_raw_many(partition, np.array([float(tau)]))[0]
    return MembershipVector(raw=tuple(row.tolist()))


def normalize_many(raw):
    """Row-normalize a raw membership matrix to unit sums."""
    raw = np.asarray(raw, dtype=np.float64)
    return _kernels.normalize_rows(raw)


def normalize(vector):
    """Fill the normalized side of a MembershipVector."""
    raw = np.asarray(vector.raw, dtype=np.float64)
    norm = _kernels.normalize_rows(raw[None, :])[0]
    return MembershipVector(raw=vector.raw, normalized=tuple(norm.tolist()))


def partition_to_config(partition):
    """JSON-ready dict accepted back by partition_from_config."""
    return {
        "max_td_s": partition.max_td,
        "sets": [
            {"label": s.label, "a": s.a, "b": s.b, "c": s.c, "d": s.d}
            for s in partition.sets
        ],
    }


def partition_from_config(config):
    try:
        max_td = float(config["max_td_s"])
        sets = tuple(
            FuzzySet(str(s["label"]), float(s["a"]), float(s["b"]), float(s["c"]), float(s["d"]))
            for s in config["sets"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad fuzzy partition config: {exc}") from exc
    return FuzzyTimePartition(max_td=max_td, sets=sets)
