"""Vague-value algebra.

A vague value is a pair (t, f): t is the evidence for membership, f the
evidence against, with t + f <= 1.  The unknown true grade lies somewhere
in the interval [t, 1 - f]; its midpoint (the median membership) serves as
a point estimate and the interval width (the imprecision) measures
hesitation.
"""

from dataclasses import dataclass

SUM_TOLERANCE = 1e-12
_SHAVE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class VagueValue:
    t: float
    f: float

    def __post_init__(self):
        if not (0.0 <= self.t <= 1.0 and 0.0 <= self.f <= 1.0):
            raise ValueError(f"vague components must lie in [0,1], got t={self.t}, f={self.f}")
        if self.t + self.f > 1.0 + SUM_TOLERANCE:
            raise ValueError(f"t + f must not exceed 1, got {self.t + self.f}")

    @property
    def interval(self):
        """Bounds [t, 1-f] enclosing the unknown exact grade."""
        return (self.t, 1.0 - self.f)

    @property
    def median(self):
        """Midpoint of the membership interval."""
        return (self.t + 1.0 - self.f) / 2.0

    @property
    def imprecision(self):
        """Width of the membership interval; 0 means a crisp value."""
        return max(0.0, 1.0 - self.t - self.f)


def make_vague(t, f):
    """Construct a validated VagueValue."""
    return VagueValue(float(t), float(f))


def from_memberships(vector):
    """Turn a normalized short/medium/long membership vector into evidence.

    The short weight counts against the page (a bounce), the long weight
    counts for it, and the medium weight is left as hesitation.
    """
    normalized = getattr(vector, "normalized", None)
    if normalized is None:
        raise ValueError("membership vector must be normalized first")
    if len(normalized) != 3:
        raise ValueError(f"expected 3 normalized memberships, got {len(normalized)}")
    f, _, t = normalized
    if t + f > 1.0:
        if t + f - 1.0 > _SHAVE_TOLERANCE:
            raise ValueError("normalized memberships exceed unit sum")
        f = max(0.0, 1.0 - t)
    return VagueValue(float(t), float(f))


def decompose(value):
    """(median, imprecision, interval) of a vague value."""
    return value.median, value.imprecision, value.interval


def combine_visits(values):
    """Average the evidence of repeat visits into one vague value."""
    values = list(values)
    if not values:
        raise ValueError("cannot combine an empty sequence of vague values")
    n = len(values)
    t = sum(v.t for v in values) / n
    f = sum(v.f for v in values) / n
    return VagueValue(min(t, 1.0), min(f, 1.0))
