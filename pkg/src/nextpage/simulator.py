"""Trace-driven prefetch simulation.

Held-out sessions replay through one shared LRU cache in arrival order.
After every served request the predictor is consulted with the session's
recent pages and up to ``prefetch_k`` predicted, non-resident pages are
inserted ahead of demand.  A prefetched page that gets requested before
eviction counts as a useful prefetch; the rest are wasted bandwidth.
"""

from collections import OrderedDict
from dataclasses import dataclass


@dataclass(frozen=True)
class SimReport:
    requests: int
    hits: int
    misses: int
    hit_ratio: float
    prefetches_issued: int
    useful_prefetches: int
    prefetch_precision: float
    extra_fetch_overhead: float

    def to_dict(self):
        return {
            "requests": self.requests,
            "hits": self.hits,
            "misses": self.misses,
            "hit_ratio": self.hit_ratio,
            "prefetches_issued": self.prefetches_issued,
            "useful_prefetches": self.useful_prefetches,
            "prefetch_precision": self.prefetch_precision,
            "extra_fetch_overhead": self.extra_fetch_overhead,
        }

    CSV_HEADER = ("requests,hits,misses,hit_ratio,prefetches_issued,"
                  "useful_prefetches,prefetch_precision,extra_fetch_overhead")

    def to_csv_row(self):
        return (f"{self.requests},{self.hits},{self.misses},{self.hit_ratio:.6f},"
                f"{self.prefetches_issued},{self.useful_prefetches},"
                f"{self.prefetch_precision:.6f},{self.extra_fetch_overhead:.6f}")


class LRUCache:
    """Fixed-capacity LRU set of page ids with prefetch tagging."""

    def __init__(self, capacity):
        if capacity < 1:
            raise ValueError("cache capacity must be >= 1")
        self.capacity = capacity
        self._pages = OrderedDict()  # LRU first, MRU last
        self.prefetch_tags = set()

    def __contains__(self, page):
        return page in self._pages

    def __len__(self):
        return len(self._pages)

    def touch(self, page):
        self._pages.move_to_end(page)

    def insert(self, page, protect=None):
        """Insert at MRU, evicting from the LRU end but never ``protect``.

        Returns False when no slot can be freed (the protected page is the
        only evictable resident), leaving the cache unchanged.
        """
        if page in self._pages:
            self._pages.move_to_end(page)
            return True
        while len(self._pages) >= self.capacity:
            victim = next(iter(self._pages))
            if victim == protect:
                if len(self._pages) == 1:
                    return False
                # protected page sits at the LRU end; pick the next-oldest
                it = iter(self._pages)
                next(it)
                victim = next(it)
            del self._pages[victim]
            self.prefetch_tags.discard(victim)
        self._pages[page] = None
        return True


def simulate(test_sessions, predictor, capacity, prefetch_k, context_len):
    """Replay sessions through a shared cache and report hit/prefetch counts."""
    if prefetch_k < 0:
        raise ValueError("prefetch_k must be >= 0")
    if context_len < 1:
        raise ValueError("context_len must be >= 1")

    session_pages = [list(s.pages) for s in test_sessions]
    events = []
    for si, session in enumerate(test_sessions):
        for vi, visit in enumerate(session.visits):
            events.append((visit.arrival, si, vi, visit.page))
    events.sort(key=lambda e: (e[0], e[1], e[2]))

    cache = LRUCache(capacity)
    requests = hits = issued = useful = 0
    for _, si, vi, page in events:
        requests += 1
        if page in cache:
            hits += 1
            if page in cache.prefetch_tags:
                cache.prefetch_tags.discard(page)
                useful += 1
            cache.touch(page)
        else:
            cache.insert(page)
        if prefetch_k > 0:
            context = session_pages[si][max(0, vi + 1 - context_len):vi + 1]
            for prediction in predictor.predict(context, prefetch_k):
                candidate = prediction.page
                if candidate in cache:
                    continue
                if cache.insert(candidate, protect=page):
                    cache.prefetch_tags.add(candidate)
                    issued += 1

    misses = requests - hits
    return SimReport(
        requests=requests,
        hits=hits,
        misses=misses,
        hit_ratio=hits / requests if requests else 0.0,
        prefetches_issued=issued,
        useful_prefetches=useful,
        prefetch_precision=useful / issued if issued else 0.0,
        extra_fetch_overhead=(issued - useful) / requests if requests else 0.0,
    )


def split_sessions(sessions, train_fraction):
    """Chronological train/test split at session granularity."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    ordered = sorted(sessions, key=lambda s: (s.start, s.user_key))
    n = len(ordered)
    if n < 2:
        raise ValueError("need at least 2 sessions to split")
    n_train = int(n * train_fraction + 1e-9)
    n_train = min(max(n_train, 1), n - 1)
    return ordered[:n_train], ordered[n_train:]
