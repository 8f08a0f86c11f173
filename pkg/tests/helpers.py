"""Shared builders for tests: random partitions, entries, sessions."""

from datetime import datetime, timedelta, timezone

import numpy as np

from nextpage.fuzzy import FuzzySet, FuzzyTimePartition
from nextpage.logs import LogEntry
from nextpage.sessions import PageVisit, Session, compute_dwell

EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)


def random_partition(rng, max_td=1800.0, n_sets=3):
    """Random valid chained-trapezoid partition of [0, max_td]."""
    ks = np.sort(rng.uniform(0.0, max_td, size=2 * n_sets - 2)).tolist()
    sets = [FuzzySet("set0", 0.0, 0.0, ks[0], ks[1])]
    for i in range(1, n_sets - 1):
        sets.append(FuzzySet(f"set{i}", ks[2 * i - 2], ks[2 * i - 1],
                             ks[2 * i], ks[2 * i + 1]))
    sets.append(FuzzySet(f"set{n_sets - 1}", ks[-2], ks[-1], max_td, max_td))
    return FuzzyTimePartition(max_td=max_td, sets=tuple(sets))


def entry(host="10.0.0.1", at=0.0, path="/index.html", method="GET",
          status=200, agent=None):
    return LogEntry(
        remote_host=host,
        identity=None,
        auth_user=None,
        timestamp=EPOCH + timedelta(seconds=at),
        method=method,
        path=path,
        protocol="HTTP/1.0",
        status=status,
        bytes=512,
        user_agent=agent,
    )


def session(pages, arrivals=None, user_key="u\x1f-"):
    """Session from a page list; arrivals default to 10 s apart."""
    if arrivals is None:
        arrivals = [10.0 * i for i in range(len(pages))]
    visits = tuple(
        PageVisit(page=p, arrival=EPOCH + timedelta(seconds=a))
        for p, a in zip(pages, arrivals)
    )
    return compute_dwell(Session(user_key=user_key, visits=visits))
