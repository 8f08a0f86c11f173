"""Seeded synthetic access-log generation.

Walks a known row-stochastic page chain to emit valid Common Log Format
lines whose inter-request gaps equal the sampled dwell times, so parsing
and sessionizing the output recovers the generated sessions exactly.
Dwells are drawn inside the core of one fuzzy set per page, which pins
down the fuzzy label every generated visit should receive.
"""

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

import numpy as np

from . import fuzzy
from .logs import LogEntry, format_line
from .sessions import DEFAULT_TIMEOUT

_EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)
PROFILE_LABELS = ("short", "medium", "long")


@dataclass
class GeneratorSpec:
    pages: int
    chain: np.ndarray
    start: np.ndarray
    dwell_profiles: tuple[str, ...]
    session_count: int
    session_length_range: tuple[int, int] = (2, 8)
    seed: int = 42
    hosts: int = 4
    max_td: float = fuzzy.DEFAULT_MAX_TD

    def __post_init__(self):
        self.chain = np.asarray(self.chain, dtype=np.float64)
        self.start = np.asarray(self.start, dtype=np.float64)
        if self.pages < 1:
            raise ValueError("need at least one page")
        if self.chain.shape != (self.pages, self.pages):
            raise ValueError("chain must be square over the page count")
        if np.abs(self.chain.sum(axis=1) - 1.0).max() > 1e-9:
            raise ValueError("every chain row must sum to 1")
        if abs(self.start.sum() - 1.0) > 1e-9:
            raise ValueError("start distribution must sum to 1")
        if len(self.dwell_profiles) != self.pages:
            raise ValueError("one dwell profile per page required")
        if any(p not in PROFILE_LABELS for p in self.dwell_profiles):
            raise ValueError(f"dwell profiles must be among {PROFILE_LABELS}")
        lo, hi = self.session_length_range
        if lo < 2 or hi < lo:
            raise ValueError("session lengths must satisfy 2 <= min <= max")
        if self.session_count < 1 or self.hosts < 1:
            raise ValueError("session_count and hosts must be >= 1")


def dominant_chain(pages, dominant=0.8):
    """Cycle-heavy chain: page i moves to i+1 with the given probability."""
    if pages < 2:
        raise ValueError("a dominant chain needs at least 2 pages")
    if not 0.0 < dominant <= 1.0:
        raise ValueError("dominant probability must lie in (0, 1]")
    rest = (1.0 - dominant) / (pages - 1)
    chain = np.full((pages, pages), rest)
    for i in range(pages):
        chain[i, (i + 1) % pages] = dominant
    # exact unit rows regardless of float drift
    chain /= chain.sum(axis=1, keepdims=True)
    return chain


def make_spec(pages, session_count, seed, dominant=0.8, hosts=4,
              session_length_range=(2, 8), dwell_profiles=None):
    """Convenience spec: dominant cycle chain, uniform starts, cycling profiles."""
    if dwell_profiles is None:
        dwell_profiles = tuple(PROFILE_LABELS[i % 3] for i in range(pages))
    return GeneratorSpec(
        pages=pages,
        chain=dominant_chain(pages, dominant),
        start=np.full(pages, 1.0 / pages),
        dwell_profiles=tuple(dwell_profiles),
        session_count=session_count,
        session_length_range=session_length_range,
        seed=seed,
        hosts=hosts,
    )


def page_path(index):
    return f"/p{index:03d}"


def _dwell_cores(spec):
    """Integer dwell range [b, c] of each profile's trapezoid core."""
    partition = fuzzy.default_partition(spec.max_td)
    cores = {}
    for fset in partition.sets:
        lo = int(np.ceil(fset.b))
        hi = int(np.floor(fset.c))
        cores[fset.label] = (lo, hi)
    missing = set(spec.dwell_profiles) - set(cores)
    if missing:
        raise ValueError(f"profiles without a matching fuzzy set: {sorted(missing)}")
    return cores


def generate(spec, timeout_s=DEFAULT_TIMEOUT):
    """Emit CLF lines for the whole corpus, time-ordered, seed-deterministic."""
    rng = np.random.default_rng(spec.seed)
    cores = _dwell_cores(spec)
    cum_chain = np.cumsum(spec.chain, axis=1)
    cum_start = np.cumsum(spec.start)
    lo_len, hi_len = spec.session_length_range

    host_clock = {h: _EPOCH for h in range(spec.hosts)}
    events = []  # (arrival, host, order, page_index)
    order = 0
    for s in range(spec.session_count):
        host = s % spec.hosts
        length = int(rng.integers(lo_len, hi_len + 1))
        page = int(np.searchsorted(cum_start, rng.random(), side="right"))
        page = min(page, spec.pages - 1)
        when = host_clock[host]
        for step in range(length):
            events.append((when, host, order, page))
            order += 1
            if step == length - 1:
                break
            core_lo, core_hi = cores[spec.dwell_profiles[page]]
            dwell = int(rng.integers(core_lo, core_hi + 1))
            when = when + timedelta(seconds=dwell)
            nxt = int(np.searchsorted(cum_chain[page], rng.random(), side="right"))
            page = min(nxt, spec.pages - 1)
        host_clock[host] = when + timedelta(seconds=timeout_s + 60.0)

    events.sort(key=lambda e: (e[0], e[1], e[2]))
    lines = []
    for when, host, _, page in events:
        entry = LogEntry(
            remote_host=f"host{host:03d}",
            identity=None,
            auth_user=None,
            timestamp=when,
            method="GET",
            path=page_path(page),
            protocol="HTTP/1.0",
            status=200,
            bytes=1024,
        )
        lines.append(format_line(entry, "common"))
    return lines


def spec_to_dict(spec):
    return {
        "pages": spec.pages,
        "chain": spec.chain.tolist(),
        "start": spec.start.tolist(),
        "dwell_profiles": list(spec.dwell_profiles),
        "session_count": spec.session_count,
        "session_length_range": list(spec.session_length_range),
        "seed": spec.seed,
        "hosts": spec.hosts,
        "max_td": spec.max_td,
    }


def spec_from_dict(data):
    allowed = {"pages", "chain", "start", "dwell_profiles", "session_count",
               "session_length_range", "seed", "hosts", "max_td"}
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unknown generator spec keys: {sorted(unknown)}")
    return GeneratorSpec(
        pages=data["pages"],
        chain=np.asarray(data["chain"]),
        start=np.asarray(data["start"]),
        dwell_profiles=tuple(data["dwell_profiles"]),
        session_count=data["session_count"],
        session_length_range=tuple(data.get("session_length_range", (2, 8))),
        seed=data.get("seed", 42),
        hosts=data.get("hosts", 4),
        max_td=data.get("max_td", fuzzy.DEFAULT_MAX_TD),
    )
