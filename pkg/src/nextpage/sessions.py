"""Session identification.

Groups page-view log entries into per-user sessions split on an
inactivity timeout, and derives per-visit dwell times from inter-request
gaps.  The user key is host plus user agent, the strongest identity proxy
an anonymous access log offers.
"""

from dataclasses import dataclass
from datetime import datetime

DEFAULT_TIMEOUT = 1800.0
USER_KEY_SEP = "\x1f"


@dataclass(frozen=True)
class PageVisit:
    page: str
    arrival: datetime
    dwell: float | None = None


@dataclass(frozen=True)
class Session:
    user_key: str
    visits: tuple[PageVisit, ...]

    def __post_init__(self):
        if not self.visits:
            raise ValueError("a session must contain at least one visit")

    @property
    def pages(self):
        return tuple(v.page for v in self.visits)

    @property
    def start(self):
        return self.visits[0].arrival


def user_key_for(entry):
    return f"{entry.remote_host}{USER_KEY_SEP}{entry.user_agent or '-'}"


def compute_dwell(session):
    """Fill dwell times from consecutive arrival gaps.

    Visits are stably re-sorted by arrival first (log clock skew), gaps
    clamp at zero, and the final visit keeps no dwell because the exit
    time is unobservable.  Idempotent.
    """
    visits = sorted(session.visits, key=lambda v: v.arrival)
    filled = []
    for i, visit in enumerate(visits):
        if i + 1 < len(visits):
            gap = (visits[i + 1].arrival - visit.arrival).total_seconds()
            dwell = max(0.0, gap)
        else:
            dwell = None
        filled.append(PageVisit(page=visit.page, arrival=visit.arrival, dwell=dwell))
    return Session(user_key=session.user_key, visits=tuple(filled))


def sessionize(entries, timeout_s=DEFAULT_TIMEOUT):
    """Partition entries into dwell-annotated sessions.

    Entries with the same user key belong to one session as long as
    consecutive arrivals are no more than ``timeout_s`` apart; a larger gap
    starts a new session.  Sessions come back ordered by first arrival.
    """
    if timeout_s <= 0:
        raise ValueError("timeout must be positive")

    by_user = {}
    for entry in entries:
        by_user.setdefault(user_key_for(entry), []).append(entry)

    sessions = []
    for key, group in by_user.items():
        group.sort(key=lambda e: e.timestamp)
        current = [group[0]]
        for entry in group[1:]:
            gap = (entry.timestamp - current[-1].timestamp).total_seconds()
            if gap > timeout_s:
                sessions.append(_build_session(key, current))
                current = [entry]
            else:
                current.append(entry)
        sessions.append(_build_session(key, current))

    sessions.sort(key=lambda s: (s.start, s.user_key))
    return sessions


def _build_session(key, entries):
    visits = tuple(
        PageVisit(page=e.path, arrival=e.timestamp) for e in entries
    )
    return compute_dwell(Session(user_key=key, visits=visits))


def session_to_dict(session):
    return {
        "user_key": session.user_key,
        "visits": [
            {
                "page": v.page,
                "arrival_iso8601": v.arrival.isoformat(),
                "dwell_s": v.dwell,
            }
            for v in session.visits
        ],
    }


def session_from_dict(data):
    visits = tuple(
        PageVisit(
            page=v["page"],
            arrival=datetime.fromisoformat(v["arrival_iso8601"]),
            dwell=v["dwell_s"],
        )
        for v in data["visits"]
    )
    return Session(user_key=data["user_key"], visits=visits)
