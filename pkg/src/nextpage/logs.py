"""NCSA access-log ingestion.

Parses Common and Combined Log Format lines into LogEntry records, with a
per-field error report for malformed input, and filters entries down to
the page views that matter for navigation mining.  Grammar:

    host ident authuser [dd/Mon/yyyy:HH:MM:SS +HHMM] "method path proto" status bytes

Combined format appends ``"referer" "user_agent"``.  Absent values are the
single character ``-``.  Query strings are stripped from paths (so /a?x=1
and /a?x=2 are one page); percent-encoding is left untouched.
"""

import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

FORMATS = ("common", "combined")

_MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
           "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")
_MONTH_NUM = {name: i + 1 for i, name in enumerate(_MONTHS)}

_DATE_RE = re.compile(
    r"^(\d{2})/([A-Za-z]{3})/(\d{4}):(\d{2}):(\d{2}):(\d{2}) ([+-])(\d{2})(\d{2})$"
)


class LogParseError(ValueError):
    """A log line that does not match the grammar; names the bad field."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class LogEntry:
    remote_host: str
    identity: str | None
    auth_user: str | None
    timestamp: datetime
    method: str
    path: str
    protocol: str
    status: int
    bytes: int | None
    referer: str | None = None
    user_agent: str | None = None


@dataclass(frozen=True)
class IngestReport:
    parsed_count: int
    rejected_count: int
    rejected_line_numbers: tuple[int, ...] = ()


@dataclass(frozen=True)
class PageViewFilter:
    """Which entries count as page views; defaults keep successful GETs
    of non-static resources."""

    allowed_methods: frozenset = frozenset({"GET"})
    allowed_statuses: frozenset = frozenset({200, 304})
    excluded_path_suffixes: tuple[str, ...] = (
        ".png", ".gif", ".jpg", ".css", ".js", ".ico",
    )


def _take_token(line, pos, field_name):
    if pos >= len(line):
        raise LogParseError(field_name, "line ended before field")
    end = line.find(" ", pos)
    if end == pos:
        raise LogParseError(field_name, "empty field")
    if end < 0:
        return line[pos:], len(line)
    return line[pos:end], end


def _expect(line, pos, char, field_name):
    if pos >= len(line) or line[pos] != char:
        raise LogParseError(field_name, f"expected {char!r}")
    return pos + 1


def _take_quoted(line, pos, field_name):
    pos = _expect(line, pos, '"', field_name)
    end = line.find('"', pos)
    if end < 0:
        raise LogParseError(field_name, "unbalanced quote")
    return line[pos:end], end + 1


def parse_clf_date(text):
    """Parse ``dd/Mon/yyyy:HH:MM:SS +HHMM`` into an offset-aware datetime."""
    m = _DATE_RE.match(text)
    if not m:
        raise LogParseError("timestamp", f"malformed date {text!r}")
    day, mon, year, hh, mm, ss, sign, oh, om = m.groups()
    month = _MONTH_NUM.get(mon)
    if month is None:
        raise LogParseError("timestamp", f"unknown month {mon!r}")
    if int(om) >= 60 or int(oh) > 23:
        raise LogParseError("timestamp", f"bad UTC offset {sign}{oh}{om}")
    offset = timedelta(hours=int(oh), minutes=int(om))
    if sign == "-":
        offset = -offset
    try:
        return datetime(int(year), month, int(day), int(hh), int(mm), int(ss),
                        tzinfo=timezone(offset))
    except ValueError as exc:
        raise LogParseError("timestamp", str(exc)) from exc


def format_clf_date(ts):
    """Inverse of parse_clf_date, byte-exact for round trips."""
    offset = ts.utcoffset()
    total = int(offset.total_seconds()) if offset is not None else 0
    sign = "-" if total < 0 else "+"
    total = abs(total) // 60
    return (f"{ts.day:02d}/{_MONTHS[ts.month - 1]}/{ts.year:04d}:"
            f"{ts.hour:02d}:{ts.minute:02d}:{ts.second:02d} "
            f"{sign}{total // 60:02d}{total % 60:02d}")


def _dash_none(token):
    return None if token == "-" else token


def parse_line(line, fmt="common"):
    """Parse one CLF line into a LogEntry; raises LogParseError on mismatch."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown log format {fmt!r}")

    host, pos = _take_token(line, 0, "remote_host")
    pos = _expect(line, pos, " ", "identity")
    ident, pos = _take_token(line, pos, "identity")
    pos = _expect(line, pos, " ", "auth_user")
    user, pos = _take_token(line, pos, "auth_user")
    pos = _expect(line, pos, " ", "timestamp")

    pos = _expect(line, pos, "[", "timestamp")
    end = line.find("]", pos)
    if end < 0:
        raise LogParseError("timestamp", "unbalanced bracket")
    ts = parse_clf_date(line[pos:end])
    pos = _expect(line, end + 1, " ", "request")

    request, pos = _take_quoted(line, pos, "request")
    parts = request.split(" ")
    if len(parts) != 3 or not all(parts):
        raise LogParseError("request", f"expected 'METHOD PATH PROTOCOL', got {request!r}")
    method, raw_path, protocol = parts
    path = raw_path.split("?", 1)[0]

    pos = _expect(line, pos, " ", "status")
    status_tok, pos = _take_token(line, pos, "status")
    if not status_tok.isdigit():
        raise LogParseError("status", f"non-integer status {status_tok!r}")
    status = int(status_tok)
    if not 100 <= status <= 599:
        raise LogParseError("status", f"status {status} outside 100-599")

    pos = _expect(line, pos, " ", "bytes")
    bytes_tok, pos = _take_token(line, pos, "bytes")
    if bytes_tok == "-":
        nbytes = None
    elif bytes_tok.isdigit():
        nbytes = int(bytes_tok)
    else:
        raise LogParseError("bytes", f"bad byte count {bytes_tok!r}")

    referer = user_agent = None
    if fmt == "combined":
        pos = _expect(line, pos, " ", "referer")
        referer_tok, pos = _take_quoted(line, pos, "referer")
        pos = _expect(line, pos, " ", "user_agent")
        agent_tok, pos = _take_quoted(line, pos, "user_agent")
        referer = _dash_none(referer_tok)
        user_agent = _dash_none(agent_tok)

    if pos != len(line):
        raise LogParseError("line", "trailing characters after final field")

    return LogEntry(
        remote_host=host,
        identity=_dash_none(ident),
        auth_user=_dash_none(user),
        timestamp=ts,
        method=method,
        path=path,
        protocol=protocol,
        status=status,
        bytes=nbytes,
        referer=referer,
        user_agent=user_agent,
    )


def format_line(entry, fmt="common"):
    """Render a LogEntry back to canonical CLF text."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown log format {fmt!r}")

    def dash(value):
        return "-" if value is None else value

    base = (
        f"{entry.remote_host} {dash(entry.identity)} {dash(entry.auth_user)} "
        f"[{format_clf_date(entry.timestamp)}] "
        f'"{entry.method} {entry.path} {entry.protocol}" '
        f"{entry.status} {dash(entry.bytes)}"
    )
    if fmt == "combined":
        base += f' "{dash(entry.referer)}" "{dash(entry.user_agent)}"'
    return base


def parse_log(lines, fmt="common"):
    """Parse many lines, skipping and counting the malformed ones.

    Returns (entries, IngestReport); never raises on bad input lines.
    """
    entries = []
    rejected = []
    total = 0
    for number, line in enumerate(lines, start=1):
        total += 1
        try:
            entries.append(parse_line(line.rstrip("\r\n"), fmt))
        except LogParseError:
            rejected.append(number)
    report = IngestReport(
        parsed_count=len(entries),
        rejected_count=total - len(entries),
        rejected_line_numbers=tuple(rejected),
    )
    return entries, report


def filter_page_views(entries, config=None):
    """Keep entries that look like real page views, in stable order."""
    cfg = config or PageViewFilter()
    kept = []
    for e in entries:
        if e.method not in cfg.allowed_methods:
            continue
        if e.status not in cfg.allowed_statuses:
            continue
        lowered = e.path.lower()
        if any(lowered.endswith(suffix) for suffix in cfg.excluded_path_suffixes):
            continue
        kept.append(e)
    return kept


def entry_to_dict(entry):
    """JSON-ready dict with the exact LogEntry field names."""
    return {
        "remote_host": entry.remote_host,
        "identity": entry.identity,
        "auth_user": entry.auth_user,
        "timestamp": entry.timestamp.isoformat(),
        "method": entry.method,
        "path": entry.path,
        "protocol": entry.protocol,
        "status": entry.status,
        "bytes": entry.bytes,
        "referer": entry.referer,
        "user_agent": entry.user_agent,
    }


def entry_from_dict(data):
    return LogEntry(
        remote_host=data["remote_host"],
        identity=data.get("identity"),
        auth_user=data.get("auth_user"),
        timestamp=datetime.fromisoformat(data["timestamp"]),
        method=data["method"],
        path=data["path"],
        protocol=data["protocol"],
        status=data["status"],
        bytes=data.get("bytes"),
        referer=data.get("referer"),
        user_agent=data.get("user_agent"),
    )
