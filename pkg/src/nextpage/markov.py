"""Order-k Markov models over session page sequences.

Counts are kept per context length 1..k so queries can fall back from the
longest matching context to shorter ones.  Backoff is strict longest
match: if a context row exists it is used as-is, with no blending or
smoothing, which keeps every probability an exact ratio of counts.
"""


class TransitionModel:
    """Counted transitions; immutable by convention once trained."""

    def __init__(self, order):
        if order < 1:
            raise ValueError("model order must be >= 1")
        self.order = order
        self.start_counts = {}
        self.tables = {j: {} for j in range(1, order + 1)}
        self.total_sessions = 0

    def start_probability(self, page):
        if self.total_sessions == 0:
            return 0.0
        return self.start_counts.get(page, 0) / self.total_sessions

    def lookup(self, context):
        """Longest-suffix context row for ``context``, or None.

        Returns (context_tuple, row) where row maps next page to count.
        """
        context = tuple(context)
        for j in range(min(self.order, len(context)), 0, -1):
            suffix = context[-j:]
            row = self.tables[j].get(suffix)
            if row:
                return suffix, row
        return None

    def to_dict(self):
        tables = []
        for j in sorted(self.tables):
            for context in sorted(self.tables[j]):
                row = self.tables[j][context]
                tables.append({
                    "context": list(context),
                    "next": {page: row[page] for page in sorted(row)},
                })
        return {
            "order": self.order,
            "total_sessions": self.total_sessions,
            "start_counts": {p: self.start_counts[p] for p in sorted(self.start_counts)},
            "tables": tables,
        }

    @classmethod
    def from_dict(cls, data):
        model = cls(data["order"])
        model.total_sessions = data["total_sessions"]
        model.start_counts = dict(data["start_counts"])
        for block in data["tables"]:
            context = tuple(block["context"])
            model.tables[len(context)][context] = dict(block["next"])
        return model


def _pages_of(session):
    visits = getattr(session, "visits", None)
    if visits is not None:
        return [v.page for v in visits]
    return list(session)


def train(sessions, k):
    """Count starts and contexts of length 1..k over the session corpus."""
    model = TransitionModel(k)
    for session in sessions:
        pages = _pages_of(session)
        if not pages:
            continue
        model.total_sessions += 1
        model.start_counts[pages[0]] = model.start_counts.get(pages[0], 0) + 1
        for i in range(1, len(pages)):
            nxt = pages[i]
            for j in range(1, min(k, i) + 1):
                context = tuple(pages[i - j:i])
                row = model.tables[j].setdefault(context, {})
                row[nxt] = row.get(nxt, 0) + 1
    return model


def sequence_probability(model, pages):
    """Chain probability: start term times one factor per following page.

    Each factor conditions on the longest context (up to the model order)
    present in the tables; a factor with no matching context, or a next
    page unseen in the matched row, contributes probability zero.
    """
    pages = list(pages)
    if not pages:
        raise ValueError("sequence must be non-empty")
    prob = model.start_probability(pages[0])
    for i in range(1, len(pages)):
        if prob == 0.0:
            return 0.0
        match = model.lookup(pages[:i])
        if match is None:
            return 0.0
        _, row = match
        count = row.get(pages[i], 0)
        if count == 0:
            return 0.0
        prob *= count / sum(row.values())
    return prob


def predict_next(model, context, top_n):
    """Ranked (page, probability) continuations of ``context``.

    Uses the longest matching context row; ties rank by higher raw count
    and then by page id.  Empty when no suffix of the context was seen.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    match = model.lookup(context)
    if match is None:
        return []
    _, row = match
    total = sum(row.values())
    ranked = sorted(row.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(page, count / total) for page, count in ranked[:top_n]]
