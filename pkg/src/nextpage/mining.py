"""Vague association rules over per-session dwell evidence.

Each session becomes a mapping page -> vague value, built by fuzzifying
the dwell time of every visit and averaging repeat visits.  Itemset
support is the session-mean of the minimum median membership across the
itemset (absent pages score zero), which is anti-monotone and therefore
Apriori-prunable.  Rules are X -> {y} with the usual support/confidence
thresholds plus a per-item attractiveness gate; each rule also reports
the mean item hesitation as a data-quality signal.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels, fuzzy, vague


@dataclass(frozen=True)
class VagueRule:
    antecedent: tuple[str, ...]
    consequent: tuple[str, ...]
    support: float
    confidence: float
    attractiveness: float
    hesitation: float

    def __post_init__(self):
        if not self.antecedent or not self.consequent:
            raise ValueError("rule sides must be non-empty")
        if set(self.antecedent) & set(self.consequent):
            raise ValueError("rule sides must be disjoint")


class VagueDatabase:
    """Per-session vague evidence with dense median/imprecision matrices."""

    def __init__(self, sessions):
        self.sessions = [dict(s) for s in sessions]
        universe = set()
        for s in self.sessions:
            universe.update(s)
        self.item_universe = tuple(sorted(universe))
        self.session_count = len(self.sessions)
        self._index = {page: i for i, page in enumerate(self.item_universe)}
        n, m = self.session_count, len(self.item_universe)
        self.medians = np.zeros((n, m))
        self.imprecisions = np.zeros((n, m))
        for r, s in enumerate(self.sessions):
            for page, value in s.items():
                c = self._index[page]
                self.medians[r, c] = value.median
                self.imprecisions[r, c] = value.imprecision

    def columns(self, itemset):
        try:
            return [self._index[item] for item in itemset]
        except KeyError as exc:
            raise KeyError(f"unknown item {exc.args[0]!r}") from exc


def build_vague_database(sessions, partition):
    """Fuzzify dwell times session by session into a VagueDatabase.

    Last visits carry no dwell and contribute nothing; sessions left with
    no dwell-bearing visit are dropped entirely.
    """
    # one batched membership evaluation over every dwell in the corpus
    dwells = []
    slots = []
    for si, session in enumerate(sessions):
        for visit in session.visits:
            if visit.dwell is not None:
                dwells.append(float(visit.dwell))
                slots.append((si, visit.page))
    evidence = [{} for _ in sessions]
    if dwells:
        raw = fuzzy.eval_raw_many(partition, np.array(dwells))
        norm = _kernels.normalize_rows(raw)
        for (si, page), raw_row, norm_row in zip(slots, raw, norm):
            value = vague.from_memberships(fuzzy.MembershipVector(
                raw=tuple(raw_row.tolist()), normalized=tuple(norm_row.tolist())
            ))
            evidence[si].setdefault(page, []).append(value)
    mappings = []
    for per_page in evidence:
        if not per_page:
            continue
        mappings.append(
            {page: vague.combine_visits(values) for page, values in per_page.items()}
        )
    return VagueDatabase(mappings)


def support(db, itemset):
    """Session-mean of the minimum median membership across the itemset."""
    items = sorted(set(itemset))
    if not items:
        raise ValueError("itemset must be non-empty")
    cols = db.columns(items)
    if db.session_count == 0:
        return 0.0
    flat = np.asarray(cols, dtype=np.int64)
    offsets = np.array([0, len(cols)], dtype=np.int64)
    return float(_kernels.itemset_supports(db.medians, flat, offsets)[0])


def confidence(db, antecedent, consequent):
    x = set(antecedent)
    y = set(consequent)
    if not x or not y:
        raise ValueError("rule sides must be non-empty")
    if x & y:
        raise ValueError("rule sides must be disjoint")
    denom = support(db, x)
    if denom == 0.0:
        raise ValueError("confidence undefined: antecedent support is zero")
    return support(db, x | y) / denom


def item_attractiveness(db, item):
    """Database-mean median membership of one item."""
    col = db.columns([item])[0]
    if db.session_count == 0:
        return 0.0
    return float(db.medians[:, col].mean())


def item_hesitation(db, item):
    """Database-mean imprecision of one item."""
    col = db.columns([item])[0]
    if db.session_count == 0:
        return 0.0
    return float(db.imprecisions[:, col].mean())


def _batch_supports(db, candidates):
    """Supports of many itemsets (tuples of column indexes) in one kernel call."""
    flat = []
    offsets = [0]
    for cols in candidates:
        flat.extend(cols)
        offsets.append(len(flat))
    return _kernels.itemset_supports(
        db.medians,
        np.asarray(flat, dtype=np.int64),
        np.asarray(offsets, dtype=np.int64),
    )


def _candidate_join(frequent, prev_size):
    """Apriori join+prune: grow frequent ``prev_size``-itemsets by one item.

    Dropping the last position of a joined candidate recovers one of its
    parents, so only the first ``prev_size`` subsets need the prune check.
    """
    items = sorted(frequent)
    out = []
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            a, b = items[i], items[j]
            if a[:-1] != b[:-1]:
                continue
            candidate = a + (b[-1],)
            if all(
                candidate[:k] + candidate[k + 1:] in frequent
                for k in range(prev_size)
            ):
                out.append(candidate)
    return out


def mine(db, min_support, min_confidence, min_attractiveness=0.0, max_antecedent=1):
    """Level-wise rule mining; see the module docstring for semantics.

    Itemsets grow to at most max_antecedent + 1 items so every frequent
    itemset can be split into an antecedent within the size cap plus a
    single-page consequent.
    """
    for name, value in (("min_support", min_support),
                        ("min_confidence", min_confidence),
                        ("min_attractiveness", min_attractiveness)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    if max_antecedent < 1:
        raise ValueError("max_antecedent must be >= 1")
    if db.session_count == 0 or not db.item_universe:
        return []

    item_attr = db.medians.mean(axis=0)
    item_hes = db.imprecisions.mean(axis=0)

    # frequent itemsets as tuples of column indexes, level by level
    supports = {}
    singles = [(c,) for c in range(len(db.item_universe))]
    values = _batch_supports(db, singles)
    frequent = {}
    for cols, value in zip(singles, values):
        if value >= min_support:
            frequent[cols] = float(value)
    supports.update(frequent)
    levels = [frequent]
    for size in range(2, max_antecedent + 2):
        prev = levels[-1]
        if not prev:
            break
        candidates = _candidate_join(prev, size - 1)
        if not candidates:
            break
        values = _batch_supports(db, candidates)
        level = {}
        for cols, value in zip(candidates, values):
            if value >= min_support:
                level[cols] = float(value)
        supports.update(level)
        levels.append(level)

    rules = []
    for level in levels[1:]:
        for cols, supp in level.items():
            for y in cols:
                antecedent = tuple(c for c in cols if c != y)
                denom = supports[antecedent]
                if denom == 0.0:
                    continue
                conf = supp / denom
                if conf < min_confidence:
                    continue
                if any(item_attr[c] < min_attractiveness for c in cols):
                    continue
                rules.append(VagueRule(
                    antecedent=tuple(db.item_universe[c] for c in antecedent),
                    consequent=(db.item_universe[y],),
                    support=supp,
                    confidence=conf,
                    attractiveness=float(np.mean([item_attr[c] for c in cols])),
                    hesitation=float(np.mean([item_hes[c] for c in cols])),
                ))

    rules.sort(key=lambda r: (-r.confidence, -r.support, r.antecedent, r.consequent))
    return rules


def rule_to_dict(rule):
    return {
        "antecedent": list(rule.antecedent),
        "consequent": list(rule.consequent),
        "support": rule.support,
        "confidence": rule.confidence,
        "attractiveness": rule.attractiveness,
        "hesitation": rule.hesitation,
    }


def rule_from_dict(data):
    return VagueRule(
        antecedent=tuple(data["antecedent"]),
        consequent=tuple(data["consequent"]),
        support=data["support"],
        confidence=data["confidence"],
        attractiveness=data["attractiveness"],
        hesitation=data["hesitation"],
    )
