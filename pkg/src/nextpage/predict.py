"""Markov prediction boosted by vague association rules.

The transition model proposes candidate next pages with probabilities;
any rule whose antecedent is covered by the pages already visited in the
session multiplies its consequent's score.  When the model has never seen
the context at any order, rules alone propose candidates at a discounted
score so they can never outrank direct transition evidence.
"""

from dataclasses import dataclass

from .mining import VagueRule, rule_to_dict


@dataclass(frozen=True)
class Prediction:
    page: str
    score: float
    markov_probability: float
    rule_confidence: float
    matched_rule: VagueRule | None = None


class Predictor:
    """Immutable scorer built from a trained model and mined rules.

    score = P(page | context) * (1 + beta * rule_confidence) for Markov
    candidates; gamma * rule_confidence for rules-only fallbacks.
    """

    def __init__(self, model, rules, beta=1.0, gamma=0.5):
        if beta < 0:
            raise ValueError("beta must be >= 0")
        if not 0.0 < gamma < 1.0:
            raise ValueError("gamma must lie strictly between 0 and 1")
        self.model = model
        self.beta = beta
        self.gamma = gamma
        self._by_consequent = {}
        for rule in rules:
            if len(rule.consequent) != 1:
                continue
            self._by_consequent.setdefault(rule.consequent[0], []).append(rule)
        for matches in self._by_consequent.values():
            matches.sort(key=lambda r: (-r.confidence, r.antecedent))

    def _best_rule(self, page, context_set):
        for rule in self._by_consequent.get(page, ()):
            if context_set.issuperset(rule.antecedent):
                return rule.confidence, rule
        return 0.0, None

    def predict(self, context, top_n):
        """Ranked Predictions for the next page after ``context``."""
        if top_n < 1:
            raise ValueError("top_n must be >= 1")
        context = list(context)
        context_set = set(context)

        match = self.model.lookup(context) if self.model is not None else None
        if match is not None:
            _, row = match
            total = sum(row.values())
            scored = []
            for page, count in row.items():
                prob = count / total
                rc, rule = self._best_rule(page, context_set)
                scored.append((
                    count,
                    Prediction(
                        page=page,
                        score=prob * (1.0 + self.beta * rc),
                        markov_probability=prob,
                        rule_confidence=rc,
                        matched_rule=rule,
                    ),
                ))
            scored.sort(key=lambda item: (-item[1].score, -item[0], item[1].page))
            return [p for _, p in scored[:top_n]]

        # no transition evidence at any order: let rules speak, discounted
        fallback = {}
        for page, matches in self._by_consequent.items():
            for rule in matches:
                if context_set.issuperset(rule.antecedent):
                    fallback[page] = (rule.confidence, rule)
                    break
        scored = [
            Prediction(
                page=page,
                score=self.gamma * rc,
                markov_probability=0.0,
                rule_confidence=rc,
                matched_rule=rule,
            )
            for page, (rc, rule) in fallback.items()
        ]
        scored.sort(key=lambda p: (-p.score, p.page))
        return scored[:top_n]


def prediction_to_dict(prediction):
    return {
        "page": prediction.page,
        "score": prediction.score,
        "markov_probability": prediction.markov_probability,
        "rule_confidence": prediction.rule_confidence,
        "matched_rule": (
            None if prediction.matched_rule is None
            else rule_to_dict(prediction.matched_rule)
        ),
    }
