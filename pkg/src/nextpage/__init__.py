"""Next-page prediction from web access logs.

Parses NCSA access logs into sessions, fuzzifies dwell times into vague
(for/against/hesitation) evidence, mines vague association rules, trains
order-k Markov transition models, integrates the two into one predictor,
and measures the payoff with a trace-driven prefetch cache simulator.
"""

from ._kernels import jit_enabled
from .fuzzy import (FuzzySet, FuzzyTimePartition, MembershipVector,
                    default_partition, eval_raw, eval_raw_many, normalize,
                    normalize_many)
from .logs import (IngestReport, LogEntry, LogParseError, PageViewFilter,
                   filter_page_views, format_line, parse_line, parse_log)
from .markov import TransitionModel, predict_next, sequence_probability, train
from .mining import (VagueDatabase, VagueRule, build_vague_database,
                     confidence, item_attractiveness, item_hesitation, mine,
                     support)
from .predict import Prediction, Predictor
from .sessions import PageVisit, Session, compute_dwell, sessionize
from .simulator import LRUCache, SimReport, simulate, split_sessions
from .synth import GeneratorSpec, dominant_chain, generate, make_spec
from .vague import VagueValue, combine_visits, decompose, from_memberships, make_vague

__version__ = "0.1.0"

__all__ = [
    "FuzzySet", "FuzzyTimePartition", "MembershipVector", "default_partition",
    "eval_raw", "eval_raw_many", "normalize", "normalize_many",
    "IngestReport", "LogEntry", "LogParseError", "PageViewFilter",
    "filter_page_views", "format_line", "parse_line", "parse_log",
    "TransitionModel", "predict_next", "sequence_probability", "train",
    "VagueDatabase", "VagueRule", "build_vague_database", "confidence",
    "item_attractiveness", "item_hesitation", "mine", "support",
    "Prediction", "Predictor",
    "PageVisit", "Session", "compute_dwell", "sessionize",
    "LRUCache", "SimReport", "simulate", "split_sessions",
    "GeneratorSpec", "dominant_chain", "generate", "make_spec",
    "VagueValue", "combine_visits", "decompose", "from_memberships", "make_vague",
    "jit_enabled",
]
