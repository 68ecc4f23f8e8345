"""Pairwise synergy analytics for team-versus-team match logs."""

from .counts import (
    CountTable,
    PairProbabilities,
    accumulate_counts,
    load_snapshot,
    merge_counts,
    pair_key,
    pair_rates,
    save_snapshot,
    snapshot_hash,
    solo_rate,
)
from .composer import (
    DraftRecommendations,
    DraftState,
    Recommendation,
    SearchResult,
    best_team_exhaustive,
    best_team_greedy,
    recommend_next,
)
from .errors import (
    BelowThresholdError,
    HarmonyError,
    InsufficientDataError,
    NoFeasibleTeamError,
    SearchGuardError,
    SnapshotError,
    TeamDataError,
    UndefinedIndexError,
)
from .graph import graph_export
from .index import (
    AnalysisConfig,
    FilterSummary,
    HarmonyClass,
    PairAssessment,
    TeamAssessment,
    assess_all_pairs,
    classify_pair,
    harmony_index_pair,
    harmony_index_team,
)
from .records import MatchRecord, ParseError, parse_match_log
from .report import DistributionReport, distribution_report
from .synth import SynthConfig, generate_dataset, oracle_pair_probabilities

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "BelowThresholdError",
    "CountTable",
    "DistributionReport",
    "DraftRecommendations",
    "DraftState",
    "FilterSummary",
    "HarmonyClass",
    "HarmonyError",
    "InsufficientDataError",
    "MatchRecord",
    "NoFeasibleTeamError",
    "PairAssessment",
    "PairProbabilities",
    "ParseError",
    "Recommendation",
    "SearchGuardError",
    "SearchResult",
    "SnapshotError",
    "SynthConfig",
    "TeamAssessment",
    "TeamDataError",
    "UndefinedIndexError",
    "accumulate_counts",
    "assess_all_pairs",
    "best_team_exhaustive",
    "best_team_greedy",
    "classify_pair",
    "distribution_report",
    "generate_dataset",
    "graph_export",
    "harmony_index_pair",
    "harmony_index_team",
    "load_snapshot",
    "merge_counts",
    "oracle_pair_probabilities",
    "pair_key",
    "pair_rates",
    "parse_match_log",
    "recommend_next",
    "save_snapshot",
    "snapshot_hash",
    "solo_rate",
]
