"""Harmony Index computation and pair classification.

The pairwise index is the geometric mean of the two improvement ratios

    ratio_x = P(win | x and y together) / P(win | x without y)
    ratio_y = P(win | x and y together) / P(win | y without x)
    index   = sqrt(ratio_x * ratio_y)

1 is neutral: each agent's baseline is its own win rate on sides that do not
include the partner, so the index measures what the pairing adds. The team
generalization multiplies the ratio over every ordered pair (x, y), x != y,
in the roster and takes the n-th root, n being the roster size; for n = 2 it
reduces to the pairwise form.

Classes: both ratios above 1 is Harmony, both at or below 1 is Discord; a
split decision is Uplift when the combined index still exceeds 1 and Depress
otherwise. A ratio of exactly 1 is "no increase" and counts as a loss, and a
split pair with index exactly 1 falls to Depress, so classification is total
and deterministic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .counts import CountTable, PairProbabilities, pair_key, pair_rates
from .errors import (
    BelowThresholdError,
    InsufficientDataError,
    TeamDataError,
    UndefinedIndexError,
)
from .records import AgentId

NEUTRAL_INDEX = 1.0


class HarmonyClass(enum.Enum):
    HARMONY = "harmony"
    UPLIFT = "uplift"
    DEPRESS = "depress"
    DISCORD = "discord"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class AnalysisConfig:
    """Thresholds shared by the whole analysis pipeline.

    min_shared_games filters pairs with too few co-rostered sides to be
    statistically meaningful. target_success_rate is the win rate a pairing
    must exceed to be considered effective (strictly greater than).
    """

    min_shared_games: int = 1000
    target_success_rate: float = 0.5
    smoothing_alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.min_shared_games < 1:
            raise ValueError("min_shared_games must be >= 1")
        if not (0.0 < self.target_success_rate < 1.0):
            raise ValueError("target_success_rate must be strictly between 0 and 1")
        if self.smoothing_alpha < 0.0:
            raise ValueError("smoothing_alpha must be >= 0")


@dataclass(frozen=True)
class PairAssessment:
    pair: tuple[AgentId, AgentId]
    index: float
    ratio_x: float
    ratio_y: float
    harmony_class: HarmonyClass
    below_target: bool
    probabilities: PairProbabilities

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "index": self.index,
            "ratio_x": self.ratio_x,
            "ratio_y": self.ratio_y,
            "class": self.harmony_class.value,
            "below_target": self.below_target,
            "probabilities": self.probabilities.to_dict(),
        }


@dataclass(frozen=True)
class TeamAssessment:
    team: tuple[AgentId, ...]
    index: float
    edge_ratios: dict[tuple[AgentId, AgentId], float]
    excluded_edges: list[tuple[AgentId, AgentId, str]]
    partial: bool

    def weakest_edge(self) -> tuple[tuple[AgentId, AgentId], float] | None:
        if not self.edge_ratios:
            return None
        edge = min(self.edge_ratios, key=lambda e: (self.edge_ratios[e], e))
        return edge, self.edge_ratios[edge]

    def to_dict(self) -> dict:
        return {
            "team": list(self.team),
            "index": self.index,
            "edge_ratios": [
                {"x": x, "y": y, "ratio": r} for (x, y), r in sorted(self.edge_ratios.items())
            ],
            "excluded_edges": [
                {"x": x, "y": y, "reason": r} for x, y, r in self.excluded_edges
            ],
            "partial": self.partial,
        }


def harmony_index_pair(p: PairProbabilities) -> float:
    """Pairwise index sqrt((p_joint/p_x_not_y) * (p_joint/p_y_not_x)).

    Symmetric in the two agents; 0 exactly when the pair never wins together.
    Raises UndefinedIndexError when a baseline rate is zero.
    """
    if p.p_x_not_y == 0.0:
        raise UndefinedIndexError("x_without_y", f"({p.x}, {p.y})")
    if p.p_y_not_x == 0.0:
        raise UndefinedIndexError("y_without_x", f"({p.x}, {p.y})")
    return math.sqrt((p.p_joint / p.p_x_not_y) * (p.p_joint / p.p_y_not_x))


def classify_pair(
    p: PairProbabilities, cfg: AnalysisConfig, enforce_min_shared: bool = True
) -> PairAssessment:
    """Classify one pair into Harmony/Uplift/Depress/Discord.

    With enforce_min_shared (the default, used by the bulk pipeline), a pair
    under cfg.min_shared_games raises BelowThresholdError; explicit
    single-pair queries may disable the check to answer anyway.
    """
    if enforce_min_shared and p.n_joint < cfg.min_shared_games:
        raise BelowThresholdError((p.x, p.y), p.n_joint, cfg.min_shared_games)
    if p.p_x_not_y == 0.0:
        raise UndefinedIndexError("x_without_y", f"({p.x}, {p.y})")
    if p.p_y_not_x == 0.0:
        raise UndefinedIndexError("y_without_x", f"({p.x}, {p.y})")
    ratio_x = p.p_joint / p.p_x_not_y
    ratio_y = p.p_joint / p.p_y_not_x
    index = math.sqrt(ratio_x * ratio_y)
    x_wins = ratio_x > 1.0
    y_wins = ratio_y > 1.0
    if x_wins and y_wins:
        cls = HarmonyClass.HARMONY
    elif not x_wins and not y_wins:
        cls = HarmonyClass.DISCORD
    elif index > 1.0:
        cls = HarmonyClass.UPLIFT
    else:
        cls = HarmonyClass.DEPRESS
    below_target = cls is HarmonyClass.HARMONY and p.p_joint <= cfg.target_success_rate
    return PairAssessment(
        pair=pair_key(p.x, p.y),
        index=index,
        ratio_x=ratio_x if p.x < p.y else ratio_y,
        ratio_y=ratio_y if p.x < p.y else ratio_x,
        harmony_class=cls,
        below_target=below_target,
        probabilities=p,
    )


@dataclass
class FilterSummary:
    assessed: int = 0
    filtered_by_threshold: int = 0
    filtered_undefined_baseline: int = 0

    def to_dict(self) -> dict:
        return {
            "assessed": self.assessed,
            "filtered_by_threshold": self.filtered_by_threshold,
            "filtered_undefined_baseline": self.filtered_undefined_baseline,
        }


def assess_all_pairs(
    table: CountTable, cfg: AnalysisConfig
) -> tuple[list[PairAssessment], FilterSummary]:
    """Assess every co-rostered pair that clears the shared-games threshold.

    Pairs that fail the threshold or have undefined baselines are tallied in
    the summary instead of raising. Output order is lexicographic by pair.
    """
    assessments: list[PairAssessment] = []
    summary = FilterSummary()
    alpha = cfg.smoothing_alpha
    for pair in sorted(table.pair_games):
        if table.pair_games[pair] < cfg.min_shared_games:
            summary.filtered_by_threshold += 1
            continue
        try:
            probs = pair_rates(table, pair[0], pair[1], alpha=alpha)
            assessments.append(classify_pair(probs, cfg, enforce_min_shared=False))
        except (InsufficientDataError, UndefinedIndexError):
            summary.filtered_undefined_baseline += 1
    summary.assessed = len(assessments)
    return assessments, summary


ExcludedEdge = tuple[AgentId, AgentId, str]


def team_edge_ratios(
    table: CountTable, team: tuple[AgentId, ...], cfg: AnalysisConfig
) -> tuple[dict[tuple[AgentId, AgentId], float], list[ExcludedEdge]]:
    """Improvement ratio for every ordered pair in the roster.

    An unordered pair that is below the shared-games threshold or never
    co-rostered excludes both of its directions; a zero baseline win rate
    excludes only the direction that divides by it.
    """
    ratios: dict[tuple[AgentId, AgentId], float] = {}
    excluded: list[ExcludedEdge] = []
    members = sorted(team)
    for i, x in enumerate(members):
        for y in members[i + 1 :]:
            shared = table.pair_games.get(pair_key(x, y), 0)
            if shared == 0:
                excluded.append((x, y, "no_joint_data"))
                excluded.append((y, x, "no_joint_data"))
                continue
            if shared < cfg.min_shared_games:
                excluded.append((x, y, "below_threshold"))
                excluded.append((y, x, "below_threshold"))
                continue
            try:
                probs = pair_rates(table, x, y, alpha=cfg.smoothing_alpha)
            except InsufficientDataError as exc:
                reason = "no_solo_baseline"
                if exc.denominator in ("x_without_y", "y_without_x"):
                    excluded.append((x, y, reason))
                    excluded.append((y, x, reason))
                else:  # pragma: no cover - joint==0 already handled above
                    excluded.append((x, y, reason))
                    excluded.append((y, x, reason))
                continue
            if probs.p_x_not_y == 0.0:
                excluded.append((x, y, "zero_baseline_rate"))
            else:
                ratios[(x, y)] = probs.p_joint / probs.p_x_not_y
            if probs.p_y_not_x == 0.0:
                excluded.append((y, x, "zero_baseline_rate"))
            else:
                ratios[(y, x)] = probs.p_joint / probs.p_y_not_x
    excluded.sort()
    return ratios, excluded


def harmony_index_team(
    table: CountTable,
    team: set[AgentId] | tuple[AgentId, ...] | list[AgentId],
    cfg: AnalysisConfig | None = None,
    partial: bool = False,
) -> TeamAssessment:
    """Index for a roster of size n: n-th root of the product of all ordered
    pair ratios.

    Strict mode (default) raises TeamDataError when any edge lacks usable
    data. ``partial=True`` computes over surviving edges instead and reports
    the exclusions; partial results are marked non-canonical via the
    ``partial`` flag.
    """
    cfg = cfg or AnalysisConfig()
    members = tuple(sorted(set(team)))
    if len(members) < 2:
        raise ValueError(f"team must have at least 2 distinct members, got {members}")
    ratios, excluded = team_edge_ratios(table, members, cfg)
    if excluded and not partial:
        raise TeamDataError(members, excluded)
    n = len(members)
    product = 1.0
    for edge in sorted(ratios):
        product *= ratios[edge]
    index = product ** (1.0 / n)
    return TeamAssessment(
        team=members,
        index=index,
        edge_ratios=ratios,
        excluded_edges=excluded,
        partial=bool(excluded),
    )
