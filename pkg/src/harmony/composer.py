"""Team composition search and incremental draft recommendations.

All searches are pure functions over an immutable CountTable. A dyad-level
index need not compose into team quality, so every result carries the full
edge-ratio breakdown and the weakest edge rather than a bare score.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

from .counts import CountTable, pair_key
from .errors import NoFeasibleTeamError, SearchGuardError, TeamDataError
from .index import AnalysisConfig, TeamAssessment, harmony_index_team, team_edge_ratios
from .records import AgentId, DEFAULT_TEAM_SIZE

EXHAUSTIVE_GUARD = 1_000_000

DEFAULT_BEAM_WIDTH = 8


@dataclass(frozen=True)
class DraftState:
    picked: tuple[AgentId, ...]
    pool: frozenset[AgentId]
    banned: frozenset[AgentId] = frozenset()
    team_size: int = DEFAULT_TEAM_SIZE

    def __post_init__(self) -> None:
        if len(set(self.picked)) != len(self.picked):
            raise ValueError("picked roster contains duplicates")
        if len(self.picked) > self.team_size:
            raise ValueError(
                f"picked {len(self.picked)} agents but team_size is {self.team_size}"
            )
        picked = set(self.picked)
        if picked & self.pool or picked & self.banned or self.pool & self.banned:
            raise ValueError("picked, pool, and banned must be pairwise disjoint")


@dataclass(frozen=True)
class Recommendation:
    candidate: AgentId
    projected_index: float
    weakest_edge: tuple[tuple[AgentId, AgentId], float] | None
    data_coverage: float

    def to_dict(self) -> dict:
        weakest = None
        if self.weakest_edge is not None:
            (x, y), ratio = self.weakest_edge
            weakest = {"x": x, "y": y, "ratio": ratio}
        return {
            "candidate": self.candidate,
            "projected_index": self.projected_index,
            "weakest_edge": weakest,
            "data_coverage": self.data_coverage,
        }


@dataclass(frozen=True)
class DraftRecommendations:
    recommendations: tuple[Recommendation, ...]
    no_data_warning: bool

    def to_dict(self) -> dict:
        return {
            "recommendations": [r.to_dict() for r in self.recommendations],
            "no_data_warning": self.no_data_warning,
        }


@dataclass(frozen=True)
class SearchResult:
    team: tuple[AgentId, ...]
    assessment: TeamAssessment
    no_edge_agents: tuple[AgentId, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "team": list(self.team),
            "assessment": self.assessment.to_dict(),
            "no_edge_agents": list(self.no_edge_agents),
        }


def _validate_pool(pool: Iterable[AgentId], k: int) -> list[AgentId]:
    members = sorted(set(pool))
    if k < 2:
        raise ValueError("team size k must be >= 2")
    if len(members) < k:
        raise ValueError(f"pool of {len(members)} agents cannot field a team of {k}")
    return members


def _edge_usable(table: CountTable, cfg: AnalysisConfig, x: AgentId, y: AgentId) -> bool:
    """True when the unordered pair would contribute at least one ratio."""
    key = pair_key(x, y)
    shared = table.pair_games.get(key, 0)
    if shared < cfg.min_shared_games:
        return False
    ratios, _ = team_edge_ratios(table, (x, y), cfg)
    return bool(ratios)


def best_team_exhaustive(
    table: CountTable, pool: Iterable[AgentId], k: int, cfg: AnalysisConfig | None = None
) -> SearchResult:
    """Highest-index k-subset under strict (full-coverage) scoring.

    Ties break to the lexicographically smallest roster. Pools beyond the
    combinatorial guard are refused; use best_team_greedy there.
    """
    cfg = cfg or AnalysisConfig()
    members = _validate_pool(pool, k)
    n_comb = math.comb(len(members), k)
    if n_comb > EXHAUSTIVE_GUARD:
        raise SearchGuardError(n_comb, EXHAUSTIVE_GUARD)

    total_edges = k * (k - 1)
    best: TeamAssessment | None = None
    best_coverage = 0.0
    best_partial_roster: tuple[AgentId, ...] | None = None
    for roster in itertools.combinations(members, k):
        try:
            assessment = harmony_index_team(table, roster, cfg)
        except TeamDataError as exc:
            coverage = (total_edges - len(exc.excluded)) / total_edges
            if coverage > best_coverage:
                best_coverage = coverage
                best_partial_roster = roster
            continue
        if best is None or assessment.index > best.index:
            best = assessment
    if best is None:
        raise NoFeasibleTeamError(len(members), k, best_coverage, best_partial_roster)
    return SearchResult(team=best.team, assessment=best)


def best_team_greedy(
    table: CountTable,
    pool: Iterable[AgentId],
    k: int,
    cfg: AnalysisConfig | None = None,
    beam_width: int = DEFAULT_BEAM_WIDTH,
) -> SearchResult:
    """Beam search over incremental picks, scored by the partial-mode index.

    Never better than the exhaustive optimum. Agents without a single usable
    edge in the pool cannot appear in any feasible team and are dropped up
    front (reported via no_edge_agents).
    """
    cfg = cfg or AnalysisConfig()
    if beam_width < 1:
        raise ValueError("beam_width must be >= 1")
    members = _validate_pool(pool, k)

    usable: set[AgentId] = set()
    for x, y in itertools.combinations(members, 2):
        if x in usable and y in usable:
            continue
        if _edge_usable(table, cfg, x, y):
            usable.add(x)
            usable.add(y)
    no_edge = tuple(a for a in members if a not in usable)
    eligible = [a for a in members if a in usable]
    if len(eligible) < k:
        raise NoFeasibleTeamError(len(members), k, 0.0, None)

    def score(roster: tuple[AgentId, ...]) -> float:
        return harmony_index_team(table, roster, cfg, partial=True).index

    beam: list[tuple[AgentId, ...]] = [
        pair for pair in itertools.combinations(eligible, 2)
    ]
    beam.sort(key=lambda r: (-score(r), r))
    beam = beam[:beam_width]

    size = 2
    while size < k:
        seen: set[frozenset[AgentId]] = set()
        extended: list[tuple[AgentId, ...]] = []
        for roster in beam:
            in_roster = set(roster)
            for c in eligible:
                if c in in_roster:
                    continue
                candidate = tuple(sorted(roster + (c,)))
                key = frozenset(candidate)
                if key in seen:
                    continue
                seen.add(key)
                extended.append(candidate)
        extended.sort(key=lambda r: (-score(r), r))
        beam = extended[:beam_width]
        size += 1

    total_edges = k * (k - 1)
    best: TeamAssessment | None = None
    best_coverage = 0.0
    best_partial_roster: tuple[AgentId, ...] | None = None
    for roster in sorted(beam):
        try:
            assessment = harmony_index_team(table, roster, cfg)
        except TeamDataError as exc:
            coverage = (total_edges - len(exc.excluded)) / total_edges
            if coverage > best_coverage:
                best_coverage = coverage
                best_partial_roster = roster
            continue
        if best is None or assessment.index > best.index:
            best = assessment
    if best is None:
        raise NoFeasibleTeamError(len(members), k, best_coverage, best_partial_roster)
    return SearchResult(team=best.team, assessment=best, no_edge_agents=no_edge)


def recommend_next(
    table: CountTable, state: DraftState, cfg: AnalysisConfig | None = None
) -> DraftRecommendations:
    """Rank every pool candidate by the projected index of picked + candidate.

    Projections run in partial mode; data_coverage is the fraction of the
    candidate's own ordered edges that survive, and candidates with zero
    surviving edges sink to the bottom in lexicographic order.
    """
    cfg = cfg or AnalysisConfig()
    if not state.picked:
        raise ValueError("recommend_next needs at least one picked agent")
    if not state.pool:
        raise ValueError("recommend_next needs a non-empty pool")

    recs: list[Recommendation] = []
    for c in sorted(state.pool):
        roster = state.picked + (c,)
        assessment = harmony_index_team(table, roster, cfg, partial=True)
        incident_total = 2 * len(state.picked)
        incident_present = sum(1 for (x, y) in assessment.edge_ratios if c in (x, y))
        coverage = incident_present / incident_total
        recs.append(
            Recommendation(
                candidate=c,
                projected_index=assessment.index,
                weakest_edge=assessment.weakest_edge(),
                data_coverage=coverage,
            )
        )
    recs.sort(
        key=lambda r: (
            r.data_coverage == 0.0,
            -r.projected_index,
            -r.data_coverage,
            r.candidate,
        )
    )
    no_data = all(r.data_coverage == 0.0 for r in recs)
    return DraftRecommendations(recommendations=tuple(recs), no_data_warning=no_data)
