"""Exception types shared across the package.

Data problems are split into three distinct signals so callers can react
differently: missing/zero denominators (InsufficientDataError), a pair that
was deliberately filtered by the shared-games threshold (BelowThresholdError),
and an index that is mathematically undefined because a baseline win rate is
zero (UndefinedIndexError).
"""

from __future__ import annotations


class HarmonyError(Exception):
    """Base class for all package errors."""


class InsufficientDataError(HarmonyError):
    """A required count denominator is zero.

    ``denominator`` names which one: "joint", "x_without_y", "y_without_x",
    or "agent". ``count`` carries the offending value (always 0 for
    denominators; kept explicit so error payloads are self-describing).
    """

    def __init__(self, denominator: str, subject: str, count: int = 0):
        self.denominator = denominator
        self.subject = subject
        self.count = count
        super().__init__(f"insufficient data: {denominator} denominator is zero for {subject}")

    def to_dict(self) -> dict:
        return {
            "error": "insufficient_data",
            "denominator": self.denominator,
            "subject": self.subject,
            "count": self.count,
        }


class BelowThresholdError(HarmonyError):
    """Pair has data but fewer shared games than the configured minimum.

    Distinct from InsufficientDataError so reports can count filtered pairs
    separately from pairs with genuinely undefined quantities.
    """

    def __init__(self, pair: tuple[str, str], shared_games: int, required: int):
        self.pair = pair
        self.shared_games = shared_games
        self.required = required
        super().__init__(
            f"pair ({pair[0]}, {pair[1]}) has {shared_games} shared games, below minimum {required}"
        )

    def to_dict(self) -> dict:
        return {
            "error": "below_threshold",
            "pair": list(self.pair),
            "shared_games": self.shared_games,
            "required": self.required,
        }


class UndefinedIndexError(HarmonyError):
    """A baseline win rate is exactly zero, so the index ratio is undefined."""

    def __init__(self, baseline: str, subject: str):
        self.baseline = baseline
        self.subject = subject
        super().__init__(f"undefined index: baseline {baseline} is zero for {subject}")

    def to_dict(self) -> dict:
        return {"error": "undefined_index", "baseline": self.baseline, "subject": self.subject}


class TeamDataError(HarmonyError):
    """Strict team assessment failed because some edges lack usable data.

    ``excluded`` is a list of (x, y, reason) tuples, one per ordered edge.
    """

    def __init__(self, team: tuple[str, ...], excluded: list[tuple[str, str, str]]):
        self.team = team
        self.excluded = excluded
        edges = ", ".join(f"{x}->{y} ({why})" for x, y, why in excluded)
        super().__init__(f"team {team} has edges without usable data: {edges}")

    def to_dict(self) -> dict:
        return {
            "error": "team_data",
            "team": list(self.team),
            "excluded_edges": [{"x": x, "y": y, "reason": r} for x, y, r in self.excluded],
        }


class NoFeasibleTeamError(HarmonyError):
    """No candidate roster had full edge coverage during a search."""

    def __init__(self, pool_size: int, k: int, best_coverage: float, best_roster: tuple[str, ...] | None):
        self.pool_size = pool_size
        self.k = k
        self.best_coverage = best_coverage
        self.best_roster = best_roster
        super().__init__(
            f"no feasible {k}-team in pool of {pool_size}; "
            f"best partial coverage {best_coverage:.3f}"
            + (f" on {best_roster}" if best_roster else "")
        )

    def to_dict(self) -> dict:
        return {
            "error": "no_feasible_team",
            "pool_size": self.pool_size,
            "k": self.k,
            "best_coverage": self.best_coverage,
            "best_roster": list(self.best_roster) if self.best_roster else None,
        }


class SearchGuardError(HarmonyError):
    """Exhaustive enumeration would exceed the combinatorial guard."""

    def __init__(self, combinations: int, limit: int):
        self.combinations = combinations
        self.limit = limit
        super().__init__(
            f"{combinations} candidate teams exceeds the exhaustive-search limit of {limit}; "
            "use the greedy/beam search instead"
        )


class SnapshotError(HarmonyError):
    """Count-table snapshot file is missing, corrupt, or version-incompatible."""
