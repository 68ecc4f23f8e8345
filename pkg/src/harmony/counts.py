"""Count tables: the exact sufficient statistic for all win-rate estimates.

Every match contributes two observations, one per side. For each agent on a
side we bump (games, wins); for each unordered pair on the same side we bump
the pair counters. Cross-side pairs are never counted, and whether an agent's
partner appears on the opposing side is irrelevant: conditioning is on the
examined side only.

Counters are exact integers; rates are computed by a single floating-point
division at query time, which makes tables mergeable and results independent
of accumulation order.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import InsufficientDataError, SnapshotError
from .records import AgentId, MatchRecord

SNAPSHOT_MAGIC = "harmony-counts v1"

Pair = tuple[AgentId, AgentId]


def pair_key(x: AgentId, y: AgentId) -> Pair:
    """Canonical unordered-pair key (lexicographically ordered tuple)."""
    return (x, y) if x < y else (y, x)


@dataclass
class CountTable:
    agent_games: dict[AgentId, int] = field(default_factory=dict)
    agent_wins: dict[AgentId, int] = field(default_factory=dict)
    pair_games: dict[Pair, int] = field(default_factory=dict)
    pair_wins: dict[Pair, int] = field(default_factory=dict)
    total_sides: int = 0

    def agents(self) -> list[AgentId]:
        return sorted(self.agent_games)

    def pairs(self) -> list[Pair]:
        return sorted(self.pair_games)

    def add_side(self, roster: Iterable[AgentId], won: bool) -> None:
        """Record one side observation: outcome 1 for the winning side, 0 otherwise."""
        members = sorted(roster)
        outcome = 1 if won else 0
        agent_games = self.agent_games
        agent_wins = self.agent_wins
        pair_games = self.pair_games
        pair_wins = self.pair_wins
        for a in members:
            agent_games[a] = agent_games.get(a, 0) + 1
            agent_wins[a] = agent_wins.get(a, 0) + outcome
        n = len(members)
        for i in range(n):
            a = members[i]
            for j in range(i + 1, n):
                key = (a, members[j])
                pair_games[key] = pair_games.get(key, 0) + 1
                pair_wins[key] = pair_wins.get(key, 0) + outcome
        self.total_sides += 1

    def add_match(self, record: MatchRecord) -> None:
        self.add_side(record.winners, won=True)
        self.add_side(record.losers, won=False)


def accumulate_counts(records: Iterable[MatchRecord]) -> CountTable:
    table = CountTable()
    for record in records:
        table.add_match(record)
    return table


def merge_counts(a: CountTable, b: CountTable) -> CountTable:
    """Pointwise sum. Associative, commutative, and identity on the empty table."""
    merged = CountTable(
        agent_games=dict(a.agent_games),
        agent_wins=dict(a.agent_wins),
        pair_games=dict(a.pair_games),
        pair_wins=dict(a.pair_wins),
        total_sides=a.total_sides + b.total_sides,
    )
    for m, src in (
        (merged.agent_games, b.agent_games),
        (merged.agent_wins, b.agent_wins),
        (merged.pair_games, b.pair_games),
        (merged.pair_wins, b.pair_wins),
    ):
        for key, value in src.items():
            m[key] = m.get(key, 0) + value  # Python ints are unbounded: no overflow to signal
    return merged


@dataclass(frozen=True)
class PairProbabilities:
    """The five conditional win rates for an ordered pair (x, y), with sample sizes.

    p_x / p_y condition on the agent being on the examined side; p_joint on
    both being there; p_x_not_y on x present and y absent (y on the enemy
    side still counts as absent), and symmetrically p_y_not_x.
    """

    x: AgentId
    y: AgentId
    p_x: float
    p_y: float
    p_joint: float
    p_x_not_y: float
    p_y_not_x: float
    n_joint: int
    n_x_not_y: int
    n_y_not_x: int

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "p_x": self.p_x,
            "p_y": self.p_y,
            "p_joint": self.p_joint,
            "p_x_not_y": self.p_x_not_y,
            "p_y_not_x": self.p_y_not_x,
            "n_joint": self.n_joint,
            "n_x_not_y": self.n_x_not_y,
            "n_y_not_x": self.n_y_not_x,
        }


def _rate(wins: int, games: int, alpha: float) -> float:
    # additive smoothing keeps the 0.5 center: (w + a) / (g + 2a)
    if alpha > 0.0:
        return (wins + alpha) / (games + 2.0 * alpha)
    return wins / games


def solo_rate(table: CountTable, x: AgentId) -> float:
    """Win rate of sides containing x. Raises InsufficientDataError on zero games."""
    games = table.agent_games.get(x, 0)
    if games == 0:
        raise InsufficientDataError("agent", x, 0)
    return table.agent_wins[x] / games


def pair_rates(
    table: CountTable, x: AgentId, y: AgentId, alpha: float = 0.0
) -> PairProbabilities:
    """All five win rates for the ordered pair (x, y).

    ``alpha`` is an optional additive-smoothing pseudo-count applied to every
    rate; the default 0 reproduces raw frequencies exactly. Raises
    InsufficientDataError naming whichever denominator is zero.
    """
    if x == y:
        raise ValueError(f"pair requires two distinct agents, got {x!r} twice")
    key = pair_key(x, y)
    joint_games = table.pair_games.get(key, 0)
    if joint_games == 0:
        raise InsufficientDataError("joint", f"({x}, {y})", 0)
    joint_wins = table.pair_wins[key]
    x_games = table.agent_games.get(x, 0)
    y_games = table.agent_games.get(y, 0)
    x_without_games = x_games - joint_games
    y_without_games = y_games - joint_games
    if x_without_games == 0:
        raise InsufficientDataError("x_without_y", f"({x}, {y})", 0)
    if y_without_games == 0:
        raise InsufficientDataError("y_without_x", f"({x}, {y})", 0)
    x_without_wins = table.agent_wins[x] - joint_wins
    y_without_wins = table.agent_wins[y] - joint_wins
    return PairProbabilities(
        x=x,
        y=y,
        p_x=_rate(table.agent_wins[x], x_games, alpha),
        p_y=_rate(table.agent_wins[y], y_games, alpha),
        p_joint=_rate(joint_wins, joint_games, alpha),
        p_x_not_y=_rate(x_without_wins, x_without_games, alpha),
        p_y_not_x=_rate(y_without_wins, y_without_games, alpha),
        n_joint=joint_games,
        n_x_not_y=x_without_games,
        n_y_not_x=y_without_games,
    )


# --- snapshot serialization -------------------------------------------------
#
# Line-oriented text format, version-stamped, fully sorted, so that
# write -> read -> write is byte-identical:
#
#   harmony-counts v1
#   {"total_sides":N}
#   {"agent":"id","games":G,"wins":W}     one line per agent, sorted by id
#   {"pair":["a","b"],"games":G,"wins":W} one line per pair, sorted


def write_snapshot(table: CountTable, stream: IO[str]) -> None:
    stream.write(SNAPSHOT_MAGIC + "\n")
    stream.write(json.dumps({"total_sides": table.total_sides}, separators=(",", ":")) + "\n")
    for agent in sorted(table.agent_games):
        stream.write(
            json.dumps(
                {"agent": agent, "games": table.agent_games[agent], "wins": table.agent_wins[agent]},
                separators=(",", ":"),
                sort_keys=False,
            )
            + "\n"
        )
    for pair in sorted(table.pair_games):
        stream.write(
            json.dumps(
                {"pair": list(pair), "games": table.pair_games[pair], "wins": table.pair_wins[pair]},
                separators=(",", ":"),
                sort_keys=False,
            )
            + "\n"
        )


def read_snapshot(stream: IO[str]) -> CountTable:
    header = stream.readline().rstrip("\n")
    if header != SNAPSHOT_MAGIC:
        raise SnapshotError(f"bad snapshot header {header!r}; expected {SNAPSHOT_MAGIC!r}")
    table = CountTable()
    meta_line = stream.readline()
    try:
        meta = json.loads(meta_line)
        table.total_sides = int(meta["total_sides"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SnapshotError(f"bad snapshot metadata line: {exc}") from exc
    for line_no, line in enumerate(stream, start=3):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            games = int(obj["games"])
            wins = int(obj["wins"])
            if wins < 0 or games < wins:
                raise ValueError(f"wins {wins} out of range for games {games}")
            if "agent" in obj:
                table.agent_games[obj["agent"]] = games
                table.agent_wins[obj["agent"]] = wins
            elif "pair" in obj:
                a, b = obj["pair"]
                if a == b:
                    raise ValueError("pair of identical agents")
                table.pair_games[pair_key(a, b)] = games
                table.pair_wins[pair_key(a, b)] = wins
            else:
                raise ValueError("line is neither an agent nor a pair entry")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise SnapshotError(f"bad snapshot line {line_no}: {exc}") from exc
    return table


def save_snapshot(table: CountTable, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_snapshot(table, fh)


def load_snapshot(path: str) -> CountTable:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return read_snapshot(fh)
    except OSError as exc:
        raise SnapshotError(f"cannot read snapshot {path}: {exc}") from exc


def snapshot_hash(path: str) -> str:
    """sha256 of the snapshot file bytes; identifies a loaded dataset."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
