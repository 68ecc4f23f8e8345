"""Match records and streaming log parsers.

A match is two disjoint rosters and which side won. Logs arrive as JSONL
(one object per line) or CSV (``match_id,winner_1..winner_k,loser_1..loser_k``
with a mandatory header). Parsing is streaming: memory stays bounded no
matter how long the input is, and malformed lines are yielded as ParseError
values with a line number and reason instead of being dropped.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

AgentId = str

DEFAULT_TEAM_SIZE = 5


@dataclass(frozen=True)
class MatchRecord:
    match_id: str
    winners: frozenset[AgentId]
    losers: frozenset[AgentId]
    timestamp: int | None = None


@dataclass(frozen=True)
class ParseError:
    line_no: int
    reason: str
    raw: str


ParsedLine = Union[MatchRecord, ParseError]


def _validate_sides(
    winners: list[AgentId], losers: list[AgentId], team_size: int | None
) -> str | None:
    """Return a rejection reason, or None if the sides form a valid match."""
    if not winners or not losers:
        return "empty side"
    if any(not isinstance(a, str) or a == "" for a in winners + losers):
        return "agent id must be a non-empty string"
    win_set = frozenset(winners)
    lose_set = frozenset(losers)
    if len(win_set) != len(winners) or len(lose_set) != len(losers):
        return "duplicate agent in side"
    if win_set & lose_set:
        overlap = sorted(win_set & lose_set)
        return f"agents on both sides: {overlap}"
    if team_size is not None and (len(winners) != team_size or len(losers) != team_size):
        return f"side sizes {len(winners)}v{len(losers)} do not match team_size {team_size}"
    return None


def _record_from_fields(
    match_id: object,
    winners: object,
    losers: object,
    timestamp: object,
    team_size: int | None,
) -> MatchRecord | str:
    if not isinstance(match_id, str) or match_id == "":
        return "match_id must be a non-empty string"
    if not isinstance(winners, list) or not isinstance(losers, list):
        return "winners and losers must be arrays"
    if timestamp is not None and not isinstance(timestamp, int):
        return "timestamp must be an integer"
    reason = _validate_sides(winners, losers, team_size)
    if reason is not None:
        return reason
    return MatchRecord(
        match_id=match_id,
        winners=frozenset(winners),
        losers=frozenset(losers),
        timestamp=timestamp,
    )


def parse_jsonl(stream: IO[str], team_size: int | None = DEFAULT_TEAM_SIZE) -> Iterator[ParsedLine]:
    for line_no, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            yield ParseError(line_no, f"invalid JSON: {exc.msg}", stripped[:200])
            continue
        if not isinstance(obj, dict):
            yield ParseError(line_no, "line is not a JSON object", stripped[:200])
            continue
        missing = [k for k in ("match_id", "winners", "losers") if k not in obj]
        if missing:
            yield ParseError(line_no, f"missing field: {', '.join(missing)}", stripped[:200])
            continue
        result = _record_from_fields(
            obj["match_id"], obj["winners"], obj["losers"], obj.get("timestamp"), team_size
        )
        if isinstance(result, str):
            yield ParseError(line_no, result, stripped[:200])
        else:
            yield result


def _csv_side_columns(header: list[str]) -> tuple[list[int], list[int], int | None, str | None]:
    """Locate winner_*/loser_* columns. Returns (winner idxs, loser idxs, timestamp idx, error)."""
    if not header or header[0] != "match_id":
        return [], [], None, "header must start with match_id"
    winners: list[int] = []
    losers: list[int] = []
    ts_idx: int | None = None
    for i, name in enumerate(header[1:], start=1):
        if name == f"winner_{len(winners) + 1}":
            winners.append(i)
        elif name == f"loser_{len(losers) + 1}":
            losers.append(i)
        elif name == "timestamp" and ts_idx is None:
            ts_idx = i
        else:
            return [], [], None, f"unexpected column {name!r}"
    if not winners or not losers:
        return [], [], None, "header must declare winner_1.. and loser_1.. columns"
    return winners, losers, ts_idx, None


def parse_csv(stream: IO[str], team_size: int | None = DEFAULT_TEAM_SIZE) -> Iterator[ParsedLine]:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        yield ParseError(1, "missing header row", "")
        return
    winner_idx, loser_idx, ts_idx, err = _csv_side_columns(header)
    if err is not None:
        yield ParseError(1, err, ",".join(header)[:200])
        return
    if team_size is not None and (len(winner_idx) != team_size or len(loser_idx) != team_size):
        yield ParseError(
            1,
            f"header declares {len(winner_idx)}v{len(loser_idx)} but team_size is {team_size}",
            ",".join(header)[:200],
        )
        return
    width = 1 + len(winner_idx) + len(loser_idx) + (1 if ts_idx is not None else 0)
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != width:
            yield ParseError(line_no, f"expected {width} columns, got {len(row)}", ",".join(row)[:200])
            continue
        timestamp: int | None = None
        if ts_idx is not None and row[ts_idx] != "":
            try:
                timestamp = int(row[ts_idx])
            except ValueError:
                yield ParseError(line_no, "timestamp must be an integer", ",".join(row)[:200])
                continue
        result = _record_from_fields(
            row[0],
            [row[i] for i in winner_idx],
            [row[i] for i in loser_idx],
            timestamp,
            # side sizes are fixed by the header; re-check only disjointness etc.
            None,
        )
        if isinstance(result, str):
            yield ParseError(line_no, result, ",".join(row)[:200])
        else:
            yield result


def parse_match_log(
    stream: IO[str] | IO[bytes],
    format: str = "jsonl",
    team_size: int | None = DEFAULT_TEAM_SIZE,
) -> Iterator[ParsedLine]:
    """Stream MatchRecords (or ParseErrors) from a log.

    ``format`` is "jsonl" or "csv". ``team_size`` enforces equal side sizes
    when set; pass None to accept any (non-empty, disjoint) rosters.
    """
    if isinstance(stream, (io.RawIOBase, io.BufferedIOBase)) or (
        hasattr(stream, "mode") and "b" in getattr(stream, "mode", "")
    ):
        stream = io.TextIOWrapper(stream, encoding="utf-8")  # type: ignore[arg-type]
    if format == "jsonl":
        return parse_jsonl(stream, team_size)  # type: ignore[arg-type]
    if format == "csv":
        return parse_csv(stream, team_size)  # type: ignore[arg-type]
    raise ValueError(f"unknown log format: {format!r}")


def split_parsed(items: Iterable[ParsedLine]) -> tuple[list[MatchRecord], list[ParseError]]:
    """Materialize a parsed stream into (records, errors). Test/demo helper."""
    records: list[MatchRecord] = []
    errors: list[ParseError] = []
    for item in items:
        if isinstance(item, MatchRecord):
            records.append(item)
        else:
            errors.append(item)
    return records, errors


def record_to_json(record: MatchRecord) -> str:
    """Canonical JSONL form: sorted rosters, stable key order."""
    obj: dict = {
        "match_id": record.match_id,
        "winners": sorted(record.winners),
        "losers": sorted(record.losers),
    }
    if record.timestamp is not None:
        obj["timestamp"] = record.timestamp
    return json.dumps(obj, separators=(",", ":"))
