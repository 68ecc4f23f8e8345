from __future__ import annotations

import hashlib
import io
import json

import pytest

from harmony.counts import (
    SNAPSHOT_MAGIC,
    CountTable,
    accumulate_counts,
    load_snapshot,
    merge_counts,
    pair_key,
    pair_rates,
    read_snapshot,
    save_snapshot,
    snapshot_hash,
    solo_rate,
    write_snapshot,
)
from harmony.errors import InsufficientDataError, SnapshotError

from conftest import load_fixture_a_records


def table_fields(t: CountTable) -> tuple:
    return (t.agent_games, t.agent_wins, t.pair_games, t.pair_wins, t.total_sides)


def test_fixture_agent_counts_exact(fixture_a_table, fixture_a_expected) -> None:
    t = fixture_a_table
    assert t.total_sides == fixture_a_expected["total_sides"]
    assert t.agent_games == fixture_a_expected["agent_games"]
    assert t.agent_wins == fixture_a_expected["agent_wins"]


def test_fixture_pair_counts_exact(fixture_a_table, fixture_a_expected) -> None:
    t = fixture_a_table
    expected_pairs = {
        tuple(k.split("|")): v for k, v in fixture_a_expected["pairs"].items()
    }
    assert set(t.pair_games) == set(expected_pairs)
    for pair, exp in expected_pairs.items():
        assert t.pair_games[pair] == exp["pair_games"], pair
        assert t.pair_wins[pair] == exp["pair_wins"], pair


def test_fixture_conditional_rates_exact(fixture_a_table, fixture_a_expected) -> None:
    for key, exp in fixture_a_expected["pairs"].items():
        x, y = key.split("|")
        wx, gx = exp["x_without_y"]
        wy, gy = exp["y_without_x"]
        if gx == 0 or gy == 0:
            with pytest.raises(InsufficientDataError):
                pair_rates(fixture_a_table, x, y)
            continue
        p = pair_rates(fixture_a_table, x, y)
        assert p.n_joint == exp["pair_games"]
        assert p.n_x_not_y == gx and p.n_y_not_x == gy
        assert p.p_x_not_y == wx / gx
        assert p.p_y_not_x == wy / gy
        assert p.p_joint == exp["pair_wins"] / exp["pair_games"]
        if "p_x" in exp:
            assert p.p_x == exp["p_x"][0] / exp["p_x"][1]
            assert p.p_y == exp["p_y"][0] / exp["p_y"][1]


def test_law_of_total_counts(fixture_a_table, fixture_a_expected) -> None:
    # Any pair's joint + exclusive sample sizes recover the agent totals.
    for key, exp in fixture_a_expected["pairs"].items():
        x, y = key.split("|")
        if exp["x_without_y"][1] == 0 or exp["y_without_x"][1] == 0:
            continue
        p = pair_rates(fixture_a_table, x, y)
        assert p.n_joint + p.n_x_not_y == fixture_a_expected["agent_games"][x]
        assert p.n_joint + p.n_y_not_x == fixture_a_expected["agent_games"][y]


def test_solo_rates_exact(fixture_a_table, fixture_a_expected) -> None:
    for agent, games in fixture_a_expected["agent_games"].items():
        wins = fixture_a_expected["agent_wins"][agent]
        assert solo_rate(fixture_a_table, agent) == wins / games


def test_solo_rate_unknown_agent() -> None:
    with pytest.raises(InsufficientDataError) as exc:
        solo_rate(CountTable(), "ghost")
    assert exc.value.denominator == "agent"
    assert exc.value.to_dict()["subject"] == "ghost"


def test_pair_rates_identical_agents_rejected(fixture_a_table) -> None:
    with pytest.raises(ValueError):
        pair_rates(fixture_a_table, "a", "a")


def test_pair_rates_unseen_pair(fixture_a_table) -> None:
    with pytest.raises(InsufficientDataError) as exc:
        pair_rates(fixture_a_table, "a", "zz")
    assert exc.value.denominator == "joint"


def test_pair_key_canonical() -> None:
    assert pair_key("b", "a") == ("a", "b") == pair_key("a", "b")


def test_merge_is_homomorphic_over_concatenation() -> None:
    records = load_fixture_a_records()
    left = accumulate_counts(records[:3])
    right = accumulate_counts(records[3:])
    merged = merge_counts(left, right)
    whole = accumulate_counts(records)
    assert table_fields(merged) == table_fields(whole)
    assert table_fields(merge_counts(right, left)) == table_fields(merged)


def test_merge_with_empty_is_identity(fixture_a_table) -> None:
    merged = merge_counts(fixture_a_table, CountTable())
    assert table_fields(merged) == table_fields(fixture_a_table)


def test_rates_invariant_under_count_scaling(fixture_a_table) -> None:
    # Replaying the log 7 times multiplies every count but leaves each rate,
    # a single correctly-rounded division of the same rational, bit-identical.
    records = load_fixture_a_records()
    table7 = CountTable()
    for _ in range(7):
        for rec in records:
            table7.add_match(rec)
    for (x, y) in fixture_a_table.pairs():
        try:
            base = pair_rates(fixture_a_table, x, y)
        except InsufficientDataError:
            with pytest.raises(InsufficientDataError):
                pair_rates(table7, x, y)
            continue
        scaled = pair_rates(table7, x, y)
        assert scaled.p_joint == base.p_joint
        assert scaled.p_x_not_y == base.p_x_not_y
        assert scaled.p_y_not_x == base.p_y_not_x
        assert scaled.n_joint == 7 * base.n_joint


def test_relabel_invariance() -> None:
    records = load_fixture_a_records()
    table = accumulate_counts(records)
    renamed = CountTable()
    for rec in records:
        renamed.add_side({f"z_{m}" for m in rec.winners}, True)
        renamed.add_side({f"z_{m}" for m in rec.losers}, False)
    for (x, y) in table.pairs():
        assert renamed.pair_games[(f"z_{x}", f"z_{y}")] == table.pair_games[(x, y)]
        assert renamed.pair_wins[(f"z_{x}", f"z_{y}")] == table.pair_wins[(x, y)]


def test_smoothing_formula(fixture_a_table) -> None:
    p = pair_rates(fixture_a_table, "a", "b", alpha=0.5)
    # (w + a) / (g + 2a) on every rate; pair ab: joint 3/4, a-without-b 1/2.
    assert p.p_joint == 3.5 / 5.0
    assert p.p_x_not_y == 1.5 / 3.0
    assert p.p_y_not_x == 1.5 / 3.0
    assert p.p_x == 4.5 / 7.0
    assert p.p_y == 4.5 / 7.0
    # alpha=0 is raw frequency, not a limit of the smoothed form
    assert pair_rates(fixture_a_table, "a", "b").p_joint == 0.75


def test_snapshot_round_trip_byte_identical(fixture_a_table) -> None:
    buf = io.StringIO()
    write_snapshot(fixture_a_table, buf)
    text = buf.getvalue()
    assert text.startswith(SNAPSHOT_MAGIC + "\n")
    back = read_snapshot(io.StringIO(text))
    assert table_fields(back) == table_fields(fixture_a_table)
    buf2 = io.StringIO()
    write_snapshot(back, buf2)
    assert buf2.getvalue() == text


def test_snapshot_lines_are_sorted_json(fixture_a_table) -> None:
    buf = io.StringIO()
    write_snapshot(fixture_a_table, buf)
    lines = buf.getvalue().splitlines()
    agents = [json.loads(l)["agent"] for l in lines if '"agent"' in l]
    pairs = [tuple(json.loads(l)["pair"]) for l in lines if '"pair"' in l]
    assert agents == sorted(agents) and len(agents) == 10
    assert pairs == sorted(pairs) and len(pairs) == 45


def test_snapshot_file_and_hash(fixture_a_table, tmp_path) -> None:
    path = tmp_path / "fixture.counts"
    save_snapshot(fixture_a_table, str(path))
    back = load_snapshot(str(path))
    assert table_fields(back) == table_fields(fixture_a_table)
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    assert snapshot_hash(str(path)) == digest


def test_snapshot_rejects_bad_magic() -> None:
    with pytest.raises(SnapshotError):
        read_snapshot(io.StringIO("harmony-counts v999\n{}\n"))


def test_snapshot_rejects_garbage_lines(fixture_a_table) -> None:
    buf = io.StringIO()
    write_snapshot(fixture_a_table, buf)
    good = buf.getvalue()
    for mutation in (
        good.replace('"games":6', '"games":-1', 1),
        good + '{"pair":["q","q"],"games":1,"wins":0}\n',
        good + "whatever\n",
        good.replace('"wins":4', '"wins":400', 1),
    ):
        with pytest.raises(SnapshotError):
            read_snapshot(io.StringIO(mutation))


def test_load_snapshot_missing_file(tmp_path) -> None:
    with pytest.raises(SnapshotError):
        load_snapshot(str(tmp_path / "absent.counts"))


def test_empty_table_snapshot_round_trip() -> None:
    buf = io.StringIO()
    write_snapshot(CountTable(), buf)
    back = read_snapshot(io.StringIO(buf.getvalue()))
    assert table_fields(back) == ({}, {}, {}, {}, 0)
