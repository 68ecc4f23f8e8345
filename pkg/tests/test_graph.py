from __future__ import annotations

import json

import pytest

from harmony.graph import GRAPH_FORMATS, graph_export
from harmony.index import AnalysisConfig, assess_all_pairs, classify_pair
from harmony.counts import pair_rates

LOOSE = AnalysisConfig(min_shared_games=1)


def fixture_assessments(table):
    assessments, _ = assess_all_pairs(table, LOOSE)
    return assessments


def test_single_pair_graph_json_exact(fixture_a_table) -> None:
    ab = [a for a in fixture_assessments(fixture_a_table) if a.pair == ("a", "b")]
    out = graph_export(ab, LOOSE)
    assert out == (
        '{"nodes":['
        '{"id":"a","solo_rate":0.666667,"games":6},'
        '{"id":"b","solo_rate":0.666667,"games":6}'
        '],"edges":['
        '{"a":"a","b":"b","index":1.500000,"class":"harmony","shared_games":4}'
        "]}"
    )
    doc = json.loads(out)
    assert set(doc) == {"nodes", "edges"}
    assert set(doc["nodes"][0]) == {"id", "solo_rate", "games"}
    assert set(doc["edges"][0]) == {"a", "b", "index", "class", "shared_games"}


def test_graph_json_is_valid_sorted_and_complete(fixture_a_table, fixture_a_expected) -> None:
    assessments = fixture_assessments(fixture_a_table)
    doc = json.loads(graph_export(assessments, LOOSE))
    ids = [n["id"] for n in doc["nodes"]]
    assert ids == sorted(ids)
    edges = [(e["a"], e["b"]) for e in doc["edges"]]
    assert edges == sorted(edges)
    assert len(doc["edges"]) == len(assessments) == 35
    # node sample sizes recovered purely from incident assessments equal the
    # agents' true game totals
    for n in doc["nodes"]:
        assert n["games"] == fixture_a_expected["agent_games"][n["id"]]
        wins = fixture_a_expected["agent_wins"][n["id"]]
        assert n["solo_rate"] == round(wins / n["games"], 6)


def test_graph_rates_are_six_decimal_fixed_point(fixture_a_table) -> None:
    out = graph_export(fixture_assessments(fixture_a_table), LOOSE)
    doc = json.loads(out)
    for n in doc["nodes"]:
        assert f'"solo_rate":{n["solo_rate"]:.6f},' in out
    for e in doc["edges"]:
        assert f'"index":{e["index"]:.6f},' in out
    # counts stay plain integers, not fixed-point strings
    assert '"games":6' in out and '"shared_games":4' in out


def test_nodes_limited_to_assessed_agents(fixture_a_table) -> None:
    ab = [a for a in fixture_assessments(fixture_a_table) if a.pair == ("a", "b")]
    doc = json.loads(graph_export(ab, LOOSE))
    assert [n["id"] for n in doc["nodes"]] == ["a", "b"]


def test_empty_graph() -> None:
    assert graph_export([], LOOSE) == '{"nodes":[],"edges":[]}'
    assert graph_export([], LOOSE, format="dot") == "graph harmony {\n}\n"


def test_dot_output_shape(fixture_a_table) -> None:
    assessments = fixture_assessments(fixture_a_table)
    out = graph_export(assessments, LOOSE, format="dot")
    lines = out.splitlines()
    assert lines[0] == "graph harmony {"
    assert lines[-1] == "}"
    assert out.endswith("}\n")
    assert '  "a" [solo_rate=0.666667, games=6];' in lines
    assert (
        '  "a" -- "b" [weight=1.500000, label="H", class="harmony", shared_games=4];'
        in lines
    )


def test_dot_class_initials_disambiguated(fixture_a_table, synth90_table) -> None:
    # depress and discord collide on the initial; the class attribute splits them
    fixture_dot = graph_export(fixture_assessments(fixture_a_table), LOOSE, format="dot")
    assert 'label="D", class="discord"' in fixture_dot
    assert 'label="U", class="uplift"' in fixture_dot
    assert 'label="H", class="harmony"' in fixture_dot
    synth_dot = graph_export(
        assess_all_pairs(synth90_table, AnalysisConfig(min_shared_games=150))[0],
        LOOSE,
        format="dot",
    )
    assert 'label="D", class="depress"' in synth_dot
    assert 'label="D", class="discord"' in synth_dot


def test_dot_escapes_quotes() -> None:
    from harmony.counts import CountTable

    table = CountTable(
        agent_games={'we"ird': 40, "tame": 40},
        agent_wins={'we"ird': 20, "tame": 20},
        pair_games={("tame", 'we"ird'): 20},
        pair_wins={("tame", 'we"ird'): 15},
        total_sides=60,
    )
    a = classify_pair(pair_rates(table, 'we"ird', "tame"), LOOSE, enforce_min_shared=False)
    out = graph_export([a], LOOSE, format="dot")
    assert '"we\\"ird"' in out


def test_unknown_format_rejected(fixture_a_table) -> None:
    assert GRAPH_FORMATS == ("graph_json", "dot")
    with pytest.raises(ValueError):
        graph_export([], LOOSE, format="gexf")


def test_synth90_graph_cross_check(synth90_table) -> None:
    cfg = AnalysisConfig(min_shared_games=150)
    assessments, _ = assess_all_pairs(synth90_table, cfg)
    doc = json.loads(graph_export(assessments, cfg))
    assert len(doc["nodes"]) == 90
    assert len(doc["edges"]) == len(assessments)
    by_pair = {a.pair: a for a in assessments}
    for e in doc["edges"][:100]:
        a = by_pair[(e["a"], e["b"])]
        assert e["index"] == round(a.index, 6)
        assert e["class"] == a.harmony_class.value
        assert e["shared_games"] == a.probabilities.n_joint
    for n in doc["nodes"]:
        assert n["games"] == synth90_table.agent_games[n["id"]]
