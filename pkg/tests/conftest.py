from __future__ import annotations

import json
import os

import pytest

from harmony.counts import CountTable, accumulate_counts
from harmony.records import ParseError, parse_match_log
from harmony.synth import SynthConfig, generate_dataset

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")

FIXTURE_A = os.path.join(DATA_DIR, "fixture_a.jsonl")
FIXTURE_A_EXPECTED = os.path.join(DATA_DIR, "fixture_a_expected.json")
SYNTH90_CONFIG = os.path.join(CONFIG_DIR, "synth90.json")


def load_fixture_a_records():
    with open(FIXTURE_A, "rb") as fh:
        items = list(parse_match_log(fh, "jsonl"))
    assert not any(isinstance(i, ParseError) for i in items)
    return items


@pytest.fixture(scope="session")
def fixture_a_records():
    return load_fixture_a_records()


@pytest.fixture(scope="session")
def fixture_a_table(fixture_a_records) -> CountTable:
    return accumulate_counts(fixture_a_records)


@pytest.fixture(scope="session")
def fixture_a_expected() -> dict:
    with open(FIXTURE_A_EXPECTED, encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def synth90_config() -> SynthConfig:
    return SynthConfig.from_json_file(SYNTH90_CONFIG)


@pytest.fixture(scope="session")
def synth90_table(synth90_config) -> CountTable:
    return accumulate_counts(generate_dataset(synth90_config))


# 12 agents, pair-sized teams, three planted effects; the shared basis for
# composer and draft tests. 150k matches give every pair ~4.5k shared games,
# comfortably over the default threshold.
COMPOSER_CONFIG = {
    "num_agents": 12,
    "team_size": 2,
    "num_matches": 150_000,
    "seed": 7177,
    "synergies": [
        ["h001", "h002", 0.8],
        ["h001", "h003", 0.8],
        ["h002", "h003", 0.8],
        ["h007", "h008", -0.6],
    ],
}


@pytest.fixture(scope="session")
def composer_config() -> SynthConfig:
    return SynthConfig.from_dict(COMPOSER_CONFIG)


@pytest.fixture(scope="session")
def composer_table(composer_config) -> CountTable:
    return accumulate_counts(generate_dataset(composer_config))


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "primary(criterion): top-level acceptance criterion this test certifies"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call":
        return
    marker = item.get_closest_marker("primary")
    if marker is None:
        return
    criterion = marker.kwargs.get("criterion") or marker.args[0]
    status = "PASS" if rep.passed else "FAIL"
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line(f"[PRIMARY] {criterion}: {status}")
