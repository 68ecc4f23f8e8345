"""Graph exports of the assessed pair network.

Node sample sizes are recovered from the incident assessments: an agent's
total games equal n_joint + n_x_not_y of any assessment that includes it,
by the law of total counts, so no count table is needed here.
"""

from __future__ import annotations

import json
from typing import Sequence

from .index import AnalysisConfig, PairAssessment

GRAPH_FORMATS = ("graph_json", "dot")


def _collect_nodes(assessments: Sequence[PairAssessment]) -> dict[str, tuple[float, int]]:
    nodes: dict[str, tuple[float, int]] = {}
    for a in assessments:
        p = a.probabilities
        nodes.setdefault(p.x, (p.p_x, p.n_joint + p.n_x_not_y))
        nodes.setdefault(p.y, (p.p_y, p.n_joint + p.n_y_not_x))
    return nodes


def _graph_json(assessments: Sequence[PairAssessment]) -> str:
    # Serialized by hand: the schema pins real numbers to exactly 6 decimal
    # places, which json.dumps cannot guarantee.
    nodes = _collect_nodes(assessments)
    node_lines = [
        f'{{"id":{json.dumps(agent)},"solo_rate":{rate:.6f},"games":{games}}}'
        for agent, (rate, games) in sorted(nodes.items())
    ]
    edge_lines = []
    for a in sorted(assessments, key=lambda a: a.pair):
        x, y = a.pair
        edge_lines.append(
            f'{{"a":{json.dumps(x)},"b":{json.dumps(y)},"index":{a.index:.6f},'
            f'"class":{json.dumps(a.harmony_class.value)},'
            f'"shared_games":{a.probabilities.n_joint}}}'
        )
    return (
        '{"nodes":[' + ",".join(node_lines) + '],"edges":[' + ",".join(edge_lines) + "]}"
    )


def _dot_escape(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot(assessments: Sequence[PairAssessment]) -> str:
    nodes = _collect_nodes(assessments)
    lines = ["graph harmony {"]
    for agent, (rate, games) in sorted(nodes.items()):
        lines.append(f"  {_dot_escape(agent)} [solo_rate={rate:.6f}, games={games}];")
    for a in sorted(assessments, key=lambda a: a.pair):
        x, y = a.pair
        cls = a.harmony_class.value
        # label is the class initial; Depress and Discord share "D", so a
        # full class attribute disambiguates.
        lines.append(
            f"  {_dot_escape(x)} -- {_dot_escape(y)} "
            f'[weight={a.index:.6f}, label="{cls[0].upper()}", class="{cls}", '
            f"shared_games={a.probabilities.n_joint}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_export(
    assessments: Sequence[PairAssessment], cfg: AnalysisConfig, format: str = "graph_json"
) -> str:
    if format == "graph_json":
        return _graph_json(assessments)
    if format == "dot":
        return _dot(assessments)
    raise ValueError(f"unknown graph format {format!r}; expected one of {GRAPH_FORMATS}")
