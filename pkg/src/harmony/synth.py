"""Synthetic match generation with a known ground truth, plus an exact oracle.

The generative model: each match draws two disjoint rosters uniformly at
random from the agent pool, scores each side as the sum of its members'
base strengths plus the sum of within-side pair synergies, and lets side 1
win with probability logistic(score1 - score2). There is no matchmaking and
no ordering effect, so the enumeration oracle below can integrate the model
exactly.

Reproducibility contract (documented, versioned):

* Generator: numpy PCG64. Matches are produced in fixed blocks of
  ``BLOCK_MATCHES``; block ``b`` (covering match indices
  ``[b*BLOCK_MATCHES, (b+1)*BLOCK_MATCHES)``) uses
  ``np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed,
  spawn_key=(b,))))``. This is also the shard-derivation rule: generating any
  block in isolation yields exactly the records of the full run.
* Draw order within a block: first a ``(BLOCK_MATCHES, num_agents)`` array
  of roster keys via ``Generator.random``, then a length-``BLOCK_MATCHES``
  array of outcome uniforms — always full-sized, even when the final block is
  only partially used, so growing ``num_matches`` never rewrites earlier
  matches. Each match ranks agents by its key row (stable argsort); the
  first team_size agents form side 1, the next team_size side 2 (a uniform
  choice of disjoint rosters). Side 1 wins iff its uniform is strictly less
  than the logistic win probability.

Floating point caveat: the logistic uses ``exp``, which may differ by an ulp
across libm builds; an outcome flips only if the uniform lands inside that
ulp, so streams are stable in practice but the guarantee is per-platform.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .counts import PairProbabilities, pair_key
from .records import AgentId, MatchRecord

BLOCK_MATCHES = 65536

ORACLE_CONFIG_LIMIT = 10_000_000


def agent_name(i: int) -> str:
    """Auto-generated agent ids h001, h002, ... (1-based, lexicographic = numeric)."""
    return f"h{i + 1:03d}"


@dataclass(frozen=True)
class SynthConfig:
    agents: tuple[AgentId, ...]
    team_size: int
    num_matches: int
    base_strengths: dict[AgentId, float] = field(default_factory=dict)
    synergies: dict[tuple[AgentId, AgentId], float] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if len(set(self.agents)) != len(self.agents):
            raise ValueError("duplicate agent ids in synth config")
        if self.team_size < 1:
            raise ValueError("team_size must be >= 1")
        if len(self.agents) < 2 * self.team_size:
            raise ValueError(
                f"need at least {2 * self.team_size} agents for team_size "
                f"{self.team_size}, got {len(self.agents)}"
            )
        if self.num_matches < 0:
            raise ValueError("num_matches must be >= 0")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")
        known = set(self.agents)
        for a in self.base_strengths:
            if a not in known:
                raise ValueError(f"base strength for unknown agent {a!r}")
        for (a, b) in self.synergies:
            if a == b:
                raise ValueError(f"synergy pair of identical agents {a!r}")
            if a not in known or b not in known:
                raise ValueError(f"synergy for unknown pair ({a!r}, {b!r})")

    @classmethod
    def from_dict(cls, obj: dict) -> "SynthConfig":
        if "agents" in obj:
            agents = tuple(obj["agents"])
        else:
            agents = tuple(agent_name(i) for i in range(int(obj["num_agents"])))
        synergies: dict[tuple[AgentId, AgentId], float] = {}
        for entry in obj.get("synergies", []):
            a, b, value = entry
            synergies[pair_key(a, b)] = float(value)
        return cls(
            agents=agents,
            team_size=int(obj.get("team_size", 5)),
            num_matches=int(obj["num_matches"]),
            base_strengths={k: float(v) for k, v in obj.get("base_strengths", {}).items()},
            synergies=synergies,
            seed=int(obj.get("seed", 0)),
        )

    @classmethod
    def from_json_file(cls, path: str) -> "SynthConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(block,))))


def _synergy_matrix(cfg: SynthConfig) -> np.ndarray | None:
    if not cfg.synergies:
        return None
    n = len(cfg.agents)
    idx = {a: i for i, a in enumerate(cfg.agents)}
    mat = np.zeros((n, n))
    for (a, b), value in cfg.synergies.items():
        mat[idx[a], idx[b]] = value
        mat[idx[b], idx[a]] = value
    return mat


def generate_block(cfg: SynthConfig, block: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Roster indices and outcomes for one block.

    Returns (side1, side2, side1_won): integer index arrays of shape
    (B, team_size) and a boolean array of length B.
    """
    start = block * BLOCK_MATCHES
    count = min(BLOCK_MATCHES, cfg.num_matches - start)
    if count <= 0:
        raise ValueError(f"block {block} is out of range for {cfg.num_matches} matches")
    n = len(cfg.agents)
    k = cfg.team_size
    rng = _block_rng(cfg.seed, block)
    # Full-block draws even for a partial final block: the stream position of
    # the outcome uniforms must not depend on num_matches.
    keys = rng.random((BLOCK_MATCHES, n))[:count]
    outcome_u = rng.random(BLOCK_MATCHES)[:count]
    order = np.argsort(keys, axis=1, kind="stable")
    side1 = order[:, :k]
    side2 = order[:, k : 2 * k]

    strengths = np.array([cfg.base_strengths.get(a, 0.0) for a in cfg.agents])
    if strengths.any():
        score1 = strengths[side1].sum(axis=1)
        score2 = strengths[side2].sum(axis=1)
    else:
        score1 = np.zeros(count)
        score2 = np.zeros(count)
    synergy = _synergy_matrix(cfg)
    if synergy is not None:
        for i in range(k):
            for j in range(i + 1, k):
                score1 = score1 + synergy[side1[:, i], side1[:, j]]
                score2 = score2 + synergy[side2[:, i], side2[:, j]]
    diff = score1 - score2
    p1 = 1.0 / (1.0 + np.exp(-diff))
    side1_won = outcome_u < p1
    return side1, side2, side1_won


def generate_dataset(cfg: SynthConfig) -> Iterator[MatchRecord]:
    """Yield num_matches MatchRecords, deterministically for a given config."""
    names = cfg.agents
    num_blocks = (cfg.num_matches + BLOCK_MATCHES - 1) // BLOCK_MATCHES
    match_index = 0
    for block in range(num_blocks):
        side1, side2, side1_won = generate_block(cfg, block)
        for row in range(side1.shape[0]):
            roster1 = frozenset(names[i] for i in side1[row])
            roster2 = frozenset(names[i] for i in side2[row])
            if side1_won[row]:
                winners, losers = roster1, roster2
            else:
                winners, losers = roster2, roster1
            yield MatchRecord(match_id=f"m{match_index:08d}", winners=winners, losers=losers)
            match_index += 1


def oracle_pair_probabilities(cfg: SynthConfig, x: AgentId, y: AgentId) -> PairProbabilities:
    """Exact conditional win rates for (x, y) under the generative model.

    Enumerates every equally likely (roster1, roster2) configuration and
    averages the logistic win probability over each conditioning event. The
    n_* fields carry the expected observation counts for cfg.num_matches,
    rounded to integers.
    """
    if x == y or x not in cfg.agents or y not in cfg.agents:
        raise ValueError(f"oracle needs two distinct known agents, got {x!r}, {y!r}")
    n = len(cfg.agents)
    k = cfg.team_size
    n_configs = math.comb(n, k) * math.comb(n - k, k)
    if n_configs > ORACLE_CONFIG_LIMIT:
        raise ValueError(
            f"{n_configs} roster configurations exceed the enumeration limit {ORACLE_CONFIG_LIMIT}"
        )

    idx = {a: i for i, a in enumerate(cfg.agents)}
    strengths = [cfg.base_strengths.get(a, 0.0) for a in cfg.agents]
    synergy: dict[tuple[int, int], float] = {}
    for (a, b), value in cfg.synergies.items():
        i, j = idx[a], idx[b]
        synergy[(min(i, j), max(i, j))] = value

    def side_score(side: tuple[int, ...]) -> float:
        total = sum(strengths[i] for i in side)
        for ii in range(len(side)):
            for jj in range(ii + 1, len(side)):
                a, b = side[ii], side[jj]
                total += synergy.get((min(a, b), max(a, b)), 0.0)
        return total

    all_sides = list(itertools.combinations(range(n), k))
    scores = {side: side_score(side) for side in all_sides}
    xi, yi = idx[x], idx[y]

    # accumulators: [weight, probability mass] per conditioning event
    acc = {name: [0.0, 0.0] for name in ("x", "y", "joint", "x_not_y", "y_not_x")}

    def observe(side: tuple[int, ...], win_prob: float) -> None:
        has_x = xi in side
        has_y = yi in side
        if has_x:
            acc["x"][0] += 1.0
            acc["x"][1] += win_prob
        if has_y:
            acc["y"][0] += 1.0
            acc["y"][1] += win_prob
        if has_x and has_y:
            acc["joint"][0] += 1.0
            acc["joint"][1] += win_prob
        elif has_x:
            acc["x_not_y"][0] += 1.0
            acc["x_not_y"][1] += win_prob
        elif has_y:
            acc["y_not_x"][0] += 1.0
            acc["y_not_x"][1] += win_prob

    for side1 in all_sides:
        rest = [i for i in range(n) if i not in side1]
        for side2 in itertools.combinations(rest, k):
            p1 = _logistic(scores[side1] - scores[side2])
            observe(side1, p1)
            observe(side2, 1.0 - p1)

    def rate(name: str) -> float:
        weight, mass = acc[name]
        if weight == 0.0:
            raise ValueError(f"conditioning event {name} has zero probability")
        return mass / weight

    matches_per_config = cfg.num_matches / n_configs
    return PairProbabilities(
        x=x,
        y=y,
        p_x=rate("x"),
        p_y=rate("y"),
        p_joint=rate("joint"),
        p_x_not_y=rate("x_not_y"),
        p_y_not_x=rate("y_not_x"),
        n_joint=round(acc["joint"][0] * matches_per_config),
        n_x_not_y=round(acc["x_not_y"][0] * matches_per_config),
        n_y_not_x=round(acc["y_not_x"][0] * matches_per_config),
    )
