"""Independent oracle for the six-match hand fixture.

Recomputes every count and rate from the raw JSONL with plain dict
arithmetic (no imports from the package under test) and freezes the result
into tests/data/fixture_a_expected.json. Run from the repo root:

    python3 tools/oracle_fixture_a.py

The hand-derived numbers this must reproduce (counted on paper first):
agent wins a4 b4 c3 d4 e1 f4 g2 h1 i4 j3 over 6 games each; pair {a,b}
4 games 3 wins; {a,c} 3/2; {e,h} 4/0; {c,j} 4/2; {g,j} 3/1.
"""

import json
import math
import os
import statistics

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE = os.path.join(HERE, "..", "tests", "data", "fixture_a.jsonl")
OUT = os.path.join(HERE, "..", "tests", "data", "fixture_a_expected.json")


def main() -> None:
    agent_games: dict[str, int] = {}
    agent_wins: dict[str, int] = {}
    pair_games: dict[str, int] = {}
    pair_wins: dict[str, int] = {}
    matches = 0

    with open(FIXTURE, encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            matches += 1
            for side, outcome in ((rec["winners"], 1), (rec["losers"], 0)):
                members = sorted(side)
                for m in members:
                    agent_games[m] = agent_games.get(m, 0) + 1
                    agent_wins[m] = agent_wins.get(m, 0) + outcome
                for i, x in enumerate(members):
                    for y in members[i + 1 :]:
                        key = f"{x}|{y}"
                        pair_games[key] = pair_games.get(key, 0) + 1
                        pair_wins[key] = pair_wins.get(key, 0) + outcome

    # Rates, index, and class for every pair, mirroring the documented rules:
    # ratio > 1 is a win for that side, ties lose; mixed signs split on index.
    pair_details = {}
    classes = {"harmony": 0, "uplift": 0, "depress": 0, "discord": 0}
    undefined = 0
    indices = []
    for key in sorted(pair_games):
        x, y = key.split("|")
        pg, pw = pair_games[key], pair_wins[key]
        gx, wx = agent_games[x], agent_wins[x]
        gy, wy = agent_games[y], agent_wins[y]
        detail = {
            "pair_games": pg,
            "pair_wins": pw,
            "x_without_y": [wx - pw, gx - pg],
            "y_without_x": [wy - pw, gy - pg],
        }
        if gx - pg == 0 or gy - pg == 0 or (wx - pw) == 0 or (wy - pw) == 0:
            # zero baseline rate or no solo games: index undefined
            detail["undefined"] = True
            undefined += 1
            pair_details[key] = detail
            continue
        p_joint = pw / pg
        bx = (wx - pw) / (gx - pg)
        by = (wy - pw) / (gy - pg)
        rx = p_joint / bx
        ry = p_joint / by
        index = math.sqrt(rx * ry)
        if rx > 1 and ry > 1:
            cls = "harmony"
        elif rx <= 1 and ry <= 1:
            cls = "discord"
        elif index > 1:
            cls = "uplift"
        else:
            cls = "depress"
        detail.update(
            {
                "p_x": [wx, gx],
                "p_y": [wy, gy],
                "p_joint": p_joint,
                "p_x_not_y": bx,
                "p_y_not_x": by,
                "ratio_x": rx,
                "ratio_y": ry,
                "index": index,
                "class": cls,
                "below_target": cls == "harmony" and p_joint <= 0.5,
            }
        )
        classes[cls] += 1
        indices.append((index, (x, y)))
        pair_details[key] = detail

    indices.sort()
    values = [v for v, _ in indices]
    quart = statistics.quantiles(values, n=4, method="inclusive")
    histogram: dict[int, int] = {}
    for v in values:
        b = math.floor(v / 0.01)
        histogram[b] = histogram.get(b, 0) + 1
    lo = min(indices, key=lambda t: (t[0], t[1]))
    hi = max(indices, key=lambda t: (t[0], t[1]))

    out = {
        "matches": matches,
        "total_sides": matches * 2,
        "agent_games": dict(sorted(agent_games.items())),
        "agent_wins": dict(sorted(agent_wins.items())),
        "pairs": pair_details,
        "assessed": len(values),
        "class_counts": classes,
        "filtered_undefined_baseline": undefined,
        "quartiles": quart,
        "histogram": {str(k): v for k, v in sorted(histogram.items())},
        "min_pair": {"pair": list(lo[1]), "index": lo[0]},
        "max_pair": {"pair": list(hi[1]), "index": hi[0]},
    }
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {OUT}: {matches} matches, {len(pair_details)} pairs, {len(values)} assessed")


if __name__ == "__main__":
    main()
