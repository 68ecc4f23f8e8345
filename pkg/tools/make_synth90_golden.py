#!/usr/bin/env python3
"""Generate the frozen SYNTH-90 report golden (run once, commit the output).

The golden freezes only discrete, platform-independent content: class counts,
histogram bin counts, below-target tally, filter tallies, and the arg-extreme
pair ids — never floating-point aggregates. Regenerate only if the dataset
contract (generator scheme or config) deliberately changes, and say so in the
change that does it.
"""
from __future__ import annotations

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from harmony.counts import accumulate_counts  # noqa: E402
from harmony.index import AnalysisConfig, assess_all_pairs  # noqa: E402
from harmony.report import distribution_report  # noqa: E402
from harmony.synth import SynthConfig, generate_dataset  # noqa: E402

ROOT = os.path.join(os.path.dirname(__file__), "..")
CONFIG = os.path.join(ROOT, "configs", "synth90.json")
OUT = os.path.join(ROOT, "tests", "data", "synth90_report_golden.json")
MIN_SHARED = 150

PLANTED = [("h001", "h002"), ("h003", "h004"), ("h005", "h006")]


def main() -> None:
    cfg = SynthConfig.from_json_file(CONFIG)
    table = accumulate_counts(generate_dataset(cfg))
    acfg = AnalysisConfig(min_shared_games=MIN_SHARED)
    assessments, summary = assess_all_pairs(table, acfg)
    report = distribution_report(assessments)
    by_pair = {a.pair: a for a in assessments}

    planted = {}
    for pair in PLANTED:
        a = by_pair.get(pair)
        planted["|".join(pair)] = (
            {
                "class": a.harmony_class.value,
                "shared_games": a.probabilities.n_joint,
                "below_target": a.below_target,
            }
            if a
            else None
        )

    golden = {
        "config": "configs/synth90.json",
        "min_shared_games": MIN_SHARED,
        "num_agents": len(table.agent_games),
        "num_pairs_counted": len(table.pair_games),
        "total_sides": table.total_sides,
        "assessed": summary.assessed,
        "filtered_by_threshold": summary.filtered_by_threshold,
        "filtered_undefined_baseline": summary.filtered_undefined_baseline,
        "class_counts": {c.value: n for c, n in report.class_counts.items()},
        "below_target_count": report.below_target_count,
        "histogram": [[b, n] for b, n in report.histogram],
        "min_pair": list(report.min_pair[0]),
        "max_pair": list(report.max_pair[0]),
        "planted_pairs": planted,
    }
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump(golden, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {OUT}")
    print(
        json.dumps(
            {k: golden[k] for k in ("assessed", "class_counts", "below_target_count", "planted_pairs")},
            indent=1,
        )
    )


if __name__ == "__main__":
    main()
