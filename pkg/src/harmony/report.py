"""Distribution summaries over pair assessments, with delimited and figure output.

The integer content of a report (class counts, histogram, below-target count)
is deterministic across runs and platforms for the same assessments; the
quartile floats are deterministic on any one platform.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from typing import Sequence

from .index import FilterSummary, HarmonyClass, NEUTRAL_INDEX, PairAssessment

DEFAULT_BIN_WIDTH = 0.01

CLASS_COLORS: dict[HarmonyClass, str] = {
    HarmonyClass.HARMONY: "#2e8b57",
    HarmonyClass.UPLIFT: "#4682b4",
    HarmonyClass.DEPRESS: "#e8972e",
    HarmonyClass.DISCORD: "#c0392b",
}

CLASS_ORDER = (
    HarmonyClass.HARMONY,
    HarmonyClass.UPLIFT,
    HarmonyClass.DEPRESS,
    HarmonyClass.DISCORD,
)


@dataclass(frozen=True)
class DistributionReport:
    total: int
    class_counts: dict[HarmonyClass, int]
    below_target_count: int
    bin_width: float
    histogram: list[tuple[int, int]]
    quartiles: tuple[float, float, float] | None
    quartile_deviations: tuple[float, float, float] | None
    min_pair: tuple[tuple[str, str], float] | None
    max_pair: tuple[tuple[str, str], float] | None

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "class_counts": {c.value: self.class_counts[c] for c in CLASS_ORDER},
            "below_target_count": self.below_target_count,
            "bin_width": self.bin_width,
            "histogram": [
                {"bin": b, "start": b * self.bin_width, "count": n} for b, n in self.histogram
            ],
            "quartiles": list(self.quartiles) if self.quartiles else None,
            "quartile_deviations": (
                list(self.quartile_deviations) if self.quartile_deviations else None
            ),
            "min_pair": (
                {"pair": list(self.min_pair[0]), "index": self.min_pair[1]}
                if self.min_pair
                else None
            ),
            "max_pair": (
                {"pair": list(self.max_pair[0]), "index": self.max_pair[1]}
                if self.max_pair
                else None
            ),
        }


def _quartiles(values: list[float]) -> tuple[float, float, float]:
    if len(values) == 1:
        v = values[0]
        return (v, v, v)
    q = statistics.quantiles(values, n=4, method="inclusive")
    return (q[0], q[1], q[2])


def distribution_report(
    assessments: Sequence[PairAssessment], bin_width: float = DEFAULT_BIN_WIDTH
) -> DistributionReport:
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    counts = {c: 0 for c in HarmonyClass}
    below = 0
    bins: dict[int, int] = {}
    for a in assessments:
        counts[a.harmony_class] += 1
        if a.below_target:
            below += 1
        b = math.floor(a.index / bin_width)
        bins[b] = bins.get(b, 0) + 1
    if assessments:
        values = sorted(a.index for a in assessments)
        quartiles = _quartiles(values)
        deviations = tuple(q - NEUTRAL_INDEX for q in quartiles)
        lo = min(assessments, key=lambda a: (a.index, a.pair))
        hi = max(assessments, key=lambda a: (a.index, a.pair))
        min_pair = (lo.pair, lo.index)
        max_pair = (hi.pair, hi.index)
    else:
        quartiles = None
        deviations = None
        min_pair = None
        max_pair = None
    return DistributionReport(
        total=len(assessments),
        class_counts=counts,
        below_target_count=below,
        bin_width=bin_width,
        histogram=sorted(bins.items()),
        quartiles=quartiles,
        quartile_deviations=deviations,
        min_pair=min_pair,
        max_pair=max_pair,
    )


def write_pairs_csv(assessments: Sequence[PairAssessment], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "agent_a",
                "agent_b",
                "index",
                "class",
                "ratio_a",
                "ratio_b",
                "p_a",
                "p_b",
                "p_joint",
                "p_a_not_b",
                "p_b_not_a",
                "shared_games",
                "below_target",
            ]
        )
        for a in assessments:
            p = a.probabilities
            writer.writerow(
                [
                    a.pair[0],
                    a.pair[1],
                    f"{a.index:.6f}",
                    a.harmony_class.value,
                    f"{a.ratio_x:.6f}",
                    f"{a.ratio_y:.6f}",
                    f"{p.p_x:.6f}",
                    f"{p.p_y:.6f}",
                    f"{p.p_joint:.6f}",
                    f"{p.p_x_not_y:.6f}",
                    f"{p.p_y_not_x:.6f}",
                    p.n_joint,
                    int(a.below_target),
                ]
            )


def write_histogram_csv(report: DistributionReport, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_start", "bin_end", "count"])
        for b, n in report.histogram:
            writer.writerow([f"{b * report.bin_width:.6f}", f"{(b + 1) * report.bin_width:.6f}", n])


def write_summary_csv(
    report: DistributionReport, summary: FilterSummary | None, path: str
) -> None:
    rows: list[tuple[str, object]] = [("assessed_pairs", report.total)]
    for c in CLASS_ORDER:
        rows.append((f"class_{c.value}", report.class_counts[c]))
    rows.append(("below_target", report.below_target_count))
    if summary is not None:
        rows.append(("filtered_by_threshold", summary.filtered_by_threshold))
        rows.append(("filtered_undefined_baseline", summary.filtered_undefined_baseline))
    if report.quartiles:
        q = report.quartiles
        d = report.quartile_deviations
        rows += [
            ("index_q1", f"{q[0]:.6f}"),
            ("index_median", f"{q[1]:.6f}"),
            ("index_q3", f"{q[2]:.6f}"),
            ("index_q1_deviation", f"{d[0]:+.6f}"),
            ("index_median_deviation", f"{d[1]:+.6f}"),
            ("index_q3_deviation", f"{d[2]:+.6f}"),
        ]
    if report.min_pair:
        rows.append(("min_index_pair", f"{report.min_pair[0][0]}|{report.min_pair[0][1]}"))
        rows.append(("min_index", f"{report.min_pair[1]:.6f}"))
        rows.append(("max_index_pair", f"{report.max_pair[0][0]}|{report.max_pair[0][1]}"))
        rows.append(("max_index", f"{report.max_pair[1]:.6f}"))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        writer.writerows(rows)


def render_figures(
    assessments: Sequence[PairAssessment], report: DistributionReport, out_dir: str
) -> list[str]:
    """Render the three report figures as PNG files; returns the paths written.

    Imports matplotlib lazily so ingestion-only workflows never pay for it.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    import os

    written: list[str] = []

    fig, ax = plt.subplots(figsize=(8, 4.5))
    if report.histogram:
        starts = [b * report.bin_width for b, _ in report.histogram]
        heights = [n for _, n in report.histogram]
        ax.bar(starts, heights, width=report.bin_width, align="edge", color="#4682b4")
    ax.axvline(NEUTRAL_INDEX, color="#444444", linewidth=1, linestyle="--")
    ax.set_xlabel("Harmony Index")
    ax.set_ylabel("pairs")
    ax.set_title("Index distribution")
    path = os.path.join(out_dir, "index_histogram.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    labels = [c.value for c in CLASS_ORDER]
    heights = [report.class_counts[c] for c in CLASS_ORDER]
    colors = [CLASS_COLORS[c] for c in CLASS_ORDER]
    ax.bar(labels, heights, color=colors)
    ax.set_ylabel("pairs")
    ax.set_title("Harmonic classes")
    path = os.path.join(out_dir, "class_counts.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for c in CLASS_ORDER:
        xs = [a.probabilities.n_joint for a in assessments if a.harmony_class is c]
        ys = [a.index for a in assessments if a.harmony_class is c]
        if xs:
            ax.scatter(xs, ys, s=12, alpha=0.6, color=CLASS_COLORS[c], label=c.value)
    ax.axhline(NEUTRAL_INDEX, color="#444444", linewidth=1, linestyle="--")
    ax.set_xlabel("shared games")
    ax.set_ylabel("Harmony Index")
    ax.set_title("Index vs. sample size")
    if assessments:
        ax.legend(loc="best", fontsize=8)
    path = os.path.join(out_dir, "index_vs_games.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    return written
