"""Figure rendering for the report path.

Renders the charts behind the CSV outputs to image files: makespan bars
per policy combination, makespan ratios, per-core execution timelines and
bench scaling curves.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib import colormaps

from .metrics import MetricsReport, TraceEvent
from .model import to_s


def _combo_label(report: MetricsReport) -> str:
    bls, als, _ = report.combo
    return f"{bls.upper()}-{als.upper()}"


def plot_makespan_bars(reports: list[MetricsReport], path: str) -> None:
    """Grouped bar chart: makespan per BLS-ALS combination, one group per upsilon."""
    upsilons = sorted({r.combo[2] for r in reports})
    combos = sorted({_combo_label(r) for r in reports})
    by_key = {(_combo_label(r), r.combo[2]): r.makespan_s for r in reports}
    width = 0.8 / max(1, len(upsilons))
    fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(combos)), 4))
    for u_idx, upsilon in enumerate(upsilons):
        xs = [i + (u_idx - (len(upsilons) - 1) / 2) * width for i in range(len(combos))]
        ys = [by_key.get((c, upsilon), 0.0) for c in combos]
        ax.bar(xs, ys, width=width, label=f"Υ={upsilon:g}")
    ax.set_xticks(range(len(combos)))
    ax.set_xticklabels(combos, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("makespan [s]")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_ratio_bars(
    reports: list[MetricsReport], ratios: list[float | None], path: str
) -> None:
    """Bar chart of makespan ratio (varied tasks over identical-task baseline)."""
    rows = [(r, v) for r, v in zip(reports, ratios) if v is not None and r.combo[2] > 0]
    if not rows:
        return
    upsilons = sorted({r.combo[2] for r, _ in rows})
    combos = sorted({_combo_label(r) for r, _ in rows})
    by_key = {(_combo_label(r), r.combo[2]): v for r, v in rows}
    width = 0.8 / len(upsilons)
    fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(combos)), 4))
    for u_idx, upsilon in enumerate(upsilons):
        xs = [i + (u_idx - (len(upsilons) - 1) / 2) * width for i in range(len(combos))]
        ys = [by_key.get((c, upsilon), 0.0) for c in combos]
        ax.bar(xs, ys, width=width, label=f"Υ={upsilon:g}")
    ax.axhline(1.0, color="black", linewidth=0.8, linestyle="--")
    ax.set_xticks(range(len(combos)))
    ax.set_xticklabels(combos, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("makespan Υ / makespan b")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_timeline(events: list[TraceEvent], path: str, max_cores: int = 64) -> None:
    """Per-core execution timeline: one lane per core, bars colored by job."""
    if not events:
        return
    cores = sorted({e.core for e in events})[:max_cores]
    lane = {c: i for i, c in enumerate(cores)}
    cmap = colormaps["tab20"]
    fig, ax = plt.subplots(figsize=(10, max(3, 0.18 * len(cores))))
    for e in events:
        if e.core not in lane:
            continue
        ax.barh(
            lane[e.core],
            to_s(e.end_us - e.start_us),
            left=to_s(e.start_us),
            height=0.8,
            color=cmap(e.job_id % 20),
            edgecolor="none",
        )
    ax.set_yticks(range(len(cores)))
    ax.set_yticklabels([f"{h}.{c}" for h, c in cores], fontsize=6)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("core")
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_bench(rows: list[dict], path: str) -> None:
    """Wall-clock time vs job count with min/max whiskers, log-log axes."""
    ns = [row["jobs"] for row in rows]
    avg = [row["avg_s"] for row in rows]
    lo = [row["avg_s"] - row["min_s"] for row in rows]
    hi = [row["max_s"] - row["avg_s"] for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(ns, avg, yerr=[lo, hi], fmt="o-", capsize=3)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("number of jobs")
    ax.set_ylabel("simulation wall-clock time [s]")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
