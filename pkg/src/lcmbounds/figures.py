"""Render probe series and scan results as figures written next to the data."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .report import BoundReport, ProbeSeries

_STATUS_COLORS = {
    "HOLDS": "#2a7e43",
    "FAILS": "#c03030",
    "INCONCLUSIVE": "#d99114",
    "SKIPPED": "#9a9a9a",
}


def render_probe(series: ProbeSeries, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ns = [n for n, _ in series.points]
    rs = [r for _, r in series.points]
    ax.plot(ns, rs, "o-", color="#27539b", label="ratio")
    ax.axhline(series.target, color="#c03030", ls="--", lw=1.2,
               label=f"target {series.target:.6g}")
    if len(ns) > 1 and ns[-1] / max(ns[0], 1) >= 50:
        ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("ratio")
    title = series.probe_id
    if series.params:
        title += " (" + ", ".join(f"{k}={v}" for k, v in sorted(series.params.items())) + ")"
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_scan(reports: list[BoundReport], path: str, check_id: str) -> str:
    fig, ax = plt.subplots(figsize=(7.2, 4.2))
    xs = range(len(reports))
    margins = [r.verdict.margin if r.verdict.margin is not None else 0.0 for r in reports]
    colors = [_STATUS_COLORS.get(r.status.value, "black") for r in reports]
    ax.scatter(xs, margins, c=colors, s=12)
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("grid point (canonical order)")
    ax.set_ylabel("log-domain margin (rhs - lhs)")
    counts = {}
    for r in reports:
        counts[r.status.value] = counts.get(r.status.value, 0) + 1
    summary = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
    ax.set_title(f"{check_id}  [{summary}]")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
