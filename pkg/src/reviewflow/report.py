"""File reports: delimited summaries with matplotlib figures beside them.

Rendering uses the Agg backend so report generation works headless.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .agreement import AgreementReport
from .decision import ConsensusItem, Verdict
from .trees import StatusCode

_STATUS_COLORS = {
    StatusCode.MET: "#4a7c59",
    StatusCode.JUSTIFIED_DEVIATION: "#7fb069",
    StatusCode.FIXABLE_MINOR: "#e6aa3a",
    StatusCode.FIXABLE_REVISION: "#d96c3a",
    StatusCode.FATAL: "#a4303f",
}


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def write_agreement_report(
    report: AgreementReport,
    out_dir: Path,
    threshold: float | None = None,
    stem: str = "agreement",
) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["measure", "value"])
        writer.writerow(["percent_agreement", _fmt(report.percent)])
        writer.writerow(["cohen_kappa", _fmt(report.kappa)])
        writer.writerow(["krippendorff_alpha", _fmt(report.alpha)])
        writer.writerow(["degenerate", "yes" if report.degenerate else "no"])
        if threshold is not None:
            writer.writerow(["threshold", _fmt(threshold)])
        writer.writerow(["recommendation", report.recommendation.value])

    labels, values = [], []
    for label, value in (
        ("percent", report.percent),
        ("kappa", report.kappa),
        ("alpha", report.alpha),
    ):
        if value is not None:
            labels.append(label)
            values.append(value)
    fig, ax = plt.subplots(figsize=(4.8, 3.2))
    ax.bar(labels, values, color="#4a6fa5", width=0.5)
    floor = min([0.0] + values)
    ax.set_ylim(min(floor, -0.05) - 0.05, 1.05)
    ax.axhline(0.0, color="#555555", linewidth=0.8)
    if threshold is not None:
        ax.axhline(threshold, color="#a4303f", linewidth=1.0, linestyle="--",
                   label=f"threshold {threshold:g}")
        ax.legend(loc="lower right", frameon=False)
    ax.set_ylabel("agreement")
    ax.set_title("Inter-rater agreement")
    fig.tight_layout()
    png_path = out_dir / f"{stem}.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]


def write_decision_report(
    verdict: Verdict,
    consensus: Sequence[ConsensusItem],
    out_dir: Path,
    stem: str = "decision",
) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["item_key", "status", "disputed", "note"])
        for item in consensus:
            writer.writerow([
                item.item_key,
                item.status.code.value,
                "yes" if item.disputed else "no",
                item.status.note,
            ])

    counts = {code: 0 for code in StatusCode}
    for item in consensus:
        counts[item.status.code] += 1
    disputed = sum(1 for item in consensus if item.disputed)
    fig, ax = plt.subplots(figsize=(5.6, 3.2))
    labels = [code.value for code in StatusCode]
    ax.bar(labels, [counts[code] for code in StatusCode],
           color=[_STATUS_COLORS[code] for code in StatusCode], width=0.6)
    ax.set_ylabel("essential items")
    title = f"Verdict: {verdict.outcome.value}"
    if verdict.nominated:
        title += " (nominated)"
    ax.set_title(title)
    ax.tick_params(axis="x", labelrotation=20)
    ax.text(0.99, 0.95, f"{disputed} disputed", transform=ax.transAxes,
            ha="right", va="top", fontsize=9, color="#555555")
    fig.tight_layout()
    png_path = out_dir / f"{stem}.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]
