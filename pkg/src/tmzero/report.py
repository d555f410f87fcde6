"""Evaluation report rendering: an aligned plain-text score table, a
comma-delimited copy, a JSON copy, and matplotlib figures saved next to
the delimited output."""

from __future__ import annotations

import csv
import json
import os
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .selfplay import ScoreReport, ScoreRow

TABLE_HEADER = ("Faction", "Average Score", "Sampled Games")


def format_row(faction: str, average_score: float, games: int) -> tuple[str, str, str]:
    """One table row: score to two decimals, games with thousands
    separators (e.g. 'Halfing', '32.11', '10,000')."""
    return (faction, f"{average_score:.2f}", f"{games:,}")


def render_table(report: ScoreReport) -> str:
    """Aligned plain-text score table (left-aligned faction column,
    right-aligned numeric columns)."""
    rows = [format_row(r.faction, r.average_score, r.games)
            for r in report.rows]
    widths = [max(len(cell) for cell in col)
              for col in zip(TABLE_HEADER, *rows)]
    lines = []

    def emit(cells):
        lines.append("  ".join(
            c.ljust(widths[0]) if i == 0 else c.rjust(widths[i])
            for i, c in enumerate(cells)).rstrip())

    emit(TABLE_HEADER)
    emit(tuple("-" * w for w in widths))
    for row in rows:
        emit(row)
    return "\n".join(lines) + "\n"


def report_to_dict(report: ScoreReport) -> dict:
    return {
        "label": report.label,
        "window": report.window,
        "rows": [
            {"faction": r.faction, "average_score": round(r.average_score, 6),
             "games": r.games, "wins": r.wins, "ties": r.ties,
             "losses": r.losses}
            for r in report.rows
        ],
    }


def write_csv(report: ScoreReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["faction", "average_score", "games", "wins",
                         "ties", "losses"])
        for r in report.rows:
            writer.writerow([r.faction, f"{r.average_score:.2f}", r.games,
                             r.wins, r.ties, r.losses])


def save_figures(report: ScoreReport, out_dir: str) -> list[str]:
    """Render the report as figures: average score per faction, and (when
    game records are attached) the score distributions."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    fig, ax = plt.subplots(figsize=(7, 4))
    names = [r.faction for r in report.rows]
    scores = [r.average_score for r in report.rows]
    ax.bar(names, scores, color="steelblue")
    ax.set_ylabel("Average score")
    ax.set_title(f"{report.label}: average score by faction")
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    path = os.path.join(out_dir, "average_scores.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    if report.records:
        per_seat = np.array([rec.scores for rec in report.records])
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.hist([per_seat[:, 0], per_seat[:, 1]], bins=20,
                label=["seat 0", "seat 1"])
        ax.set_xlabel("Final score")
        ax.set_ylabel("Games")
        ax.set_title(f"{report.label}: score distribution")
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, "score_distribution.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def write_report(report: ScoreReport, out_dir: str,
                 figures: bool = True) -> dict:
    """Write every rendering of the report under out_dir; returns the
    file paths keyed by kind."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    table = render_table(report)
    paths["table"] = os.path.join(out_dir, "report.txt")
    with open(paths["table"], "w") as fh:
        fh.write(table)
    paths["csv"] = os.path.join(out_dir, "report.csv")
    write_csv(report, paths["csv"])
    paths["json"] = os.path.join(out_dir, "report.json")
    with open(paths["json"], "w") as fh:
        json.dump(report_to_dict(report), fh, indent=2)
    if figures:
        paths["figures"] = save_figures(report, out_dir)
    return paths


def plot_training_metrics(metrics: list[dict], out_dir: str) -> str:
    """Loss-vs-step curve for a training run."""
    os.makedirs(out_dir, exist_ok=True)
    steps = [m["step"] for m in metrics]
    losses = [m["loss"] for m in metrics]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(steps, losses)
    ax.set_xlabel("Training step")
    ax.set_ylabel("Loss")
    ax.set_title("Training loss")
    fig.tight_layout()
    path = os.path.join(out_dir, "training_loss.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
