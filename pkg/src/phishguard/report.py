"""Rendering of corpus statistics and evaluation results: text tables for
the terminal, CSV for scripts, and matplotlib figures written to files."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .ingest import CorpusStats

MODEL_NAMES = {
    "naive_bayes": "Naive Bayes",
    "logistic_regression": "Logistic Regression",
}
CLASS_COLORS = {"legitimate": "#2e7d32", "phishing": "#c62828"}


def metrics_table(rows: Sequence[dict]) -> str:
    """Fixed-width comparison table, one row per model."""
    header = f"{'Model':<22}{'Accuracy':>10}{'Precision':>11}{'Recall':>9}{'F1-Score':>10}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{MODEL_NAMES.get(row['model'], row['model']):<22}"
            f"{row['accuracy'] * 100:>9.2f}%"
            f"{row['precision']:>11.4f}"
            f"{row['recall']:>9.4f}"
            f"{row['f1']:>10.4f}"
        )
    return "\n".join(lines)


def stats_table(stats: CorpusStats) -> str:
    header = f"{'Source':<16}{'Legitimate':>12}{'Phishing':>10}{'Total':>9}{'% Phishing':>12}"
    lines = [header, "-" * len(header)]

    def fmt(name: str, legit: int, phish: int) -> str:
        total = legit + phish
        pct = f"{100 * phish / total:.1f}%" if total else "-"
        return f"{name:<16}{legit:>12,}{phish:>10,}{total:>9,}{pct:>12}"

    for source, (legit, phish) in stats.per_source.items():
        lines.append(fmt(source, legit, phish))
    lines.append(fmt("total", stats.legitimate, stats.phishing))
    if stats.dropped_rows:
        lines.append(f"dropped rows: {stats.dropped_rows}")
    return "\n".join(lines)


def write_metrics_csv(rows: Sequence[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["model", "accuracy", "precision", "recall", "f1",
             "tp", "fp", "tn", "fn", "vocab_size", "sparsity", "train_seconds"]
        )
        for row in rows:
            cm = row["confusion"]
            writer.writerow([
                row["model"], row["accuracy"], row["precision"], row["recall"],
                row["f1"], cm["tp"], cm["fp"], cm["tn"], cm["fn"],
                row["vocab_size"], row["sparsity"], row["train_seconds"],
            ])


def write_stats_csv(stats: CorpusStats, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "legitimate", "phishing", "total"])
        for source, (legit, phish) in stats.per_source.items():
            writer.writerow([source, legit, phish, legit + phish])
        writer.writerow(["total", stats.legitimate, stats.phishing, stats.total])


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_class_distribution(stats: CorpusStats, path: str | Path) -> None:
    """Grouped bars of legitimate/phishing counts per source."""
    sources = list(stats.per_source) or ["(none)"]
    legit = [stats.per_source.get(s, (0, 0))[0] for s in sources]
    phish = [stats.per_source.get(s, (0, 0))[1] for s in sources]
    x = range(len(sources))
    width = 0.38
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    bars_l = ax.bar([i - width / 2 for i in x], legit, width,
                    label="Legitimate", color=CLASS_COLORS["legitimate"])
    bars_p = ax.bar([i + width / 2 for i in x], phish, width,
                    label="Phishing", color=CLASS_COLORS["phishing"])
    for bars in (bars_l, bars_p):
        ax.bar_label(bars, fmt="{:,.0f}", fontsize=8)
    ax.set_xticks(list(x), sources)
    ax.set_ylabel("Emails")
    ax.set_title("Class distribution by source")
    ax.legend()
    _save(fig, Path(path))


def plot_metric_comparison(rows: Sequence[dict], path: str | Path) -> None:
    """Grouped bars of the four headline metrics for each model."""
    names = ["accuracy", "precision", "recall", "f1"]
    x = range(len(names))
    width = 0.8 / max(len(rows), 1)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for j, row in enumerate(rows):
        offsets = [i + (j - (len(rows) - 1) / 2) * width for i in x]
        values = [row[n] for n in names]
        bars = ax.bar(offsets, values, width, label=MODEL_NAMES.get(row["model"], row["model"]))
        ax.bar_label(bars, fmt="%.4f", fontsize=7)
    ax.set_xticks(list(x), [n.capitalize() if n != "f1" else "F1" for n in names])
    ax.set_ylim(0, 1.1)
    ax.set_ylabel("Score")
    ax.set_title("Model performance comparison")
    ax.legend(loc="lower right")
    _save(fig, Path(path))


def plot_confusion_matrices(rows: Sequence[dict], path: str | Path) -> None:
    """Side-by-side heatmaps, phishing as the positive class."""
    fig, axes = plt.subplots(1, len(rows), figsize=(4.2 * len(rows), 3.8), squeeze=False)
    for ax, row in zip(axes[0], rows):
        cm = row["confusion"]
        grid = [[cm["tn"], cm["fp"]], [cm["fn"], cm["tp"]]]
        im = ax.imshow(grid, cmap="Blues")
        vmax = max(max(r) for r in grid) or 1
        for i in range(2):
            for j in range(2):
                color = "white" if grid[i][j] > vmax / 2 else "black"
                ax.text(j, i, f"{grid[i][j]:,}", ha="center", va="center", color=color)
        ax.set_xticks([0, 1], ["Safe", "Phishing"])
        ax.set_yticks([0, 1], ["Safe", "Phishing"])
        ax.set_xlabel("Predicted")
        ax.set_ylabel("Actual")
        ax.set_title(MODEL_NAMES.get(row["model"], row["model"]))
        fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    _save(fig, Path(path))


def plot_top_features(
    phishing: Sequence[tuple[str, float]],
    legitimate: Sequence[tuple[str, float]],
    path: str | Path,
) -> None:
    """Horizontal bars of the strongest coefficients per class."""
    entries = list(reversed(legitimate)) + list(reversed(phishing))
    if not entries:
        entries = [("(no signed coefficients)", 0.0)]
    terms = [t for t, _ in entries]
    coefs = [c for _, c in entries]
    colors = [
        CLASS_COLORS["phishing"] if c > 0 else CLASS_COLORS["legitimate"] for c in coefs
    ]
    fig, ax = plt.subplots(figsize=(6.4, 0.32 * len(entries) + 1.6))
    ax.barh(range(len(entries)), coefs, color=colors)
    ax.set_yticks(range(len(entries)), terms)
    ax.axvline(0, color="black", linewidth=0.8)
    ax.set_xlabel("Coefficient")
    ax.set_title("Strongest indicators (red phishing, green legitimate)")
    _save(fig, Path(path))


def render_experiment_figures(
    rows: Sequence[dict],
    top_features: tuple[Sequence[tuple[str, float]], Sequence[tuple[str, float]]],
    outdir: str | Path,
) -> list[Path]:
    """Write the evaluation figure set plus metrics.csv into outdir."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, render in (
        ("metrics.csv", lambda p: write_metrics_csv(rows, p)),
        ("metric_comparison.png", lambda p: plot_metric_comparison(rows, p)),
        ("confusion_matrices.png", lambda p: plot_confusion_matrices(rows, p)),
        ("top_features.png", lambda p: plot_top_features(*top_features, p)),
    ):
        target = outdir / name
        render(target)
        written.append(target)
    return written
