"""Figure rendering and JSON artifact writing for the CLI report paths."""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from udl.evalir import EvalResult
from udl.lexical import EntropyReport
from udl.quality import QualityReport


def write_json(obj: dict, path: str | Path) -> None:
    """Indented UTF-8 JSON with a trailing newline; key order is preserved."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def entropy_figure(report: EntropyReport, path: str | Path, gamma: float | None = None) -> None:
    """Histogram of per-term entropies with the 1-bit split line."""
    values = np.fromiter(report.per_term_entropy.values(), dtype=np.float64)
    fig, ax = plt.subplots(figsize=(7, 4))
    if values.size:
        ax.hist(values, bins=min(60, max(10, values.size // 20)), color="#4878a8")
    ax.axvline(1.0, color="#b2432f", linestyle="--", label="1 bit split")
    title = f"term entropy (d_m = {report.d_m:.3f}"
    if gamma is not None:
        title += f", gamma = {gamma}"
    ax.set_title(title + ")")
    ax.set_xlabel("entropy (bits)")
    ax.set_ylabel("terms")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def link_score_figure(scores: list[float], threshold: float, path: str | Path) -> None:
    """Nearest-neighbor score distribution against the decided threshold."""
    fig, ax = plt.subplots(figsize=(7, 4))
    if scores:
        ax.hist(scores, bins=40, range=(0.0, 1.0), color="#4878a8")
    ax.axvline(threshold, color="#b2432f", linestyle="--", label=f"threshold {threshold}")
    ax.set_xlabel("nearest-neighbor cosine")
    ax.set_ylabel("documents")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def quality_figure(report: QualityReport, path: str | Path) -> None:
    """Bar chart of verdict counts."""
    counts = report.verdict_counts()
    labels = list(counts)
    values = [counts[k] for k in labels]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar(range(len(labels)), values, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel("queries")
    ax.set_title(
        f"both-mapped {report.fraction_both:.2%}, single-mapped {report.fraction_single_mapped:.2%}"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def metrics_figure(result: EvalResult, path: str | Path) -> None:
    """Grouped bars of NDCG and Recall per cutoff."""
    ks = result.ks
    x = np.arange(len(ks), dtype=np.float64)
    width = 0.38
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(x - width / 2, [result.ndcg[k] for k in ks], width, label="NDCG", color="#4878a8")
    ax.bar(x + width / 2, [result.recall[k] for k in ks], width, label="Recall", color="#6aa66a")
    ax.set_xticks(x)
    ax.set_xticklabels([f"@{k}" for k in ks])
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("score")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
