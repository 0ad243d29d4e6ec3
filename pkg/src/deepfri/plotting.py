"""Figures for lab reports, rendered off-screen to PNG."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .lab import CURVE_LABELS, ExperimentReport  # noqa: E402

COLORS = ("seagreen", "blue", "red", "orange", "red")
STYLES = ("-", "-", "-", "--", "--")
# keep PNG bytes stable across runs
_META = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)
    return path


def plot_curves(rows, path) -> Path:
    rows = sorted(rows, key=lambda r: r["rho"])
    rho = [r["rho"] for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for label, color, style in zip(CURVE_LABELS, COLORS, STYLES):
        ax.plot(rho, [r[label] for r in rows], color=color, linestyle=style, label=label, marker=".")
    ax.set_xlabel("rate rho")
    ax.set_ylabel("soundness threshold delta_0")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.grid(True)
    ax.legend(fontsize=7, loc="upper right")
    return _save(fig, path)


def plot_profile(distances: dict, path, title: str = "") -> Path:
    """delta_x against x."""
    xs = sorted(distances)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar(xs, [float(distances[x]) for x in xs], width=1.0, color="steelblue")
    ax.set_xlabel("x")
    ax.set_ylabel("distance of u* + x u")
    ax.set_ylim(0, 1)
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_conditioning(report: ExperimentReport, path) -> Path:
    """Mean conditioned distance per x next to the unconditioned one."""
    per_x, base = {}, {}
    for row in report.rows:
        per_x.setdefault(row["x"], []).append(float(row["conditioned"]))
        base[row["x"]] = float(row["delta_x"])
    xs = sorted(per_x)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(xs, [base[x] for x in xs], ".", color="gray", label="unconditioned")
    ax.plot(xs, [sum(per_x[x]) / len(per_x[x]) for x in xs], ".", color="red", label="conditioned (mean over z)")
    ax.set_xlabel("x")
    ax.set_ylabel("distance")
    ax.set_ylim(0, 1)
    ax.set_title(report.name)
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_acceptance(report: ExperimentReport, path) -> Path:
    seeds = [r["seed"] for r in report.rows]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(seeds, [float(r["accept"]) for r in report.rows], ".", label="exact acceptance")
    if report.rows:
        ax.axhline(report.rows[0]["bound"], color="red", linestyle="--", label="bound")
    ax.set_xlabel("seed")
    ax.set_ylabel("acceptance probability")
    ax.set_ylim(0, 1.05)
    ax.set_title(report.name)
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_bad_counts(report: ExperimentReport, path) -> Path:
    counts = [r["bad_x"] for r in report.rows if r.get("applicable")]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if counts:
        ax.hist(counts, bins=range(0, max(counts) + 2), color="steelblue", align="left")
    bound = report.summary.get("bound")
    if bound is not None:
        ax.axvline(float(bound), color="red", linestyle="--", label="2/eps^2")
        ax.legend(fontsize=8)
    ax.set_xlabel("number of x with distance below delta")
    ax.set_ylabel("instances")
    return _save(fig, path)


def figure_for(report: ExperimentReport, path) -> Path | None:
    """Pick the figure matching a report, or None when there is none."""
    name = report.name
    if name.startswith(("deep-pretender", "gl-deep")):
        return plot_conditioning(report, path)
    if name.startswith("soundness-echo"):
        return plot_acceptance(report, path)
    if name.startswith("one-and-half"):
        return plot_bad_counts(report, path)
    if name.startswith(("tightness", "subspace-tightness", "wta")):
        dist = {r["x"]: r["value"] for r in report.rows if r.get("quantity") == "delta_x"}
        return plot_profile(dist, path, name) if dist else None
    return None
