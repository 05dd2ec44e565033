"""Static SVG plots (deterministic: no timestamps, fixed hash salt)."""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .extend import CoverageReport  # noqa: E402
from .intervals import Interval  # noqa: E402
from .reach import ReachSet  # noqa: E402

plt.rcParams["svg.hashsalt"] = "qextend"
plt.rcParams["svg.fonttype"] = "path"

RUG_BINS = 2000


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return path


def _one_per_bin(xs: list[float], bins: int = RUG_BINS) -> list[float]:
    """Keep one point per log-scale bin; more lines than pixels add nothing."""
    if len(xs) <= bins:
        return xs
    lo, hi = math.log(xs[0]), math.log(xs[-1])
    width = (hi - lo) / bins or 1.0
    kept, last = [], None
    for x in xs:
        b = int((math.log(x) - lo) / width)
        if b != last:
            kept.append(x)
            last = b
    return kept


def reach_rug(R: ReachSet, path: Path, title: str = "") -> Path:
    """Rug plot of the reach set on a log axis, corridor endpoints dashed."""
    fig, ax = plt.subplots(figsize=(8, 1.8))
    xs = _one_per_bin([float(p) for p in R.points])
    ax.vlines(xs, 0, 1, linewidth=0.6, color="#1f4e79")
    for e in (R.corridor.gamma_minus, R.corridor.gamma_plus):
        ax.axvline(float(e), color="#b22222", linestyle="--", linewidth=1)
    ax.set_xscale("log")
    ax.set_yticks([])
    ax.set_xlabel("value (log scale)")
    ax.set_title(title or f"{len(R.points)} points, depth {R.depth}" + (", saturated" if R.saturated else ""))
    fig.tight_layout()
    return _save(fig, path)


def coverage_strip(report: CoverageReport, I: Interval, path: Path, title: str = "") -> Path:
    """Covered pieces as filled bars over a log-scaled axis."""
    fig, ax = plt.subplots(figsize=(8, 1.6))
    lo, hi = math.log(I.lo), math.log(I.hi)
    ax.broken_barh([(lo, hi - lo)], (0, 1), facecolors="#eeeeee", edgecolor="#888888")
    bars = [(math.log(p.lo), max(math.log(p.hi) - math.log(p.lo), 1e-4)) for p in report.covered]
    ax.broken_barh(bars, (0, 1), facecolors="#2e7d32")
    ax.set_xlim(lo - 0.02 * (hi - lo), hi + 0.02 * (hi - lo))
    ticks = [lo, hi] + [math.log(p.lo) for p in report.covered][:12]
    ax.set_xticks(sorted(set(ticks)))
    ax.set_xticklabels([f"{math.exp(t):.4g}" for t in sorted(set(ticks))], fontsize=7, rotation=45)
    ax.set_yticks([])
    ax.set_title(
        title
        or f"covered after {report.rounds_used} rounds; uncovered log-length {report.uncovered_log_length:.4g}"
    )
    fig.tight_layout()
    return _save(fig, path)


def bump_curve(
    phi, I: Interval, supports: Sequence, path: Path, samples: int = 4001, title: str = "", links: Sequence = ()
) -> Path:
    """Graph of a bump solution over I; ``links`` are pairs of copies joined by a dashed arc."""
    fig, ax = plt.subplots(figsize=(8, 3))
    step = (I.hi - I.lo) / (samples - 1)
    xs = [I.lo + step * k for k in range(samples)]
    pts = sorted(set(xs) | {a for a, _ in supports} | {b for _, b in supports})
    ax.plot([float(x) for x in pts], [float(phi(x)) for x in pts], color="#1f4e79", linewidth=1.2)
    ax.axhline(0, color="#888888", linewidth=0.5)
    for (a1, b1), (a2, b2) in links:
        m1, m2 = sorted((float(a1 + b1) / 2, float(a2 + b2) / 2))
        ax.annotate(
            "", xy=(m2, 1.05), xytext=(m1, 1.05),
            arrowprops=dict(arrowstyle="-", linestyle="--", color="#555555", connectionstyle="arc3,rad=-0.25"),
        )
    ax.set_ylim(-0.05, 1.6)
    ax.set_xlim(float(I.lo), float(I.hi))
    ax.set_xlabel("x")
    ax.set_ylabel("phi(x)")
    ax.set_title(title or "bump solution: " + ", ".join(f"({_f(a)}, {_f(b)})" for a, b in supports))
    fig.tight_layout()
    return _save(fig, path)


def _f(x) -> str:
    return str(x) if isinstance(x, Fraction) else f"{x:.6g}"
