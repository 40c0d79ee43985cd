"""Figures written next to the table and scan output."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .scan import ScanHit, TableRow  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_table(rows: list[TableRow], path) -> None:
    """log2 of sigma0 and 2^omega per n; rows where they differ are marked."""
    fig, ax = plt.subplots(figsize=(8, 4))
    done = [r for r in rows if r.sigma0 is not None]
    ns = [r.n for r in done]
    ax.plot(ns, [math.log2(r.sigma0) for r in done], "o", mfc="none", label=r"$\sigma_0(n!+1)$")
    ax.plot(ns, [math.log2(r.two_pow_omega) for r in done], "x", label=r"$2^{\omega(n!+1)}$")
    bad = [r for r in done if r.sigma0 != r.two_pow_omega]
    if bad:
        ax.plot([r.n for r in bad], [math.log2(r.sigma0) for r in bad], "s", ms=11, mfc="none", color="C3",
                label="not square-free")
    for r in rows:
        if r.sigma0 is None:
            ax.axvline(r.n, color="0.8", lw=4, zorder=0)
    for r in done:
        if r.discrepancy:
            ax.annotate("ref. differs", (r.n, math.log2(r.sigma0)), textcoords="offset points", xytext=(0, 10),
                        ha="center", fontsize=7)
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.margins(y=0.15)
    ax.set_xlabel("n")
    ax.set_ylabel("log2 of count")
    ax.legend(frameon=False, fontsize=8)
    _finish(fig, path)


def plot_hits(hits: list[ScanHit], path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [h.n for h in hits]
    ys = [h.p if h.p is not None else h.root for h in hits]
    colors = ["C0" if h.in_excluded_set else "C3" for h in hits]
    ax.scatter(xs, ys, c=colors)
    for x, y in zip(xs, ys):
        ax.annotate(f"({x}, {y})", (x, y), textcoords="offset points", xytext=(4, 4), fontsize=7)
    if ys and min(ys) > 0:
        ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("root m" if hits and hits[0].p is None else "p")
    if title:
        ax.set_title(title)
    _finish(fig, path)
