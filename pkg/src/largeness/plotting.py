"""Figure rendering for report outputs.

All figures are rendered through the Agg backend with a frozen style so that
identical inputs produce byte-identical PNG files; ``save_figure`` strips the
library-version metadata chunk for the same reason.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "lines.markersize": 4.0,
}


def _new_axes():
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
    return fig, ax


def save_figure(fig, path: str) -> str:
    """Write ``fig`` to ``path`` atomically and deterministically."""
    tmp = f"{path}.tmp-{os.getpid()}"
    # metadata carries the renderer version by default; drop it for
    # byte-stable reruns.
    fig.savefig(tmp, format="png", metadata={"Software": None})
    plt.close(fig)
    os.replace(tmp, path)
    return path


def profile_figure(profile):
    """Log-log covering/packing counts against 1/epsilon."""
    fig, ax = _new_axes()
    eps = np.array([e.epsilon for e in profile.entries], dtype=float)
    counts = np.array([e.packing_lower for e in profile.entries], dtype=float)
    ax.loglog(1.0 / eps, counts, marker="o", color="tab:blue")
    ax.set_xlabel("1/epsilon")
    ax.set_ylabel("greedy count")
    ax.set_title(f"covering profile: {profile.space_label}")
    return fig


def crit_figure(estimate):
    """Per-scale exponents with the fitted extrapolation line."""
    fig, ax = _new_axes()
    eps = np.array([row[0] for row in estimate.per_eps], dtype=float)
    s = np.array([row[1] for row in estimate.per_eps], dtype=float)
    u = 1.0 / np.log(1.0 / eps)
    ax.plot(u, s, "o", color="tab:blue", label="s(eps)")
    grid = np.linspace(0.0, float(u.max()) * 1.05 if u.size else 1.0, 64)
    ax.plot(
        grid,
        estimate.point_estimate + estimate.slope * grid,
        "-",
        color="tab:orange",
        label=f"fit, intercept {estimate.point_estimate:.4f}",
    )
    ax.set_xlabel("1 / log(1/eps)")
    ax.set_ylabel("s(eps)")
    ax.set_title(f"critical-parameter fit: family {estimate.family}")
    ax.legend()
    return fig


def plan_figure(plan):
    """Transport plan as a mass-weighted source/target scatter."""
    fig, ax = _new_axes()
    if plan.mass.size:
        sizes = 60.0 * plan.mass / plan.mass.max()
        ax.scatter(plan.src, plan.dst, s=np.maximum(sizes, 2.0), color="tab:blue")
    ax.set_xlabel("source index")
    ax.set_ylabel("target index")
    ax.set_title(f"transport plan ({plan.src.size} edges)")
    return fig


def dynamics_figure(profile):
    """Log separated counts against n, one line per epsilon."""
    fig, ax = _new_axes()
    by_eps: dict = {}
    for n, eps, count in profile.rows:
        by_eps.setdefault(eps, []).append((n, count))
    for eps in sorted(by_eps, reverse=True):
        rows = sorted(by_eps[eps])
        ns = [r[0] for r in rows]
        logs = [np.log(max(r[1], 1)) for r in rows]
        ax.plot(ns, logs, marker="o", label=f"eps={eps:g}")
    ax.set_xlabel("n")
    ax.set_ylabel("log count")
    ax.set_title(f"separated counts: {profile.map_label}")
    ax.legend()
    return fig


def mmdim_figure(table):
    """Ratio trends against log2(1/eps), one line per n."""
    fig, ax = _new_axes()
    by_n: dict = {}
    for n, eps, _k, _eta, _count, ratio in table.rows:
        by_n.setdefault(n, []).append((eps, ratio))
    for n in sorted(by_n):
        rows = sorted(by_n[n], reverse=True)
        xs = [np.log2(1.0 / e) for e, _ in rows]
        ys = [r for _, r in rows]
        ax.plot(xs, ys, marker="o", label=f"n={n}")
    ax.axhline(2.0 * table.beta, color="tab:red", linestyle="--", label="2*beta")
    ax.set_xlabel("log2(1/eps)")
    ax.set_ylabel("ratio")
    ax.set_title("metric-mean-dimension lower-bound ratios")
    ax.legend()
    return fig
