"""Figure rendering for analysis reports (file output only, Agg backend)."""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .wavefront import DecayEstimate, WavefrontReport

__all__ = ["render_report_figures"]

_SINGULAR = "#c23b22"
_REGULAR = "#2a6f97"
_INCONCLUSIVE = "#b08900"

_VERDICT_COLOR = {
    "singular": _SINGULAR,
    "regular": _REGULAR,
    "inconclusive": _INCONCLUSIVE,
}


def _order_of(est) -> float:
    return est.t if isinstance(est, DecayEstimate) else est.s_star


def _order_label(report: WavefrontReport) -> str:
    return "decay order t" if report.mode == "decay" else "critical order s*"


def _threshold_label(report: WavefrontReport) -> str:
    return (
        f"threshold N_thr = {report.threshold:g}"
        if report.mode == "decay"
        else f"order s = {report.threshold:g}"
    )


def _directions_figure_1d(report: WavefrontReport, path: str) -> None:
    orders = [_order_of(e) for e in report.estimates]
    labels = ["+" if d[0] > 0 else "-" for d in report.directions]
    colors = [_VERDICT_COLOR[v] for v in report.verdicts]
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.bar(range(len(orders)), orders, color=colors, tick_label=labels)
    ax.axhline(report.threshold, color="k", ls="--", lw=1, label=_threshold_label(report))
    ax.set_ylabel(_order_label(report))
    ax.set_xlabel("direction")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _directions_figure_2d(report: WavefrontReport, path: str) -> None:
    ang = np.array([np.arctan2(d[1], d[0]) for d in report.directions])
    orders = np.array([_order_of(e) for e in report.estimates])
    colors = [_VERDICT_COLOR[v] for v in report.verdicts]
    order = np.argsort(ang)
    fig = plt.figure(figsize=(5, 5))
    ax = fig.add_subplot(projection="polar")
    closed_ang = np.append(ang[order], ang[order][0])
    closed_ord = np.append(orders[order], orders[order][0])
    ax.plot(closed_ang, closed_ord, color="0.6", lw=1, zorder=1)
    ax.scatter(ang, orders, c=colors, s=22, zorder=2)
    thr = np.full(128, report.threshold)
    ax.plot(np.linspace(0, 2 * np.pi, 128), thr, "k--", lw=1)
    ax.set_title(f"{_order_label(report)} by direction ({_threshold_label(report)})", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _directions_figure_3d(report: WavefrontReport, path: str) -> None:
    dirs = np.asarray(report.directions, dtype=float)
    az = np.arctan2(dirs[:, 1], dirs[:, 0])
    el = np.arcsin(np.clip(dirs[:, 2], -1, 1))
    orders = np.array([_order_of(e) for e in report.estimates])
    fig, ax = plt.subplots(figsize=(6, 3.2))
    sc = ax.scatter(np.rad2deg(az), np.rad2deg(el), c=orders, cmap="viridis", s=18)
    flagged = [v == "singular" for v in report.verdicts]
    if any(flagged):
        ax.scatter(
            np.rad2deg(az[flagged]),
            np.rad2deg(el[flagged]),
            facecolors="none",
            edgecolors=_SINGULAR,
            s=60,
            lw=1.2,
        )
    fig.colorbar(sc, ax=ax, label=_order_label(report))
    ax.set_xlabel("azimuth (deg)")
    ax.set_ylabel("elevation (deg)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _shell_figure(report: WavefrontReport, path: str, max_curves: int = 8) -> None:
    """log2 of shell envelopes/sums with fitted slopes, flagged dirs first."""
    ranked = sorted(
        range(len(report.estimates)),
        key=lambda i: (report.verdicts[i] != "singular", _order_of(report.estimates[i])),
    )[:max_curves]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for i in ranked:
        est = report.estimates[i]
        data = est.envelopes if isinstance(est, DecayEstimate) else est.sums
        ks = np.asarray(est.shells, dtype=float)
        vals = np.asarray(data, dtype=float)
        keep = vals > 0
        if not np.any(keep):
            continue
        label = ", ".join(f"{c:+.2f}" for c in report.directions[i])
        ax.plot(
            ks[keep],
            np.log2(vals[keep]),
            "o-",
            ms=3,
            lw=1,
            color=_VERDICT_COLOR[report.verdicts[i]],
            alpha=0.8,
            label=f"({label})",
        )
    ax.set_xlabel("dyadic shell k")
    ax.set_ylabel(
        "log2 shell envelope" if report.mode == "decay" else "log2 shell sum"
    )
    if ranked:
        ax.legend(fontsize=6, loc="best", ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report_figures(report: WavefrontReport, out_dir: str) -> list[str]:
    """Write the per-direction order plot and the shell-decay plot as PNGs."""
    os.makedirs(out_dir, exist_ok=True)
    d = len(report.x0)
    dir_path = os.path.join(out_dir, "directions.png")
    if d == 1:
        _directions_figure_1d(report, dir_path)
    elif d == 2:
        _directions_figure_2d(report, dir_path)
    else:
        _directions_figure_3d(report, dir_path)
    shell_path = os.path.join(out_dir, "shells.png")
    _shell_figure(report, shell_path)
    return [dir_path, shell_path]
