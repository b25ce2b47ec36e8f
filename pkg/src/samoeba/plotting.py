"""Figure rendering for membership grids and scaling-limit overlays.

All figures are offline artifacts written next to the delimited output;
only n = 2 is drawn (the fundamental domain x1 <= x2 is shaded).
"""

from __future__ import annotations

from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .numerics import GridResult
from .tropical import EMPTY, FULL_SPACE, HYPERPLANE, LimitReport, TropicalDescription

_VERDICT_STYLE = {
    "member": dict(color="#1f6fb4", marker="o", s=18, label="member"),
    "non-member": dict(color="#d08a35", marker="x", s=18, label="non-member"),
    "inconclusive": dict(color="#b43a3a", marker="s", s=22,
                         label="inconclusive"),
}


def _require_planar(n: int):
    if n != 2:
        raise ValueError("figures are only rendered for n = 2")


def render_grid(result: GridResult, path: str,
                title: Optional[str] = None) -> str:
    """Scatter the fundamental-domain verdicts of an amoeba grid."""
    _require_planar(result.n)
    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    lo, hi = result.box
    ax.fill_between([lo, hi], [lo, hi], [hi, hi],
                    color="0.94", zorder=0, label=None)
    for verdict, style in _VERDICT_STYLE.items():
        xs = [p.x[0] for p in result.points if p.verdict == verdict]
        ys = [p.x[1] for p in result.points if p.verdict == verdict]
        if xs:
            ax.scatter(xs, ys, **style, zorder=2)
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_aspect("equal")
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title(title or f"amoeba membership: {result.f_text}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def _description_mask(d: TropicalDescription, xs: np.ndarray,
                      ys: np.ndarray) -> np.ndarray:
    """Boolean mask (True = in the limit set) on a mesh, float arithmetic."""
    gx, gy = np.meshgrid(xs, ys)
    if d.kind == EMPTY:
        return np.zeros_like(gx, dtype=bool)
    if d.kind == FULL_SPACE:
        return np.ones_like(gx, dtype=bool)
    if d.kind == HYPERPLANE:
        span = (xs[-1] - xs[0]) / max(len(xs) - 1, 1)
        return np.abs(gx + gy) < span / 2
    mask = np.ones_like(gx, dtype=bool)
    for cone in d.cones():
        if cone.equations:
            continue
        inside = np.ones_like(gx, dtype=bool)
        for a in cone.inequalities:
            inside &= (a[0] * gx + a[1] * gy) > 0
        mask &= ~inside
    return mask


def render_limit(report: LimitReport, path: str) -> str:
    """Scaled member overlay on the predicted limit set, one panel per rho."""
    if report.description is None:
        raise ValueError("exploratory reports have no description to draw")
    _require_planar(report.grid.n)
    d = report.description
    rows = report.rows
    fig, axes = plt.subplots(
        1, len(rows), figsize=(4.2 * len(rows), 4.2), squeeze=False)
    members = [p.x for p in report.grid.points if p.verdict == "member"]
    lo, hi = report.grid.box
    for ax, row in zip(axes[0], rows):
        rho = row.rho
        span = max(abs(lo), abs(hi)) * rho
        xs = np.linspace(-span, span, 201)
        mask = _description_mask(d, xs, xs)
        ax.imshow(
            mask, origin="lower", extent=(-span, span, -span, span),
            cmap="Greys", alpha=0.25, vmin=0, vmax=1.6)
        if members:
            pts = np.asarray(members, dtype=float) * rho
            ax.scatter(pts[:, 0], pts[:, 1], s=6, color="#1f6fb4",
                       label="rho * member")
        ax.set_title(
            f"rho={rho:g}  viol={row.violations} miss={row.coverage_misses}",
            fontsize=8)
        ax.set_xlim(-span, span)
        ax.set_ylim(-span, span)
        ax.set_aspect("equal")
    axes[0][0].legend(loc="upper left", fontsize=7)
    fig.suptitle(f"scaling limit: {report.f_text}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
