"""Render chiralwalk CSV outputs as figure files.

Five figure kinds, one per CSV contract:

  snapshot-grid : (t, chain, site, density, phase)  -> per-time density panels
  trajectory    : (t, n_<chain>, ...)               -> chain densities vs time
  sweep         : (theta, n{1,2,3}_num, n{1,2,3}_ana) -> lines + markers
  spectrum      : (theta, nu, eta, energy, is_edge_state) -> spectrum vs phase
  greens        : (t, T, re_y, im_y, abs_y, arg_y)  -> magnitude and phase

Rendering is pure: the same input file produces byte-identical images (no
timestamps are embedded in the PNG output).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

KINDS = ("snapshot-grid", "trajectory", "sweep", "spectrum", "greens")

CHAIN_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple",
                "tab:brown", "tab:pink")


class SchemaError(ValueError):
    """Input file does not match the declared CSV contract."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    source: Path
    out: Path
    title: str | None = None
    dpi: int = 150

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; choose from {KINDS}")


def _read_table(path, expected=None, prefix=None):
    """Header plus float matrix; validates columns against the contract."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: empty file, expected a header row")
    header = rows[0]
    if expected is not None:
        for col in expected:
            if col not in header:
                raise SchemaError(f"{path}: missing column {col!r}")
        for col in header:
            if col not in expected:
                raise SchemaError(f"{path}: unexpected column {col!r}")
    if prefix is not None:
        if header[: len(prefix)] != list(prefix):
            raise SchemaError(
                f"{path}: header must start with {prefix}, got {header[:len(prefix)]}"
            )
        for col in header[len(prefix):]:
            if not col.startswith("n_"):
                raise SchemaError(f"{path}: unexpected column {col!r}")
    body = np.full((len(rows) - 1, len(header)), np.nan)
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise SchemaError(f"{path}: row {i + 2} has {len(row)} cells, "
                              f"expected {len(header)}")
        for j, cell in enumerate(row):
            if cell != "":
                body[i, j] = float(cell)
    return header, body


def _finish(fig, spec: FigureSpec):
    if spec.title:
        fig.suptitle(spec.title)
    fig.savefig(
        spec.out,
        dpi=spec.dpi,
        metadata={"Software": "chiralwalk-plots"},
    )
    plt.close(fig)


def _render_snapshot_grid(spec: FigureSpec):
    _, body = _read_table(
        spec.source, expected=["t", "chain", "site", "density", "phase"]
    )
    times = np.unique(body[:, 0]) if body.size else np.array([])
    n_panels = max(len(times), 1)
    ncols = min(4, n_panels)
    nrows = math.ceil(n_panels / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.2 * ncols, 2.4 * nrows), squeeze=False, sharey=True
    )
    for ax in axes.flat:
        ax.set_axis_off()
    for k, t in enumerate(times):
        ax = axes[k // ncols][k % ncols]
        ax.set_axis_on()
        sel = body[body[:, 0] == t]
        for ci, chain in enumerate(np.unique(sel[:, 1])):
            rows = sel[sel[:, 1] == chain]
            order = np.argsort(rows[:, 2])
            ax.plot(
                rows[order, 2],
                rows[order, 3],
                color=CHAIN_COLORS[int(chain) % len(CHAIN_COLORS)],
                lw=1.0,
                label=f"chain {int(chain)}",
            )
        ax.set_title(f"t = {t:g}", fontsize=9)
        ax.set_xlabel("site")
    axes[0][0].set_ylabel("density")
    if len(times):
        axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    _finish(fig, spec)


def _render_trajectory(spec: FigureSpec):
    header, body = _read_table(spec.source, prefix=["t"])
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    for j, name in enumerate(header[1:], start=1):
        label = int(name[2:])
        ax.plot(
            body[:, 0],
            body[:, j],
            color=CHAIN_COLORS[label % len(CHAIN_COLORS)],
            lw=1.2,
            label=f"$n_{{{label}}}$",
        )
    ax.set_xlabel("t")
    ax.set_ylabel("chain density")
    ax.set_ylim(-0.02, 1.05)
    if len(header) > 1 and body.size:
        ax.legend(loc="center right", fontsize=8)
    fig.tight_layout()
    _finish(fig, spec)


def _render_sweep(spec: FigureSpec):
    _, body = _read_table(
        spec.source,
        expected=["theta", "n1_num", "n2_num", "n3_num", "n1_ana", "n2_ana", "n3_ana"],
    )
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    for l in (1, 2, 3):
        color = CHAIN_COLORS[l % len(CHAIN_COLORS)]
        ana = body[:, 3 + l]
        if body.size and np.isfinite(ana).any():
            ax.plot(body[:, 0], ana, color=color, lw=1.4, label=f"$n_{{{l}}}$ analytic")
        num = body[:, l]
        if body.size and np.isfinite(num).any():
            ax.plot(
                body[:, 0], num, "o", color=color, ms=3.5, mfc="none",
                label=f"$n_{{{l}}}$ numeric",
            )
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("chain density after first collision")
    ax.set_ylim(-0.02, 1.05)
    if body.size:
        ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    _finish(fig, spec)


def _render_spectrum(spec: FigureSpec):
    _, body = _read_table(
        spec.source, expected=["theta", "nu", "eta", "energy", "is_edge_state"]
    )
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for nu in (1, 2, 3):
        sel = body[body[:, 1] == nu] if body.size else body
        if sel.size:
            bulk = sel[sel[:, 4] == 0]
            edge = sel[sel[:, 4] == 1]
            ax.plot(
                bulk[:, 0], bulk[:, 3], ".", color=CHAIN_COLORS[nu % len(CHAIN_COLORS)],
                ms=1.5, label=f"$\\nu = {nu}$",
            )
            if edge.size:
                ax.plot(edge[:, 0], edge[:, 3], "k.", ms=3.0)
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("energy")
    if body.size:
        ax.legend(fontsize=8, markerscale=6)
    fig.tight_layout()
    _finish(fig, spec)


def _render_greens(spec: FigureSpec):
    _, body = _read_table(
        spec.source, expected=["t", "T", "re_y", "im_y", "abs_y", "arg_y"]
    )
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.4, 4.8), sharex=True)
    if body.size:
        ax1.plot(body[:, 1], body[:, 4], color="tab:blue", lw=1.2)
        ax2.plot(body[:, 1], body[:, 5], color="tab:red", lw=1.2)
    ax1.set_ylabel(r"$|\mathcal{Y}|$")
    ax1.set_ylim(-0.05, 1.1)
    ax2.set_ylabel(r"$\arg \mathcal{Y}$")
    ax2.set_xlabel("T")
    ax2.set_ylim(-math.pi * 1.05, math.pi * 1.05)
    fig.tight_layout()
    _finish(fig, spec)


_RENDERERS = {
    "snapshot-grid": _render_snapshot_grid,
    "trajectory": _render_trajectory,
    "sweep": _render_sweep,
    "spectrum": _render_spectrum,
    "greens": _render_greens,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the output path."""
    if not Path(spec.source).exists():
        raise FileNotFoundError(f"input file {spec.source} does not exist")
    _RENDERERS[spec.kind](spec)
    return Path(spec.out)
