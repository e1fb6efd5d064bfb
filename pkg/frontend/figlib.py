"""Shared plumbing for the figure scripts.

The scripts consume the holediff CLI's CSV tables (schema v1, validated
against the expected header row) and render matplotlib figures.  Rendering
is deterministic: the Agg backend, a fixed svg hash salt, and a pinned
SOURCE_DATE_EPOCH make repeated SVG renders byte-identical.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path

os.environ.setdefault("SOURCE_DATE_EPOCH", "0")

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "holediff-figures"
matplotlib.rcParams["figure.dpi"] = 120

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

# CSV schema v1 of the holediff CLI, by table kind.
SCHEMAS = {
    "positions": ["index", "a1", "a2", "a3", "a4", "D", "D_float"],
    "sizes": ["h", "a1", "a2", "D", "D_float", "J_h", "J_h_float", "extremum"],
    "phi": ["x", "phi", "phi_float"],
    "escape": [
        "index", "a1", "a2", "D", "D_float", "nu", "gamma", "iterations", "residual",
    ],
}


class SchemaError(ValueError):
    """Input CSV does not match the documented schema."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: id, input CSV paths, output path, options."""

    figure: str  # positions | phi | asymptotics | escape-compare
    inputs: dict
    out: Path
    options: dict = field(default_factory=dict)


def rational(text: str) -> float:
    num, _, den = text.partition("/")
    return float(num) / float(den) if den else float(text)


def load_table(path, kind: str):
    """Parse a CLI table; returns (data_rows, footer_rows) as dicts.

    Footer rows are the mean/reference rows whose index column is not an
    integer (positions and escape tables).
    """
    expected = SCHEMAS[kind]
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != expected:
            raise SchemaError(f"{path}: header {header} != schema {expected}")
        rows = [dict(zip(expected, row)) for row in reader]
    if "index" in expected:
        data = [r for r in rows if r["index"].isdigit()]
        footer = [r for r in rows if not r["index"].isdigit()]
    else:
        data, footer = rows, []
    return data, footer


def _render_positions(spec: FigureSpec):
    rows, footer = load_table(spec.inputs["scan"], "positions")
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs, ys = [], []
    for row in rows:
        a1, a2 = rational(row["a1"]), rational(row["a2"])
        xs += [a1, a2]
        ys += [float(row["D_float"])] * 2
        ax.axvline(a1, color="0.8", lw=0.4, zorder=0)
    ax.axvline(rational(rows[-1]["a2"]), color="0.8", lw=0.4, zorder=0)
    ax.plot(xs, ys, color="black", lw=1.4)
    mean_rows = [r for r in footer if r["index"] == "mean"]
    if mean_rows:
        ax.axhline(float(mean_rows[0]["D_float"]), color="0.5", lw=0.6, ls="-")
    ax.set_xlim(0, rational(rows[-1]["a2"]))
    ax.set_xlabel("position of the hole $I_L$")
    ax.set_ylabel("$D$")
    ax.set_title(spec.options.get("title", "diffusion coefficient vs hole position"))
    return fig


def _render_phi(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    colors = ["0.7", "tab:red", "tab:blue", "black"]
    for i, (label, path) in enumerate(spec.inputs["curves"]):
        rows, _ = load_table(path, "phi")
        xs = [rational(r["x"]) for r in rows]
        ys = [float(r["phi_float"]) for r in rows]
        ax.plot(xs, ys, lw=1.0, color=colors[i % len(colors)], label=label)
    ax.axhline(0.0, color="0.85", lw=0.5, zorder=0)
    ax.set_xlabel("$x$")
    ax.set_ylabel(r"$\Phi_s(x)$")
    ax.legend(frameon=False, fontsize=9)
    ax.set_title("cumulative deviation integral")
    window = spec.options.get("xlim")
    if window:
        ax.set_xlim(*window)
    return fig


def _render_asymptotics(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    series_colors = ["tab:red", "tab:blue", "tab:green", "black"]
    for i, (label, path) in enumerate(spec.inputs["curves"]):
        rows, _ = load_table(path, "sizes")
        hs = [rational(r["h"]) for r in rows]
        ds = [float(r["D_float"]) for r in rows]
        color = series_colors[i % len(series_colors)]
        ax.loglog(hs, ds, "o-", ms=3, lw=0.9, color=color, label=label)
        ax.loglog(
            hs, [float(r["J_h_float"]) for r in rows], "--", lw=0.8, color=color
        )
        marked = [r for r in rows if r["extremum"]]
        if spec.options.get("mark_extrema") and marked:
            ax.loglog(
                [rational(r["h"]) for r in marked],
                [float(r["D_float"]) for r in marked],
                "s", ms=7, mfc="none", mec="black",
            )
    for slope, style in spec.options.get("guides", []):
        rows, _ = load_table(spec.inputs["curves"][0][1], "sizes")
        hs = [rational(r["h"]) for r in rows]
        ax.loglog(hs, [slope * h for h in hs], style, lw=0.8, color="0.4")
    ax.set_xlabel("$h$")
    ax.set_ylabel("$D$")
    ax.legend(frameon=False, fontsize=9)
    ax.set_title(spec.options.get("title", "small-hole asymptotics"))
    return fig


def _render_escape_compare(spec: FigureSpec):
    rows, footer = load_table(spec.inputs["scan"], "escape")
    fig, ax = plt.subplots(figsize=(6.6, 4.4))
    xs = []
    d_steps, g_steps = [], []
    for row in rows:
        a1, a2 = rational(row["a1"]), rational(row["a2"])
        xs += [a1, a2]
        d_steps += [float(row["D_float"])] * 2
        g_steps += [float(row["gamma"])] * 2
    ax.plot(xs, g_steps, color="tab:red", lw=1.1, label=r"escape rate $\gamma$")
    ax.plot(xs, d_steps, color="black", lw=1.1, label="$D$")
    for row in footer:
        if row["index"] == "mean_arithmetic":
            ax.axhline(float(row["gamma"]), color="tab:red", lw=0.5, ls="-")
            ax.axhline(float(row["D_float"]), color="0.5", lw=0.5, ls="-")
    ax.set_xlim(0, rational(rows[-1]["a2"]))
    ax.set_xlabel("position of the hole $I_L$")
    ax.legend(frameon=False, fontsize=9)
    ax.set_title("diffusion coefficient vs escape rate")
    return fig


_RENDERERS = {
    "positions": _render_positions,
    "phi": _render_phi,
    "asymptotics": _render_asymptotics,
    "escape-compare": _render_escape_compare,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure spec to its output path (SVG or PNG)."""
    if spec.figure not in _RENDERERS:
        raise ValueError(f"unknown figure id {spec.figure!r}")
    fig = _RENDERERS[spec.figure](spec)
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata={"Date": None} if out.suffix == ".svg" else None)
    plt.close(fig)
    return out
