"""Render spim-isac CSV results into figures.

Three figure kinds are supported, one per CSV schema:

* ``mi_snr``  - mutual information versus SNR, three curves with a legend.
* ``mi_gain`` - mutual information versus the strongest path gain, with a
  marker at the interpolated crossover of the two simulated curves.
* ``beampattern`` - one stacked panel per input CSV, each curve normalized to
  a 0 dB peak and floored at -60 dB.

Rendering is a pure function of the CSV contents: styles are fixed in the
STYLES table below and no timestamps enter the image, so re-rendering the
same input reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

MI_HEADER = [
    "axis_value",
    "mi_spim",
    "mi_mmwave_num",
    "mi_mmwave_cf",
    "stderr_spim",
    "stderr_mmwave_num",
    "trials",
]

KINDS = ("mi_snr", "mi_gain", "beampattern")

FLOOR_DB = -60.0

#: Fixed plot styles; keys are curve identifiers used below.
STYLES = {
    "mi_spim": {"color": "#1f77b4", "marker": "o", "label": "pattern-modulated"},
    "mi_mmwave_num": {"color": "#d62728", "marker": "s", "label": "strongest path (simulated)"},
    "mi_mmwave_cf": {
        "color": "#2ca02c",
        "marker": "^",
        "linestyle": "--",
        "label": "strongest path (closed form)",
    },
    "eta_palette": ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"),
    "crossover": {"color": "#555555", "linestyle": ":"},
}


class SchemaError(Exception):
    """CSV does not match the schema declared for the figure kind."""


@dataclass(frozen=True)
class FigureSpec:
    """What to render: figure kind, input CSV path(s), output image path."""

    kind: str
    inputs: tuple[str, ...]
    output: str
    title: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}, expected one of {KINDS}")
        if len(self.inputs) == 0:
            raise SchemaError("need at least one input CSV")
        if self.kind in ("mi_snr", "mi_gain") and len(self.inputs) != 1:
            raise SchemaError(f"{self.kind} takes exactly one input CSV")


def _read_rows(path: str) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if len(rows) < 2:
        raise SchemaError(f"{path} has no data rows")
    return rows


def read_mi_csv(path: str) -> dict[str, np.ndarray]:
    rows = _read_rows(path)
    if rows[0] != MI_HEADER:
        raise SchemaError(f"{path} header {rows[0]} does not match the MI schema {MI_HEADER}")
    try:
        data = np.array([[float(cell) for cell in row] for row in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path} holds non-numeric cells: {exc}") from exc
    return {name: data[:, i] for i, name in enumerate(MI_HEADER)}


def read_beampattern_csv(path: str) -> tuple[np.ndarray, list[str], np.ndarray]:
    rows = _read_rows(path)
    header = rows[0]
    if header[0] != "angle_deg" or len(header) < 2 or not all(
        name.startswith("eta_") for name in header[1:]
    ):
        raise SchemaError(
            f"{path} header {header} does not match the beampattern schema "
            "[angle_deg, eta_*, ...]"
        )
    try:
        data = np.array([[float(cell) for cell in row] for row in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path} holds non-numeric cells: {exc}") from exc
    return data[:, 0], header[1:], data[:, 1:].T


def _plot_mi(ax, columns: dict[str, np.ndarray], xlabel: str) -> None:
    x = columns["axis_value"]
    for name in ("mi_spim", "mi_mmwave_num", "mi_mmwave_cf"):
        ax.plot(x, columns[name], markersize=4, **STYLES[name])
    ax.set_xlabel(xlabel)
    ax.set_ylabel("mutual information (bits)")
    ax.grid(True, alpha=0.3)
    ax.legend()


def _mark_crossover(ax, columns: dict[str, np.ndarray]) -> None:
    x = columns["axis_value"]
    diff = columns["mi_spim"] - columns["mi_mmwave_num"]
    for i in range(len(diff) - 1):
        if diff[i] > 0 >= diff[i + 1]:
            x_cross = x[i] + (x[i + 1] - x[i]) * diff[i] / (diff[i] - diff[i + 1])
            ax.axvline(x_cross, **STYLES["crossover"])
            ax.annotate(
                f"crossover {x_cross:.3f}",
                (x_cross, ax.get_ylim()[0]),
                xytext=(4, 8),
                textcoords="offset points",
                fontsize=8,
                color=STYLES["crossover"]["color"],
            )
            break


def build_figure(spec: FigureSpec):
    """Parse the input CSVs and build the matplotlib figure, unsaved."""
    if spec.kind in ("mi_snr", "mi_gain"):
        columns = read_mi_csv(spec.inputs[0])
        fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=100)
        xlabel = "SNR (dB)" if spec.kind == "mi_snr" else "strongest path gain"
        _plot_mi(ax, columns, xlabel)
        if spec.kind == "mi_gain":
            _mark_crossover(ax, columns)
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        return fig

    panels = [read_beampattern_csv(path) for path in spec.inputs]
    fig, axes = plt.subplots(
        len(panels), 1, figsize=(6.0, 2.6 * len(panels)), dpi=100, squeeze=False
    )
    for index, (ax, (angles, labels, curves)) in enumerate(zip(axes[:, 0], panels)):
        palette = STYLES["eta_palette"]
        for j, (label, curve) in enumerate(zip(labels, curves)):
            normalized = np.maximum(curve - np.max(curve), FLOOR_DB)
            ax.plot(angles, normalized, color=palette[j % len(palette)],
                    linewidth=1.0, label=label.replace("eta_", "eta = "))
        ax.set_xlim(angles[0], angles[-1])
        ax.set_ylim(FLOOR_DB, 3.0)
        ax.set_ylabel("power (dB)")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=7, ncol=2, loc="upper left")
        if index == len(panels) - 1:
            ax.set_xlabel("angle (deg)")
    if spec.title:
        axes[0, 0].set_title(spec.title)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Render the figure to ``spec.output``; nothing is written on error."""
    fig = build_figure(spec)  # raises SchemaError before any output exists
    out = Path(spec.output)
    try:
        fig.savefig(out, format=out.suffix.lstrip(".") or "png")
    finally:
        plt.close(fig)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render spim-isac CSV results into figures"
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument(
        "--in",
        dest="inputs",
        required=True,
        action="append",
        help="input CSV; repeat the flag for stacked beampattern panels",
    )
    parser.add_argument("--out", required=True, help="output image path (png, svg, pdf)")
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind, inputs=tuple(args.inputs), output=args.out, title=args.title
        )
        path = render(spec)
    except SchemaError as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
