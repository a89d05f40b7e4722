"""Render figures from ringsh experiment output directories.

Consumes only the published CSV/JSON files of a finished experiment run:

* ``spectrum``  — ``eigenvalues.csv`` + ``prediction.json``: eigenvalue
  convergence scatter with dashed reference lines at the kernel eigenvalues.
* ``branch``    — ``branch.csv`` + ``profile.csv`` + ``events.json``:
  two-panel bifurcation diagram (solid = stable, dashed = unstable) next to
  the far-point solution profile.  Works for both the ``bifurcate`` and
  ``resonance`` experiment layouts.
* ``bipartite`` — ``eigenvalues.csv`` + ``profile.csv`` + ``prediction.json``:
  normalized spectrum with the four predicted levels, and the step-shaped
  eigenvector with its two group means.

Output is SVG written atomically: a failed render never leaves a partial
image behind.  For fixed inputs the bytes are reproducible.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "PlotInputError", "render_figure", "main"]

KINDS = ("spectrum", "branch", "bipartite")

# Fixed salt so that clip-path ids inside the SVG do not vary run to run.
matplotlib.rcParams["svg.hashsalt"] = "ringsh-plots"


class PlotInputError(Exception):
    """Missing, unreadable, or schema-violating experiment output."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: where to read, what to draw, where to write."""

    input_dir: str
    kind: str
    out: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotInputError(
                f"unknown figure kind {self.kind!r}; expected one of {KINDS}"
            )


# --------------------------------------------------------------------------
# Input loading
# --------------------------------------------------------------------------


def _read_csv(path: str, columns: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Load a CSV with an exact expected header into float columns."""
    if not os.path.isfile(path):
        raise PlotInputError(f"missing input file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise PlotInputError(f"{path}: empty file, expected header {columns}")
        for got, want in zip(header, columns):
            if got != want:
                raise PlotInputError(
                    f"{path}: unexpected column {got!r} where {want!r} was expected"
                )
        if len(header) != len(columns):
            raise PlotInputError(
                f"{path}: expected {len(columns)} columns {columns}, found {len(header)}"
            )
        rows = list(reader)
    if not rows:
        raise PlotInputError(f"{path}: no data rows")
    try:
        data = np.array([[float(v) for v in row] for row in rows])
    except ValueError as exc:
        raise PlotInputError(f"{path}: non-numeric cell ({exc})")
    return {name: data[:, i] for i, name in enumerate(columns)}


def _read_json(path: str) -> dict:
    if not os.path.isfile(path):
        raise PlotInputError(f"missing input file: {path}")
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise PlotInputError(f"{path}: invalid JSON ({exc})")
    if not isinstance(payload, dict):
        raise PlotInputError(f"{path}: expected a JSON object")
    return payload


def _reference_eigenvalues(prediction: dict) -> list[float]:
    """Kernel eigenvalues from prediction.json, for both published layouts.

    Ring kernels store ``[[k, eigenvalue, multiplicity], ...]``; bipartite
    kernels store a flat list of floats.
    """
    entries = prediction.get("eigenvalues")
    if not isinstance(entries, list) or not entries:
        raise PlotInputError("prediction.json: missing or empty 'eigenvalues'")
    if isinstance(entries[0], list):
        return [float(e[1]) for e in entries]
    return [float(e) for e in entries]


# --------------------------------------------------------------------------
# Figure bodies
# --------------------------------------------------------------------------


def _draw_spectrum(ax, input_dir: str) -> None:
    cols = _read_csv(
        os.path.join(input_dir, "eigenvalues.csv"),
        ("N", "index", "eigenvalue", "normalized"),
    )
    prediction = _read_json(os.path.join(input_dir, "prediction.json"))
    refs = _reference_eigenvalues(prediction)

    sizes = np.unique(cols["N"]).astype(int)
    n_top = min(8, int(cols["index"].max()) + 1)
    for k in range(n_top):
        mask = cols["index"] == k
        ax.plot(
            cols["N"][mask],
            cols["normalized"][mask],
            marker="o",
            markersize=4,
            linewidth=1.0,
            label=f"mode {k}" if k < 4 else None,
        )
    for mu in refs:
        ax.axhline(mu, linestyle="--", linewidth=0.8, color="0.4")
    acc = prediction.get("accumulation_point")
    if acc is not None:
        ax.axhline(float(acc), linestyle=":", linewidth=0.8, color="0.2")
    ax.set_xticks(sizes)
    ax.set_xlabel("N")
    ax.set_ylabel("eigenvalue / N")
    ax.set_title("eigenvalue convergence")
    ax.legend(loc="best", fontsize=8)


def _draw_branch_panel(ax, input_dir: str) -> None:
    cols = _read_csv(
        os.path.join(input_dir, "branch.csv"),
        ("step", "epsilon", "amplitude", "supnorm", "stable"),
    )
    events = _read_json(os.path.join(input_dir, "events.json"))

    eps = cols["epsilon"]
    amp = cols["amplitude"]
    stable = cols["stable"] > 0.5
    # Contiguous runs of constant stability, each overlapping its neighbour
    # by one point so the curve stays visually connected.
    start = 0
    for i in range(1, len(eps) + 1):
        if i == len(eps) or stable[i] != stable[start]:
            seg = slice(start, min(i + 1, len(eps)))
            ax.plot(
                eps[seg],
                amp[seg],
                linestyle="-" if stable[start] else "--",
                color="C0",
                linewidth=1.4,
            )
            start = i
    eps_bp = events.get("branch_point")
    if eps_bp is not None:
        ax.plot([float(eps_bp)], [0.0], marker="o", color="C3", markersize=5)
    for fold in events.get("folds", []):
        ax.plot(
            [float(fold["epsilon"])],
            [float(fold["amplitude"])],
            marker="v",
            color="C1",
            markersize=6,
        )
    ax.axhline(0.0, linewidth=0.6, color="0.6")
    ax.set_xlabel("epsilon")
    ax.set_ylabel("amplitude")
    ax.set_title("bifurcation diagram")


def _draw_profile_panel(ax, input_dir: str, levels: list[float] | None = None) -> None:
    cols = _read_csv(os.path.join(input_dir, "profile.csv"), ("j", "x", "u"))
    ax.plot(cols["x"], cols["u"], linewidth=1.2, color="C0")
    if levels:
        for level in levels:
            ax.axhline(level, linestyle="--", linewidth=0.8, color="0.4")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title("solution profile")


def _draw_bipartite_spectrum(ax, input_dir: str, prediction: dict) -> None:
    cols = _read_csv(
        os.path.join(input_dir, "eigenvalues.csv"),
        ("N", "index", "eigenvalue", "normalized"),
    )
    ax.plot(
        cols["index"],
        cols["normalized"],
        linestyle="none",
        marker=".",
        markersize=3,
        color="C0",
    )
    for mu in _reference_eigenvalues(prediction):
        ax.axhline(mu, linestyle="--", linewidth=0.8, color="0.4")
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue / N")
    ax.set_title("normalized spectrum")


def _render_spectrum(spec: FigureSpec, fig) -> None:
    ax = fig.add_subplot(1, 1, 1)
    _draw_spectrum(ax, spec.input_dir)


def _render_branch(spec: FigureSpec, fig) -> None:
    ax1 = fig.add_subplot(1, 2, 1)
    ax2 = fig.add_subplot(1, 2, 2)
    _draw_branch_panel(ax1, spec.input_dir)
    _draw_profile_panel(ax2, spec.input_dir)


def _render_bipartite(spec: FigureSpec, fig) -> None:
    prediction = _read_json(os.path.join(spec.input_dir, "prediction.json"))
    ax1 = fig.add_subplot(1, 2, 1)
    ax2 = fig.add_subplot(1, 2, 2)
    _draw_bipartite_spectrum(ax1, spec.input_dir, prediction)
    means = prediction.get("group_means")
    _draw_profile_panel(ax2, spec.input_dir, levels=means)


_BODIES = {
    "spectrum": _render_spectrum,
    "branch": _render_branch,
    "bipartite": _render_bipartite,
}


# --------------------------------------------------------------------------
# Entry points
# --------------------------------------------------------------------------


def render_figure(spec: FigureSpec) -> str:
    """Render one figure; returns the output path.

    All inputs are read and validated before anything is written, and the
    SVG is written to a temporary file and moved into place, so a failure
    never leaves a partial image.
    """
    if not os.path.isdir(spec.input_dir):
        raise PlotInputError(f"input directory does not exist: {spec.input_dir}")
    width = 5.0 if spec.kind == "spectrum" else 9.0
    fig = plt.figure(figsize=(width, 3.4))
    try:
        _BODIES[spec.kind](spec, fig)
        fig.tight_layout()
        out_dir = os.path.dirname(os.path.abspath(spec.out)) or "."
        fd, tmp = tempfile.mkstemp(suffix=".svg", dir=out_dir)
        try:
            with os.fdopen(fd, "wb") as fh:
                fig.savefig(fh, format="svg", metadata={"Date": None})
            os.replace(tmp, spec.out)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    finally:
        plt.close(fig)
    return spec.out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a figure from a ringsh experiment output directory.",
    )
    parser.add_argument("--in", dest="input_dir", required=True, help="experiment output directory")
    parser.add_argument("--kind", required=True, choices=KINDS, help="figure kind")
    parser.add_argument("--out", required=True, help="output SVG path")
    args = parser.parse_args(argv)
    try:
        render_figure(FigureSpec(input_dir=args.input_dir, kind=args.kind, out=args.out))
    except PlotInputError as exc:
        print(f"render: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
