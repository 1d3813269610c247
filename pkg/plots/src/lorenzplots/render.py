"""Figure rendering for the toolkit's documented CSV schemas.

Inputs are read-only; every figure kind validates its required columns and
refuses empty data before any image file is touched.  Axis ranges auto-fit
with a 5% margin unless overridden, so re-rendering the same spec yields
identical dimensions and ranges.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

FIGSIZE = (7.0, 5.0)
DPI = 130


class PlotInputError(Exception):
    """Schema mismatch or empty input."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple[str, ...]
    kind: str
    out: str
    title: str | None = None
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None

    def input_path(self) -> Path:
        return Path(self.inputs[0])


def read_table(path: Path, required: tuple[str, ...]) -> dict[str, list[str]]:
    """Column-major CSV; unknown columns are kept, missing required ones are
    an error, and zero data rows are an error."""
    if not path.exists():
        raise PlotInputError(f"input file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PlotInputError(f"{path} is empty")
        missing = [c for c in required if c not in header]
        if missing:
            raise PlotInputError(
                f"{path} lacks required column(s) {missing}; has {header}")
        cols: dict[str, list[str]] = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                cols[name].append(value)
    if not next(iter(cols.values()), []):
        raise PlotInputError(f"{path} holds a header but no data rows")
    return cols


def floats(cols: dict[str, list[str]], name: str) -> np.ndarray:
    out = []
    for v in cols[name]:
        try:
            out.append(float(v))
        except ValueError:
            out.append(math.nan)
    return np.array(out)


def _margins(lo: float, hi: float) -> tuple[float, float]:
    pad = 0.05 * (hi - lo) if hi > lo else max(0.5, abs(hi) * 0.05)
    return lo - pad, hi + pad


def _finish(fig, ax, spec: FigureSpec, xdata, ydata):
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    else:
        finite = xdata[np.isfinite(xdata)]
        if finite.size:
            ax.set_xlim(*_margins(float(finite.min()), float(finite.max())))
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)
    else:
        finite = ydata[np.isfinite(ydata)]
        if finite.size:
            ax.set_ylim(*_margins(float(finite.min()), float(finite.max())))
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=DPI)
    plt.close(fig)


def _attractor(spec: FigureSpec, vertical: str) -> None:
    cols = read_table(spec.input_path(), ("t", "x", "y", "z"))
    x = floats(cols, "x")
    v = floats(cols, vertical)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(x, v, lw=0.3, color="#20435c")
    ax.set_xlabel("x")
    ax.set_ylabel(vertical)
    _finish(fig, ax, spec, x, v)


def render_attractor_xz(spec: FigureSpec) -> None:
    _attractor(spec, "z")


def render_attractor_xy(spec: FigureSpec) -> None:
    _attractor(spec, "y")


def render_return_map(spec: FigureSpec) -> None:
    cols = read_table(spec.input_path(), ("zmax_i", "zmax_next"))
    cur = floats(cols, "zmax_i")
    nxt = floats(cols, "zmax_next")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.scatter(cur, nxt, s=1.5, color="#20435c", rasterized=True)
    lo = float(min(cur.min(), nxt.min()))
    hi = float(max(cur.max(), nxt.max()))
    ax.plot([lo, hi], [lo, hi], lw=0.8, color="#b33", ls="--", label="diagonal")
    ax.set_xlabel("z-max (current)")
    ax.set_ylabel("z-max (next)")
    ax.legend(loc="lower center")
    _finish(fig, ax, spec, np.append(cur, nxt), np.append(nxt, cur))


def render_branch(spec: FigureSpec) -> None:
    cols = read_table(spec.input_path(),
                      ("r", "period", "mu1_re", "mu1_im", "mu2_re", "mu2_im",
                       "event"))
    r = floats(cols, "r")
    period = floats(cols, "period")
    mu1 = np.hypot(floats(cols, "mu1_re"), floats(cols, "mu1_im"))
    mu2 = np.hypot(floats(cols, "mu2_re"), floats(cols, "mu2_im"))
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=FIGSIZE, sharex=True)
    ax1.plot(r, period, lw=1.0, color="#20435c")
    ax1.set_ylabel("period")
    ax2.semilogy(r, mu1, lw=1.0, color="#20435c", label="|mu1|")
    ax2.semilogy(r, mu2, lw=1.0, color="#777777", label="|mu2|")
    ax2.axhline(1.0, lw=0.8, color="#b33", ls="--")
    for ri, ev in zip(r, cols["event"]):
        if ev:
            for ax in (ax1, ax2):
                ax.axvline(ri, lw=0.8, color="#d80", alpha=0.8)
            ax2.annotate(ev.split(";")[0], (ri, 1.0), fontsize=7,
                         rotation=90, va="bottom")
    ax2.set_xlabel("r")
    ax2.set_ylabel("multiplier modulus")
    ax2.legend(loc="best", fontsize=8)
    if spec.title:
        ax1.set_title(spec.title)
    if spec.xlim is not None:
        ax2.set_xlim(*spec.xlim)
    else:
        ax2.set_xlim(*_margins(float(r.min()), float(r.max())))
    if spec.ylim is not None:
        ax1.set_ylim(*spec.ylim)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=DPI)
    plt.close(fig)


def render_sweep_diagram(spec: FigureSpec) -> None:
    cols = read_table(spec.input_path(), ("r", "zmax"))
    r = floats(cols, "r")
    z = floats(cols, "zmax")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.scatter(r, z, s=0.8, color="#20435c", rasterized=True)
    ax.set_xlabel("r")
    ax.set_ylabel("section z-maxima")
    _finish(fig, ax, spec, r, z)


def render_lyapunov_curve(spec: FigureSpec) -> None:
    cols = read_table(spec.input_path(), ("r", "lam1", "lam2", "lam3"))
    r = floats(cols, "r")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for name, color in (("lam1", "#b33"), ("lam2", "#20435c"),
                        ("lam3", "#777777")):
        ax.plot(r, floats(cols, name), lw=1.0, color=color, label=name)
    ax.axhline(0.0, lw=0.8, color="black", ls=":")
    ax.set_xlabel("r")
    ax.set_ylabel("Lyapunov exponents")
    ax.legend(loc="best", fontsize=8)
    lams = np.concatenate([floats(cols, n) for n in ("lam1", "lam2", "lam3")])
    _finish(fig, ax, spec, r, lams)


def render_fate_profile(spec: FigureSpec) -> None:
    cols = read_table(spec.input_path(),
                      ("r", "verdict", "decision_time", "min_dist_origin"))
    r = floats(cols, "r")
    t = floats(cols, "decision_time")
    verdicts = cols["verdict"]
    palette = {
        "converges-to-O1": "#20435c",
        "converges-to-O2": "#2e7d32",
        "near-homoclinic": "#d80",
        "undecided-wandering": "#b33",
    }
    fig, ax = plt.subplots(figsize=FIGSIZE)
    seen = set()
    for verdict in verdicts:
        if verdict in seen:
            continue
        seen.add(verdict)
        mask = np.array([v == verdict for v in verdicts])
        ax.scatter(r[mask], t[mask], s=14,
                   color=palette.get(verdict, "#555"), label=verdict)
    ax.set_xlabel("r")
    ax.set_ylabel("decision time")
    ax.legend(loc="best", fontsize=8)
    _finish(fig, ax, spec, r, t)


FIGURE_KINDS = {
    "attractor-xz": render_attractor_xz,
    "attractor-xy": render_attractor_xy,
    "return-map": render_return_map,
    "branch": render_branch,
    "sweep-diagram": render_sweep_diagram,
    "lyapunov-curve": render_lyapunov_curve,
    "fate-profile": render_fate_profile,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; raises PlotInputError before writing anything when
    the input does not match the documented schema."""
    if spec.kind not in FIGURE_KINDS:
        raise PlotInputError(
            f"unknown figure kind {spec.kind!r}; choose from "
            f"{sorted(FIGURE_KINDS)}")
    if not spec.inputs:
        raise PlotInputError("no input file given")
    FIGURE_KINDS[spec.kind](spec)
    return Path(spec.out)
