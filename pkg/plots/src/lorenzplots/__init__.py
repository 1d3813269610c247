"""Offline figure generation from the toolkit's CSV/JSON outputs."""

__version__ = "0.1.0"

from .render import FIGURE_KINDS, FigureSpec, PlotInputError, render

__all__ = ["FigureSpec", "render", "FIGURE_KINDS", "PlotInputError"]
