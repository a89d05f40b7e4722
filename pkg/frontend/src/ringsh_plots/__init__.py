"""Figure rendering for ringsh experiment outputs."""

__version__ = "0.1.0"

from ringsh_plots.render import FigureSpec, PlotInputError, render_figure

__all__ = ["FigureSpec", "PlotInputError", "render_figure"]
