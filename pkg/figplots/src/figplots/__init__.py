"""Multi-panel figure rendering for negtemp sweep CSVs."""

__version__ = "0.1.0"

from .figures import FigureSpec, RenderError, build_figure, figure_spec, read_rows, render

__all__ = [
    "FigureSpec",
    "RenderError",
    "build_figure",
    "figure_spec",
    "read_rows",
    "render",
]
