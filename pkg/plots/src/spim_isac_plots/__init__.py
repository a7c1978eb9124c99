"""Figure renderer for spim-isac CSV results."""

from .render import KINDS, FigureSpec, SchemaError, build_figure, render

__version__ = "0.1.0"

__all__ = ["KINDS", "FigureSpec", "SchemaError", "build_figure", "render", "__version__"]
