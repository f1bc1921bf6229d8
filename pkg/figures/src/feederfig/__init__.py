from .render import FigureInputError, render_all

__all__ = ["FigureInputError", "render_all"]
