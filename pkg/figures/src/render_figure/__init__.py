"""CSV-driven eigenvalue scatter plots with an elliptic boundary overlay."""

from .figure import (
    HEADER,
    FigureError,
    FigureSpec,
    ellipse_boundary,
    fraction_inside,
    read_points,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "HEADER",
    "FigureError",
    "FigureSpec",
    "ellipse_boundary",
    "fraction_inside",
    "read_points",
    "render",
    "__version__",
]
