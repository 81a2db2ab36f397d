"""Figure rendering for slsv solver outputs."""
from .figures import FigureKind, FigureSpec, plot, slope_label

__all__ = ["FigureKind", "FigureSpec", "plot", "slope_label"]
