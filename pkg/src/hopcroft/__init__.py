"""Exact point/line incidence counting and applications."""
__version__ = "0.1.0"

from .counting import (CountResult, WeightedResult, count_arrangement, count_asymmetric,
                       count_brute, count_cascade, count_recursive, weighted_brute,
                       weighted_counts)
from .geom import Line, Point

__all__ = [
    "CountResult", "Line", "Point", "WeightedResult", "__version__",
    "count_arrangement", "count_asymmetric", "count_brute", "count_cascade",
    "count_recursive", "weighted_brute", "weighted_counts",
]
