"""Applications built on the counting engines."""
from .circles import DiskStats, unit_dist_brute, unit_dist_count
from .segments import (ComponentGraph, SegStats, component_graph, seg_components,
                       seg_components_brute, seg_intersections, seg_intersections_brute)
from .selection import SelectStats, distance_select, distance_select_brute

__all__ = [
    "ComponentGraph", "DiskStats", "SegStats", "SelectStats",
    "component_graph", "distance_select", "distance_select_brute",
    "seg_components", "seg_components_brute", "seg_intersections",
    "seg_intersections_brute", "unit_dist_brute", "unit_dist_count",
]
