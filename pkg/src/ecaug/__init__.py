"""Exact minimum-cost edge-connectivity augmentation under a weight budget."""

from .graph import INF, Instance, Link, MultiGraph
from .solver import Solution, solve

__all__ = ["INF", "Instance", "Link", "MultiGraph", "Solution", "solve"]
