"""Named manifold patches with reference values."""

from .catalog import zoo
from .registry import ManifoldZoo, ZooEntry, ZooParameters

__all__ = ["ManifoldZoo", "ZooEntry", "ZooParameters", "zoo"]
