"""Translate sets, continuous placements and rotation planning for unit
segments and small probes inside convex bodies."""

__version__ = "0.1.0"
