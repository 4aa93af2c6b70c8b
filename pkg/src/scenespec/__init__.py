"""Declarative 3-D scene specifications compiled to convex regions and sampled."""

__version__ = "0.1.0"
