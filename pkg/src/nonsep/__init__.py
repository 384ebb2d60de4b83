"""Tools for non-separable families of positive homothetic convex bodies."""

__version__ = "0.1.0"
