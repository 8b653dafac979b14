"""Koszul cohomology of smooth plane curves over prime fields."""

__version__ = "0.1.0"
