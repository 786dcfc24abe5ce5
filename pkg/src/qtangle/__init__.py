"""Quandle cocycle invariants of knots and tangles, and tangle embedding obstructions."""

__version__ = "0.1.0"
