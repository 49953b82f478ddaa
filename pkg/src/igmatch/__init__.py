"""Exact induced-graph-matching toolkit for claw-free and circular-arc graphs."""

__version__ = "0.1.0"
