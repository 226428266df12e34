"""Markov dynamics on Young diagrams and the Thoma cone, in exact arithmetic."""

__version__ = "0.1.0"
