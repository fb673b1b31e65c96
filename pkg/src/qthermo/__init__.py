"""Entropy production through energy-conserving entanglement, in finite dimensions."""

__version__ = "0.1.0"
