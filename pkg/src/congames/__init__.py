"""Concurrent games and strategies on finite event structures."""

__version__ = "0.1.0"
