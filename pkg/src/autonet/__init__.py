"""Hierarchical autonomous-network agents over a simulated optical domain."""

__version__ = "0.1.0"
