"""Invariant-guided repair of performance bugs in a small imperative language."""

__version__ = "0.1.0"
