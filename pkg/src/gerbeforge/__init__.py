"""Exact computations with torsor and gerbe cocycles, cup products and tame symbols."""

__version__ = "0.1.0"
