"""Elliptic-integral zero counting and Melnikov-function decomposition toolkit."""

__version__ = "0.1.0"
