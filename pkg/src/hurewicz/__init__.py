"""Finite-depth machinery for Hurewicz-style tests of potential Baire classes."""

__version__ = "0.1.0"
