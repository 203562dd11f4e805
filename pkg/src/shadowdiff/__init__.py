"""Differential symbolic execution of change-annotated programs."""

__version__ = "0.1.0"
