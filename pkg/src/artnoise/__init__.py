"""Artificial-noise secrecy for MIMO wiretap channels."""

__version__ = "0.1.0"
