"""Trapped-ion vibrational qubit simulator beyond the rotating wave approximation."""

__version__ = "0.3.0"
