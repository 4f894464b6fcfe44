"""Divergence Lab - Simulate conclusion divergence under shared observations."""

__version__ = "0.1.0"
