"""CLI module for Divergence Lab."""

from divergence_lab.cli.main import app

__all__ = ["app"]
