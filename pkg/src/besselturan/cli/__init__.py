"""
Command-line interface for besselturan.
"""

from besselturan.cli.commands import cli

__all__ = ["cli"]
