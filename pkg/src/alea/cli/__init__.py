"""Command-line tool and interactive session."""

from .main import main

__all__ = ["main"]
