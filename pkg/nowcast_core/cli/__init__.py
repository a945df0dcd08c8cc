"""Command-line front end (``nowcast``)."""

from nowcast_core.cli.main import build_parser, main

__all__ = ["main", "build_parser"]
