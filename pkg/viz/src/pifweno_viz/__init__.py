"""Rendering tools for pifweno solver outputs (file-format coupling only)."""

__version__ = "0.1.0"
