"""Signed densities, symbols and pseudo-random-walk limits for space-fractional heat-type equations."""

__version__ = "0.1.0"
