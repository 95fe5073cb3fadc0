"""Exact quantum cluster algebra computations."""

from __future__ import annotations

__version__ = "0.1.0"
