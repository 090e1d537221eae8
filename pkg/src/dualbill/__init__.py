"""Exact algebra for integrable dual billiards on the parabola and their
projective duals."""
from __future__ import annotations

from .errors import BilliardError

__version__ = "0.1.0"

__all__ = ["BilliardError", "__version__"]
