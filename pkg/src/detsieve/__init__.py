"""Determinantal sieving over linear matroids."""

from ._kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
