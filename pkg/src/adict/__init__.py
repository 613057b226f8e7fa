"""Exact computations of derived torsion and completion functors, adic Hochschild
(co)homology and the checks relating them, at desk scale."""

__version__ = "0.1.0"

from .linalg import BACKEND  # noqa: E402
