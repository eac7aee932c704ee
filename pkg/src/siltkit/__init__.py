"""Silting mutation and derived-equivalence toolkit for finite-dimensional algebras over F_p."""

__version__ = "0.1.0"

from .linalg import DEFAULT_PRIME  # noqa: E402
from .quiver import BoundQuiverAlgebra, Quiver, build_algebra  # noqa: E402

__all__ = ["DEFAULT_PRIME", "BoundQuiverAlgebra", "Quiver", "build_algebra", "__version__"]
