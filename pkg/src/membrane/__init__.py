"""Bounds for the first nontrivial Neumann eigenvalue of planar domains given by conformal maps."""
__version__ = "0.1.0"

from .maps import BaseDomain, Family, MapSpec  # noqa: E402
from .quad import QuadConfig  # noqa: E402

__all__ = ["BaseDomain", "Family", "MapSpec", "QuadConfig", "__version__"]
