"""Single-stage, single-step positivity-preserving finite difference WENO
solver for the 1D/2D compressible Euler equations."""

from pifweno.euler import GasModel

__all__ = ["GasModel"]
__version__ = "0.1.0"
