"""Conservative semi-Lagrangian spectral-volume solver suite."""
from .element import reference_element
from .field import Field1D, Field2D
from .grid import Boundary, Grid1D
from .kernels import BACKEND as KERNEL_BACKEND
from .quadrature import gauss_rule

__all__ = ["Boundary", "Field1D", "Field2D", "Grid1D", "KERNEL_BACKEND",
           "gauss_rule", "reference_element"]
__version__ = "0.1.0"
