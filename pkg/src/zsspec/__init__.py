"""Periodic and Dirichlet spectra of Zakharov-Shabat operators on the circle."""

from .config import DEFAULT, Tolerances
from .potential import Potential, make_focusing

__all__ = ["DEFAULT", "Tolerances", "Potential", "make_focusing"]
__version__ = "0.1.0"
