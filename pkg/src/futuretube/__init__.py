"""Numerics for relativistic coherent states on the complex future tube."""
from .geometry import ComplexInterval, GeometryError
from .massshell import MassShellGrid, build_grid
from .states import FundamentalState, WaveFunction

__version__ = "0.1.0"

__all__ = ["ComplexInterval", "GeometryError", "MassShellGrid", "build_grid",
           "FundamentalState", "WaveFunction", "__version__"]
