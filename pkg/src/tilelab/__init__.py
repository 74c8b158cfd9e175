"""Exact tools for translational tilings of Z and Z^2."""
from .errors import *  # noqa: F401,F403
from .lattice import (
    Lattice,
    PeriodicFunction,
    PeriodicIntFunction,
    PeriodicRationalFunction,
    PeriodicSet,
    Tile,
    canonicalize_lattice,
    convolve,
    convolve_level,
    cramer_decompose,
    discrete_derivative,
    is_tiling_of_level,
    primitive_part,
    wedge,
)

__version__ = "0.1.0"
