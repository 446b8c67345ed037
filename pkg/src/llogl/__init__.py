"""Multiscale grid operators on products of stratified groups.

Core pieces: group geometry (abelian and Heisenberg models), sampled
functions with group convolution, kernel families, pseudodyadic cube
systems, product maximal/area/square/Riesz operators, rectangle covering
selection, and the L log L atomic decomposition, with an experiment CLI.
"""

from .backend import IS_COMPILED
from .groups import abelian, heisenberg1, model_from_name

__version__ = "0.1.0"

__all__ = ["abelian", "heisenberg1", "model_from_name", "IS_COMPILED", "__version__"]
