"""rydis: blockade-Hamiltonian annealing simulation, independent-set lattice
quantum walks, analytic leakage bounds, and classical baselines for the
independent-set problem."""

from . import bounds, dynamics, graph, hilbert, median
from .errors import CapacityError, ConvergenceError, GraphFormatError, RydisError

__version__ = "0.1.0"

__all__ = [
    "bounds",
    "dynamics",
    "graph",
    "hilbert",
    "median",
    "CapacityError",
    "ConvergenceError",
    "GraphFormatError",
    "RydisError",
    "__version__",
]
