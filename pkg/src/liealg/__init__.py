"""Numerics for SU(2) and SU(1,1) coherent states, their entangled
two-particle variants, number-diagonal dynamics and entanglement measures."""

from .algebra import IrrepLabel, mat_exp, su2_generators, su11_generators
from .dynamics import NumberHamiltonian, evolve, kerr_cross
from .entangled import BipartiteState, product, qft_state, superpose
from .errors import LieAlgError
from .measures import MeasureReport, measure, schmidt
from .states import StateVector

__all__ = [
    "IrrepLabel", "mat_exp", "su2_generators", "su11_generators", "NumberHamiltonian",
    "evolve", "kerr_cross", "BipartiteState", "product", "qft_state", "superpose",
    "LieAlgError", "MeasureReport", "measure", "schmidt", "StateVector",
]

__version__ = "0.1.0"
