"""radosat: Rado numbers, degrees of regularity, and parametrized CNF
certificates for linear homogeneous equations, via SAT."""

from .coloring import Coloring, Witness, verify_coloring
from .encoder import CnfFormula, VarMap, build_formula, decode_model, parse_dimacs, truncate
from .equation import EquationError, LinearEquation, parse_equation
from .solver import BackendConfig, SolverVerdict, solve

__version__ = "0.1.0"

__all__ = [
    "Coloring",
    "Witness",
    "verify_coloring",
    "CnfFormula",
    "VarMap",
    "build_formula",
    "decode_model",
    "parse_dimacs",
    "truncate",
    "EquationError",
    "LinearEquation",
    "parse_equation",
    "BackendConfig",
    "SolverVerdict",
    "solve",
    "__version__",
]
