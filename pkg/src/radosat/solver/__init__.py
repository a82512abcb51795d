"""SAT solving: internal CDCL kernel and external solver orchestration."""

from .api import (
    BackendConfig,
    BackendError,
    BackendParseError,
    SolverVerdict,
    model_satisfies,
    solve,
    solve_external,
)

__all__ = [
    "BackendConfig",
    "BackendError",
    "BackendParseError",
    "SolverVerdict",
    "model_satisfies",
    "solve",
    "solve_external",
]
