"""Solver front end: verdicts, backend configuration, internal CDCL entry
point, and external DIMACS solver orchestration."""

from __future__ import annotations

import math
import os
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .._jit import USE_NUMBA
from ..encoder import CnfFormula, dimacs_bytes
from . import kernel

__all__ = [
    "SolverVerdict",
    "BackendConfig",
    "BackendError",
    "BackendParseError",
    "solve",
    "solve_external",
    "model_satisfies",
]


class BackendError(RuntimeError):
    """External solver failed to produce a usable verdict."""


class BackendParseError(BackendError):
    """External solver produced output we could not interpret."""


@dataclass
class SolverVerdict:
    status: str  # "SAT" | "UNSAT" | "UNKNOWN"
    model: Optional[np.ndarray] = None  # bool array indexed by DIMACS var; [0] unused
    backend: str = "internal"
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learned: int = 0
    wall_time: float = 0.0

    @property
    def is_sat(self) -> bool:
        return self.status == "SAT"

    @property
    def is_unsat(self) -> bool:
        return self.status == "UNSAT"

    def stats_dict(self) -> dict:
        return {
            "backend": self.backend,
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
            "restarts": self.restarts,
            "learned": self.learned,
            "wall_time": self.wall_time,
        }


@dataclass
class BackendConfig:
    kind: str = "internal"  # "internal" or "external"
    path: Optional[str] = None
    args: tuple[str, ...] = ()
    time_budget: float = math.inf  # seconds
    max_conflicts: int = -1
    seed: int = 0  # reserved; the internal backend is deterministic

    def __post_init__(self):
        if self.time_budget <= 0:
            raise ValueError("time budget must be positive")

    @classmethod
    def from_spec(cls, spec: str, time_budget: float = math.inf) -> "BackendConfig":
        """Parse 'internal' or 'external:/path/to/solver [args...]'."""
        if spec == "internal":
            return cls(kind="internal", time_budget=time_budget)
        if spec.startswith("external:"):
            parts = spec[len("external:") :].split()
            if not parts:
                raise ValueError("external backend needs a path")
            return cls(
                kind="external",
                path=parts[0],
                args=tuple(parts[1:]),
                time_budget=time_budget,
            )
        raise ValueError(f"unknown backend spec {spec!r}")


def _internal_lits(formula: CnfFormula) -> np.ndarray:
    lits = formula.lits.astype(np.int64)
    enc = np.where(lits > 0, 2 * (lits - 1), 2 * (-lits - 1) + 1)
    return enc.astype(np.int32)


def _clean_clauses(formula: CnfFormula) -> CnfFormula:
    """Drop duplicate literals and tautological clauses (needed for formulas
    parsed from arbitrary DIMACS; encoder output is already clean)."""
    clauses = []
    for cl in formula.iter_clauses():
        s = sorted(set(cl), key=abs)
        if any(-l in s for l in s):
            continue
        clauses.append(s)
    lens = np.array([len(c) for c in clauses], dtype=np.int64)
    starts = np.zeros(lens.size + 1, dtype=np.int64)
    np.cumsum(lens, out=starts[1:])
    flat = np.array(
        [l for c in clauses for l in c], dtype=np.int32
    ) if clauses else np.empty(0, np.int32)
    meta = dict(formula.meta)
    meta["clean"] = True
    return CnfFormula(nvars=formula.nvars, lits=flat, starts=starts, meta=meta)


def model_satisfies(formula: CnfFormula, model: np.ndarray) -> bool:
    """Check a full assignment against every clause (vectorized)."""
    if model.shape[0] < formula.nvars + 1:
        return False
    lits = formula.lits
    truth = np.where(lits > 0, model[np.abs(lits)], ~model[np.abs(lits)])
    if formula.num_clauses == 0:
        return True
    sat_per_clause = np.maximum.reduceat(truth.astype(np.int8), formula.starts[:-1])
    return bool(sat_per_clause.min() == 1)


def solve(formula: CnfFormula, cfg: Optional[BackendConfig] = None) -> SolverVerdict:
    """Decide satisfiability of the formula.

    SAT models are revalidated clause by clause before being returned,
    whatever the backend. A budget exhaustion yields status UNKNOWN."""
    cfg = cfg or BackendConfig()
    if cfg.kind == "external":
        if not cfg.path:
            raise ValueError("external backend requires a path")
        return solve_external(formula, cfg.path, cfg.args, cfg.time_budget)

    work = formula
    if not formula.meta.get("coeffs") and not formula.meta.get("clean"):
        work = _clean_clauses(formula)
    t0 = time.perf_counter()
    deadline = (
        kernel.monotonic_seconds() + cfg.time_budget
        if math.isfinite(cfg.time_budget)
        else math.inf
    )
    status, model_raw, stats = kernel.cdcl_solve(
        work.nvars,
        _internal_lits(work),
        work.starts.astype(np.int64),
        deadline,
        cfg.max_conflicts,
    )
    wall = time.perf_counter() - t0
    backend = "internal-numba" if USE_NUMBA else "internal-python"
    verdict = SolverVerdict(
        status={kernel.STATUS_SAT: "SAT", kernel.STATUS_UNSAT: "UNSAT"}.get(
            status, "UNKNOWN"
        ),
        backend=backend,
        conflicts=int(stats[0]),
        decisions=int(stats[1]),
        propagations=int(stats[2]),
        restarts=int(stats[3]),
        learned=int(stats[4]),
        wall_time=wall,
    )
    if verdict.is_sat:
        model = np.zeros(formula.nvars + 1, dtype=bool)
        model[1:] = model_raw.astype(bool)
        if not model_satisfies(formula, model):
            raise AssertionError("internal backend returned a non-model")
        verdict.model = model
    return verdict


def solve_external(
    formula: CnfFormula,
    path: str,
    args: tuple[str, ...] = (),
    time_budget: float = math.inf,
) -> SolverVerdict:
    """Run an external DIMACS solver following SAT-competition output
    conventions ('s SATISFIABLE'/'s UNSATISFIABLE' plus 'v' value lines)."""
    if not (os.path.isfile(path) and os.access(path, os.X_OK)):
        raise BackendError(f"solver executable not found: {path}")
    t0 = time.perf_counter()
    with tempfile.NamedTemporaryFile(suffix=".cnf", delete=False) as tmp:
        tmp.write(dimacs_bytes(formula))
        tmp_path = tmp.name
    try:
        timeout = time_budget if math.isfinite(time_budget) else None
        try:
            proc = subprocess.run(
                [path, *args, tmp_path],
                capture_output=True,
                text=True,
                timeout=timeout,
            )
        except subprocess.TimeoutExpired:
            return SolverVerdict(
                status="UNKNOWN",
                backend=f"external:{path}",
                wall_time=time.perf_counter() - t0,
            )
        status = None
        values: list[int] = []
        for line in proc.stdout.splitlines():
            if line.startswith("s "):
                word = line[2:].strip()
                if word == "SATISFIABLE":
                    status = "SAT"
                elif word == "UNSATISFIABLE":
                    status = "UNSAT"
                elif word.upper() in ("UNKNOWN", "INDETERMINATE"):
                    status = "UNKNOWN"
            elif line.startswith("v ") or line == "v":
                try:
                    values.extend(int(tok) for tok in line[2:].split())
                except ValueError as exc:
                    raise BackendParseError(
                        f"bad value line {line!r}\n--- raw output ---\n{proc.stdout}"
                    ) from exc
        if status is None:
            raise BackendParseError(
                f"no status line in solver output (exit {proc.returncode})"
                f"\n--- raw output ---\n{proc.stdout}\n{proc.stderr}"
            )
        wall = time.perf_counter() - t0
        verdict = SolverVerdict(
            status=status, backend=f"external:{path}", wall_time=wall
        )
        if status == "SAT":
            model = np.zeros(formula.nvars + 1, dtype=bool)
            for v in values:
                if v > 0 and v <= formula.nvars:
                    model[v] = True
            if not model_satisfies(formula, model):
                raise BackendParseError("external model fails revalidation")
            verdict.model = model
        return verdict
    finally:
        os.unlink(tmp_path)
