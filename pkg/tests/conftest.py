"""Shared oracles for the test suite.

The brute-force routines here are deliberately independent of the encoder
and solver: they enumerate colorings (with backtracking over a fixed
variable order) or assignments directly, so they can serve as ground truth.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from radosat.equation import LinearEquation, enumerate_solutions


def brute_force_colorable(eq: LinearEquation, n: int, k: int) -> bool:
    """True iff some k-coloring of [1..n] avoids monochromatic solutions.

    Exhaustive search by backtracking: integers are colored in order 1..n
    and a partial coloring is rejected as soon as a solution whose largest
    coordinate was just colored becomes monochromatic. Every coloring is
    covered, so this is an exact k^n scan with pruning.
    """
    if n == 0:
        return True
    # solutions indexed by their maximum coordinate
    by_max: list[list[tuple[int, ...]]] = [[] for _ in range(n + 1)]
    for sol in enumerate_solutions(eq, n):
        by_max[max(sol)].append(sol)

    colors = [0] * (n + 1)

    def extend(i: int) -> bool:
        if i > n:
            return True
        # the first integer may be pinned to color 1 by symmetry
        choices = range(1, 2 if i == 1 else k + 1)
        for c in choices:
            colors[i] = c
            ok = True
            for sol in by_max[i]:
                if all(colors[v] == c for v in sol):
                    ok = False
                    break
            if ok and extend(i + 1):
                return True
        colors[i] = 0
        return False

    return extend(1)


def brute_force_rado(eq: LinearEquation, k: int, n_max: int = 60):
    """Least n with no avoiding k-coloring, or None if none up to n_max."""
    for n in range(1, n_max + 1):
        if not brute_force_colorable(eq, n, k):
            return n
    return None


def brute_force_sat(nvars: int, clauses: list[tuple[int, ...]]) -> bool:
    """Exact satisfiability by scanning all 2^nvars assignments (vectorized)."""
    assignments = np.arange(1 << nvars, dtype=np.uint32)
    alive = np.ones(assignments.shape, dtype=bool)
    for clause in clauses:
        sat = np.zeros(assignments.shape, dtype=bool)
        for lit in clause:
            bit = (assignments >> (abs(lit) - 1)) & 1
            sat |= bit.astype(bool) if lit > 0 else ~bit.astype(bool)
        alive &= sat
        if not alive.any():
            return False
    return bool(alive.any())


@pytest.fixture(scope="session")
def schur_eq():
    from radosat.equation import parse_equation

    return parse_equation("x+y=z")
