"""CNF encoding of avoiding-coloring existence: positive, negative, and
optional clauses, symmetry breaking, truncation, and DIMACS round trips."""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from ._jit import maybe_njit
from .coloring import Coloring
from .equation import LinearEquation, enumerate_solutions, solutions_array

__all__ = [
    "VarMap",
    "CnfFormula",
    "build_formula",
    "symmetry_clauses",
    "truncate",
    "emit_dimacs",
    "parse_dimacs",
    "decode_model",
]


@dataclass(frozen=True)
class VarMap:
    """Bijection (integer j, color i) <-> variable (j-1)*k + i."""

    n: int
    k: int

    def var(self, j: int, i: int) -> int:
        return (j - 1) * self.k + i

    def integer(self, var: int) -> int:
        return (var - 1) // self.k + 1

    def color(self, var: int) -> int:
        return (var - 1) % self.k + 1

    @property
    def num_vars(self) -> int:
        return self.n * self.k


@dataclass
class CnfFormula:
    """Clause database in flat-array form.

    lits holds signed DIMACS literals for all clauses concatenated;
    starts[i]:starts[i+1] delimits clause i. Clause order is positive,
    negative (in solution enumeration order, colors innermost), optional,
    then symmetry clauses.
    """

    nvars: int
    lits: np.ndarray
    starts: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def num_clauses(self) -> int:
        return len(self.starts) - 1

    def clause(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.lits[self.starts[i] : self.starts[i + 1]])

    def iter_clauses(self) -> Iterator[tuple[int, ...]]:
        for i in range(self.num_clauses):
            yield self.clause(i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and np.array_equal(self.starts, other.starts)
            and np.array_equal(self.lits, other.lits)
        )

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(f"p cnf {self.nvars} {self.num_clauses}\n".encode())
        h.update(np.ascontiguousarray(self.lits, dtype=np.int32).tobytes())
        h.update(np.ascontiguousarray(self.starts, dtype=np.int64).tobytes())
        return h.hexdigest()


@maybe_njit
def _negative_lits(vals: np.ndarray, lens: np.ndarray, k: int):
    """Expand per-solution deduplicated integer values into k negative
    clauses each: literals -( (v-1)*k + i ) for colors i = 1..k."""
    total = vals.size * k
    out = np.empty(total, np.int32)
    out_lens = np.empty(lens.size * k, np.int32)
    pos = 0
    off = 0
    ci = 0
    for s in range(lens.size):
        ln = lens[s]
        for i in range(1, k + 1):
            for t in range(ln):
                out[pos] = -((vals[off + t] - 1) * k + i)
                pos += 1
            out_lens[ci] = ln
            ci += 1
        off += ln
    return out, out_lens


def _dedup_sorted_rows(sols: np.ndarray):
    """Sort each solution row and drop duplicate values, returning the flat
    value stream plus per-solution lengths."""
    srt = np.sort(sols, axis=1)
    keep = np.ones(srt.shape, dtype=bool)
    keep[:, 1:] = srt[:, 1:] != srt[:, :-1]
    vals = srt[keep].astype(np.int64)
    lens = keep.sum(axis=1).astype(np.int32)
    return vals, lens


def build_formula(
    eq: LinearEquation,
    n: int,
    k: int,
    optional: bool = True,
    symmetry: bool = False,
) -> CnfFormula:
    """Build the coloring formula for eq on [1..n] with k colors.

    Contains n positive clauses, k negative clauses per solution in the box
    (duplicate literals removed at construction), n*k*(k-1)/2 optional
    clauses when optional is set, and symmetry-breaking clauses when
    symmetry is set.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    nvars = n * k
    if nvars > 2**31 - 2:
        raise OverflowError("variable ids exceed the 32-bit literal range")

    chunks: list[np.ndarray] = []
    lens: list[np.ndarray] = []

    # positive
    pos = np.arange(1, nvars + 1, dtype=np.int32)
    chunks.append(pos)
    lens.append(np.full(n, k, dtype=np.int32))

    # negative
    sols = solutions_array(eq, n)
    if sols.shape[0]:
        vals, vlens = _dedup_sorted_rows(sols)
        neg, neg_lens = _negative_lits(vals, vlens, k)
        chunks.append(neg)
        lens.append(neg_lens)
        n_negative = int(neg_lens.size)
    else:
        n_negative = 0

    # optional
    n_optional = 0
    if optional and k >= 2:
        pairs = [(i1, i2) for i1 in range(1, k + 1) for i2 in range(i1 + 1, k + 1)]
        base = (np.arange(n, dtype=np.int32) * k)[:, None, None]
        pair_arr = np.asarray(pairs, dtype=np.int32)[None, :, :]
        opt = -(base + pair_arr)
        chunks.append(opt.reshape(-1))
        n_optional = n * len(pairs)
        lens.append(np.full(n_optional, 2, dtype=np.int32))

    # symmetry
    sym = symmetry_clauses(eq, n, k) if symmetry else []
    for cl in sym:
        chunks.append(np.asarray(cl, dtype=np.int32))
        lens.append(np.asarray([len(cl)], dtype=np.int32))

    all_lens = np.concatenate(lens) if lens else np.empty(0, np.int32)
    starts = np.zeros(all_lens.size + 1, dtype=np.int64)
    np.cumsum(all_lens, out=starts[1:])
    lits = np.concatenate(chunks) if chunks else np.empty(0, np.int32)
    meta = {
        "coeffs": eq.coeffs,
        "equation": str(eq),
        "n": n,
        "k": k,
        "optional": bool(optional and k >= 2),
        "symmetry": bool(symmetry),
        "groups": {
            "positive": n,
            "negative": n_negative,
            "optional": n_optional,
            "symmetry": len(sym),
        },
    }
    return CnfFormula(nvars=nvars, lits=lits.astype(np.int32), starts=starts, meta=meta)


def symmetry_clauses(eq: LinearEquation, n: int, k: int) -> list[tuple[int, ...]]:
    """Symmetry-breaking clauses for the coloring formula.

    Finds the first solution in enumeration order that uses exactly two
    distinct integers; the repeated integer is pinned to color 1 and the
    other to color 2 (sound because they must receive different colors in
    any avoiding coloring). For k >= 4, colors 3..k are additionally
    canonicalized by first use: color i may first appear only after color
    i-1 has appeared, for consecutive i >= 4.

    Returns [] when no suitable solution exists within [1..n] or k < 2.
    """
    if k < 2:
        return []
    vm = VarMap(n, k)
    units: list[tuple[int, ...]] = []
    for sol in enumerate_solutions(eq, n):
        distinct = set(sol)
        if len(distinct) == 2:
            j1 = next(v for v in distinct if sol.count(v) >= 2)
            j2 = next(v for v in distinct if v != j1)
            units = [(vm.var(j1, 1),), (vm.var(j2, 2),)]
            break
    if not units:
        return []
    clauses = list(units)
    for i in range(4, k + 1):
        for j in range(1, n + 1):
            cl = (-vm.var(j, i),) + tuple(vm.var(jp, i - 1) for jp in range(1, j))
            clauses.append(cl)
    return clauses


def truncate(formula: CnfFormula, m: int) -> CnfFormula:
    """Restrict the formula to [1..m] by deleting every clause mentioning an
    integer above m. Equals build_formula at m up to clause order."""
    n = formula.meta["n"]
    k = formula.meta["k"]
    if m < 1:
        raise ValueError("m must be >= 1")
    if m >= n:
        raise ValueError("truncation bound must be below the formula's n")
    lit_ints = (np.abs(formula.lits) - 1) // k + 1
    clause_max = np.maximum.reduceat(lit_ints, formula.starts[:-1])
    keep = clause_max <= m
    lens = np.diff(formula.starts)
    keep_lits = np.repeat(keep, lens)
    new_lits = formula.lits[keep_lits]
    new_lens = lens[keep]
    starts = np.zeros(new_lens.size + 1, dtype=np.int64)
    np.cumsum(new_lens, out=starts[1:])
    meta = dict(formula.meta)
    meta["n"] = m
    groups = dict(formula.meta.get("groups", {}))
    if groups:
        bounds = np.cumsum(
            [0]
            + [groups.get(g, 0) for g in ("positive", "negative", "optional", "symmetry")]
        )
        names = ("positive", "negative", "optional", "symmetry")
        meta["groups"] = {
            name: int(keep[bounds[gi] : bounds[gi + 1]].sum())
            for gi, name in enumerate(names)
        }
    return CnfFormula(nvars=m * k, lits=new_lits, starts=starts, meta=meta)


def emit_dimacs(formula: CnfFormula, sink, comments: Optional[list[str]] = None) -> None:
    """Write the formula to a text sink in DIMACS CNF format,
    byte-deterministically."""
    for line in comments or []:
        sink.write(f"c {line}\n")
    sink.write(f"p cnf {formula.nvars} {formula.num_clauses}\n")
    lits = formula.lits
    starts = formula.starts
    chunk = 20000
    for lo in range(0, formula.num_clauses, chunk):
        hi = min(lo + chunk, formula.num_clauses)
        parts = []
        for i in range(lo, hi):
            parts.append(
                " ".join(map(str, lits[starts[i] : starts[i + 1]])) + " 0"
            )
        sink.write("\n".join(parts) + "\n")


def dimacs_bytes(formula: CnfFormula, comments: Optional[list[str]] = None) -> bytes:
    buf = io.StringIO()
    emit_dimacs(formula, buf, comments)
    return buf.getvalue().encode()


def parse_dimacs(source) -> CnfFormula:
    """Parse DIMACS CNF text (a string or text file object)."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    nvars = None
    declared = None
    tokens: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            nvars, declared = int(parts[2]), int(parts[3])
            continue
        tokens.append(line)
    if nvars is None:
        raise ValueError("missing 'p cnf' header")
    words = " ".join(tokens).split()
    flat = np.array(words, dtype=np.int64) if words else np.empty(0, np.int64)
    ends = np.flatnonzero(flat == 0)
    if flat.size and (ends.size == 0 or ends[-1] != flat.size - 1):
        raise ValueError("clauses must be 0-terminated")
    lits = flat[flat != 0].astype(np.int32)
    lens = np.diff(np.concatenate(([-1], ends))) - 1
    if declared is not None and lens.size != declared:
        raise ValueError(
            f"header declares {declared} clauses but {lens.size} were found"
        )
    starts = np.zeros(lens.size + 1, dtype=np.int64)
    np.cumsum(lens, out=starts[1:])
    return CnfFormula(nvars=nvars, lits=lits, starts=starts, meta={})


def decode_model(model: np.ndarray, n: int, k: int) -> Coloring:
    """Decode a full assignment (bool array indexed by variable, entry 0
    unused) into a coloring: integer j gets the least color i with the
    corresponding variable true."""
    if model.shape[0] < n * k + 1:
        raise ValueError("model does not assign every variable")
    table = model[1 : n * k + 1].reshape(n, k)
    has = table.any(axis=1)
    if not has.all():
        j = int(np.flatnonzero(~has)[0]) + 1
        raise ValueError(f"integer {j} has no color in the model")
    colors = table.argmax(axis=1) + 1
    return Coloring(n=n, k=k, colors=tuple(int(c) for c in colors))
