"""Command-line surface: compute Rado numbers, degrees of regularity, CNF
generation and solving, coloring verification, parametric family proofs, and
the published-table reproduction harness."""

from __future__ import annotations

import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import click

from .coloring import Coloring, verify_coloring
from .dor import compute_dor
from .encoder import build_formula, dimacs_bytes, parse_dimacs
from .equation import parse_equation
from .search import (
    SearchConfig,
    check_table_entry,
    family_equation,
    load_tables,
    rado_number,
)
from .solver import BackendConfig, solve as solve_formula
from .symbolic import (
    build_parametric_formula,
    find_polynomials,
    instantiate_and_check,
    shipped_family,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 3
EXIT_MISMATCH = 4


def _backend_config(backend: str | None, budget: float) -> BackendConfig:
    spec = backend or os.environ.get("RADOSAT_BACKEND", "internal")
    return BackendConfig.from_spec(spec, time_budget=budget)


def _store_artifact(outdir: Path, stem: str, suffix: str, data: bytes) -> dict:
    outdir.mkdir(parents=True, exist_ok=True)
    digest = hashlib.sha256(data).hexdigest()
    path = outdir / f"{stem}-{digest[:16]}{suffix}"
    path.write_bytes(data)
    return {"path": str(path), "sha256": digest}


def _write_manifest(outdir: Path | None, manifest: dict, out: str | None):
    manifest["finished"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    text = json.dumps(manifest, indent=1)
    if out:
        Path(out).write_text(text)
    elif outdir:
        digest = hashlib.sha256(text.encode()).hexdigest()[:16]
        (outdir / f"manifest-{digest}.json").write_text(text)
    click.echo(text)


def _manifest(command: str, **params) -> dict:
    return {
        "command": command,
        "parameters": params,
        "started": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "artifacts": {},
    }


@click.group()
def main():
    """Rado numbers, degrees of regularity, and parametrized CNF proofs for
    linear homogeneous equations."""


@main.command()
@click.option("--equation", required=True, help="Equation, e.g. 'x+y=z' or '3(x-y)=2z'.")
@click.option("--colors", "k", type=int, required=True)
@click.option("--lower", type=int, default=4, show_default=True)
@click.option("--upper", type=int, default=64, show_default=True)
@click.option("--growth", type=int, default=4, show_default=True)
@click.option("--backend", default=None, help="internal or external:PATH.")
@click.option("--budget", type=float, default=math.inf)
@click.option("--no-symmetry", is_flag=True)
@click.option("--expect", default=None, help="Expected value or 'inf' (CI check).")
@click.option("--out", default=None, help="Write the result JSON here.")
@click.option("--outdir", default=None, help="Directory for certificate artifacts.")
def compute(equation, k, lower, upper, growth, backend, budget, no_symmetry,
            expect, out, outdir):
    """Compute the k-color Rado number of an equation, with certificates."""
    eq = parse_equation(equation)
    cfg = SearchConfig(
        lower0=lower, upper0=upper, growth=growth, budget=budget,
        backend=_backend_config(backend, budget), symmetry=not no_symmetry,
    )
    outcome = rado_number(eq, k, cfg)
    manifest = _manifest("compute", equation=equation, k=k)
    manifest["result"] = outcome.to_json()
    outpath = Path(outdir) if outdir else None
    if outpath and outcome.is_finite and outcome.lower_certificate:
        manifest["artifacts"]["coloring"] = _store_artifact(
            outpath, "coloring", ".json",
            outcome.lower_certificate.to_json().encode(),
        )
    _write_manifest(outpath, manifest, out)
    if outcome.status == "unknown":
        sys.exit(EXIT_BUDGET)
    if expect is not None:
        want = "inf" if expect == "inf" else int(expect)
        got = "inf" if outcome.is_infinite else outcome.value
        if got != want:
            click.echo(f"expected {want}, got {got}", err=True)
            sys.exit(EXIT_MISMATCH)
    sys.exit(EXIT_OK)


@main.command()
@click.option("--equation", required=True)
@click.option("--budget", type=float, default=1800.0, show_default=True)
@click.option("--expect", default=None)
@click.option("--out", default=None)
def dor(equation, budget, expect, out):
    """Degree of regularity of a 3-variable equation, with derivation."""
    eq = parse_equation(equation)
    result = compute_dor(eq, SearchConfig(budget=budget))
    manifest = _manifest("dor", equation=equation)
    manifest["result"] = result.to_json()
    _write_manifest(None, manifest, out)
    if result.value is None:
        sys.exit(EXIT_BUDGET)
    if expect is not None:
        want = "inf" if expect == "inf" else int(expect)
        got = "inf" if result.value == math.inf else result.value
        if got != want:
            click.echo(f"expected {want}, got {got}", err=True)
            sys.exit(EXIT_MISMATCH)
    sys.exit(EXIT_OK)


@main.command("gen-cnf")
@click.option("--equation", required=True)
@click.option("--n", type=int, required=True)
@click.option("--colors", "k", type=int, required=True)
@click.option("--no-optional", is_flag=True)
@click.option("--symmetry", is_flag=True)
@click.option("--out", required=True)
def gen_cnf(equation, n, k, no_optional, symmetry, out):
    """Write the coloring formula for [1..n] with k colors as DIMACS CNF."""
    eq = parse_equation(equation)
    formula = build_formula(eq, n, k, optional=not no_optional, symmetry=symmetry)
    comments = [
        f"equation: {eq}",
        f"n: {n}  colors: {k}  optional: {not no_optional}  symmetry: {symmetry}",
        f"groups: {formula.meta['groups']}",
    ]
    Path(out).write_bytes(dimacs_bytes(formula, comments))
    click.echo(
        f"wrote {out}: {formula.nvars} vars, {formula.num_clauses} clauses"
    )
    sys.exit(EXIT_OK)


@main.command("solve")
@click.option("--cnf", required=True, type=click.Path(exists=True))
@click.option("--backend", default=None)
@click.option("--budget", type=float, default=math.inf)
@click.option("--out", default=None)
def solve_cmd(cnf, backend, budget, out):
    """Solve a DIMACS CNF file."""
    with open(cnf) as fh:
        formula = parse_dimacs(fh)
    verdict = solve_formula(formula, _backend_config(backend, budget))
    manifest = _manifest("solve", cnf=cnf)
    manifest["result"] = {"status": verdict.status, **verdict.stats_dict()}
    if verdict.is_sat:
        manifest["result"]["model"] = [
            (i if verdict.model[i] else -i) for i in range(1, formula.nvars + 1)
        ]
    _write_manifest(None, manifest, out)
    sys.exit(EXIT_BUDGET if verdict.status == "UNKNOWN" else EXIT_OK)


@main.command()
@click.option("--equation", required=True)
@click.option("--coloring", "coloring_path", required=True,
              type=click.Path(exists=True))
def verify(equation, coloring_path):
    """Check a coloring JSON file against an equation."""
    eq = parse_equation(equation)
    coloring = Coloring.from_json(Path(coloring_path).read_text())
    witness = verify_coloring(eq, coloring)
    if witness is None:
        click.echo("Valid: no monochromatic solution")
        sys.exit(EXIT_OK)
    click.echo(
        f"Witness: tuple {witness.tuple_} is monochromatic in color "
        f"{witness.color}"
    )
    sys.exit(EXIT_MISMATCH)


@main.command()
@click.option("--family-id", required=True,
              help="One of the shipped families (see data/families.json).")
@click.option("--colors", "k", type=int, default=3, show_default=True)
@click.option("--iterations", type=int, default=3, show_default=True)
@click.option("--instantiate", default=None,
              help="Comma-separated assignments, e.g. 'm=10' or 'a=16,b=3'.")
@click.option("--budget", type=float, default=600.0, show_default=True)
@click.option("--out", default=None)
def family(family_id, k, iterations, instantiate, budget, out):
    """Regenerate and solve a parametrized family formula."""
    fam, s0, g0 = shipped_family(family_id)
    s, c = find_polynomials(fam, s0, g0, iterations)
    pf = build_parametric_formula(fam, k, s, c)
    verdict = solve_formula(pf.cnf, BackendConfig(time_budget=budget))
    manifest = _manifest(
        "family", family=family_id, k=k, iterations=iterations
    )
    manifest["result"] = {
        "atoms": len(pf.atoms),
        "solutions": len(pf.solutions),
        "clauses": pf.cnf.num_clauses,
        "status": verdict.status,
        "bound_polynomial": str(fam.bound),
        "atom_list": [str(p) for p in pf.atoms],
    }
    if instantiate:
        values = {}
        for part in instantiate.split(","):
            name, _, val = part.partition("=")
            values[name.strip()] = int(val)
        report = instantiate_and_check(pf, values)
        manifest["result"]["instantiation"] = {
            "values": values, "ok": report.ok, "bound": report.bound,
            "failure": report.failure,
        }
    _write_manifest(None, manifest, out)
    if verdict.status == "UNKNOWN":
        sys.exit(EXIT_BUDGET)
    sys.exit(EXIT_OK)


@main.command()
@click.option("--max-n", type=int, default=300, show_default=True,
              help="Skip cells whose expected Rado number exceeds this.")
@click.option("--table", "table_id", default=None, help="Restrict to one table.")
@click.option("--kind", type=click.Choice(["rado", "dor"]), default=None)
@click.option("--budget", type=float, default=120.0, show_default=True,
              help="Budget per cell in seconds.")
@click.option("--out", default=None)
def tables(max_n, table_id, kind, budget, out):
    """Recompute published table cells and report pass/fail."""
    manifest = _manifest("tables", max_n=max_n, table=table_id)
    rows = []
    failures = 0
    cfg = SearchConfig(budget=budget)
    for table in load_tables()["tables"]:
        if table_id and table["id"] != table_id:
            continue
        if kind and table["kind"] != kind:
            continue
        for entry in table["entries"]:
            exp = entry["expected"]
            if table["kind"] == "rado" and exp != "inf" and exp > max_n:
                continue
            check = check_table_entry(table["id"], entry["params"], cfg)
            rows.append(
                {"table": table["id"], "params": check.params,
                 "expected": check.expected, "actual": check.actual,
                 "passed": check.passed}
            )
            if not check.passed:
                failures += 1
            status = "pass" if check.passed else "FAIL"
            click.echo(
                f"{status} {table['id']} {entry['params']} "
                f"expected={check.expected} actual={check.actual}", err=True
            )
    manifest["result"] = {
        "cells": len(rows), "failures": failures, "rows": rows,
    }
    _write_manifest(None, manifest, out)
    sys.exit(EXIT_MISMATCH if failures else EXIT_OK)


if __name__ == "__main__":
    main()
