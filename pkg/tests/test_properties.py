"""Cross-cutting invariants of the encoding/solving pipeline, checked with
randomized equations and sizes."""

import pytest
from hypothesis import given, settings, strategies as st

from radosat.coloring import verify_coloring
from radosat.encoder import build_formula, decode_model, truncate
from radosat.equation import LinearEquation, parse_equation
from radosat.solver import solve

from conftest import brute_force_colorable

EQ_TEXTS = ["x+y=z", "x-y=2z", "2x+y=3z", "x+2y=4z", "2(x+y)=3z", "1,1,-4"]

equations = st.sampled_from(EQ_TEXTS).map(parse_equation)

random_equations = st.tuples(
    st.integers(-4, 4).filter(bool),
    st.integers(-4, 4).filter(bool),
    st.integers(-4, 4).filter(bool),
).map(lambda c: LinearEquation(coeffs=c, display_form=None))


class TestTruncation:
    @given(eq=equations, n=st.integers(2, 14), k=st.integers(1, 4),
           data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_truncation_equals_direct_build(self, eq, n, k, data):
        m = data.draw(st.integers(1, n - 1))
        big = build_formula(eq, n, k)
        assert truncate(big, m).fingerprint() == build_formula(eq, m, k).fingerprint()


class TestOptionalClauses:
    @given(eq=equations, n=st.integers(1, 14), k=st.integers(1, 3))
    @settings(max_examples=40, deadline=None)
    def test_optional_clauses_preserve_satisfiability(self, eq, n, k):
        with_opt = solve(build_formula(eq, n, k, optional=True)).status
        without = solve(build_formula(eq, n, k, optional=False)).status
        assert with_opt == without


class TestSymmetryClauses:
    @given(eq=equations, n=st.integers(1, 10), k=st.integers(3, 4))
    @settings(max_examples=30, deadline=None)
    def test_equisatisfiable_with_brute_force(self, eq, n, k):
        plain = brute_force_colorable(eq, n, k)
        broken = solve(build_formula(eq, n, k, symmetry=True)).status
        assert broken == ("SAT" if plain else "UNSAT")


class TestModelDecoding:
    @given(eq=equations, n=st.integers(1, 14), k=st.integers(1, 3))
    @settings(max_examples=40, deadline=None)
    def test_decoded_model_verifies(self, eq, n, k):
        verdict = solve(build_formula(eq, n, k))
        if verdict.is_sat:
            coloring = decode_model(verdict.model, n, k)
            assert verify_coloring(eq, coloring) is None


class TestMonotonicity:
    @given(eq=random_equations, k=st.integers(1, 3), n=st.integers(1, 12))
    @settings(max_examples=40, deadline=None)
    def test_unsat_is_monotone_in_n(self, eq, k, n):
        # if [1..n] forces a monochromatic solution, so does every larger box
        here = solve(build_formula(eq, n, k)).status
        bigger = solve(build_formula(eq, n + 3, k)).status
        assert not (here == "UNSAT" and bigger == "SAT")

    @given(eq=random_equations, n=st.integers(1, 12))
    @settings(max_examples=40, deadline=None)
    def test_sat_is_monotone_in_k(self, eq, n):
        # extra colors never hurt
        two = solve(build_formula(eq, n, 2)).status
        three = solve(build_formula(eq, n, 3)).status
        assert not (two == "SAT" and three == "UNSAT")
