import math

import pytest
from hypothesis import given, settings, strategies as st

from radosat.equation import (
    EquationError,
    LinearEquation,
    base_valuation,
    enumerate_solutions,
    is_regular,
    is_two_regular,
    padic_valuation,
    parse_equation,
    solutions_array,
)


class TestParse:
    @pytest.mark.parametrize(
        "text,coeffs",
        [
            ("x+y=z", (1, 1, -1)),
            ("x-y=2z", (1, -1, -2)),
            ("3(x-y)=2z", (3, -3, -2)),
            ("2(x+y)=3z", (2, 2, -3)),
            ("2x+3y=5z", (2, 3, -5)),
            ("x+2y=4z", (1, 2, -4)),
            ("1,1,-4", (1, 1, -4)),
            ("2,-3,7", (2, -3, 7)),
        ],
    )
    def test_forms(self, text, coeffs):
        assert parse_equation(text).coeffs == coeffs

    @pytest.mark.parametrize("bad", ["", "x+y", "0,0,0", "x+y=0z", "=z"])
    def test_rejects(self, bad):
        with pytest.raises(EquationError):
            parse_equation(bad)

    def test_str_roundtrip(self):
        eq = parse_equation("3(x-y)=2z")
        assert parse_equation(str(eq)).coeffs == eq.coeffs


class TestSolutions:
    def test_schur_small(self):
        eq = parse_equation("x+y=z")
        sols = set(enumerate_solutions(eq, 4))
        assert sols == {(1, 1, 2), (1, 2, 3), (2, 1, 3), (1, 3, 4),
                        (3, 1, 4), (2, 2, 4)}

    @pytest.mark.parametrize("text", ["x+y=z", "x-y=2z", "2x+3y=5z", "1,1,-4"])
    @pytest.mark.parametrize("n", [1, 5, 12])
    def test_array_matches_iterator(self, text, n):
        eq = parse_equation(text)
        arr = solutions_array(eq, n)
        assert sorted(map(tuple, arr.tolist())) == sorted(
            enumerate_solutions(eq, n)
        )

    @given(
        c1=st.integers(-5, 5).filter(bool),
        c2=st.integers(-5, 5).filter(bool),
        c3=st.integers(-5, 5).filter(bool),
        n=st.integers(1, 10),
    )
    @settings(max_examples=60, deadline=None)
    def test_enumeration_is_exactly_the_solution_set(self, c1, c2, c3, n):
        eq = LinearEquation(coeffs=(c1, c2, c3), display_form="t")
        got = set(enumerate_solutions(eq, n))
        want = {
            (x, y, z)
            for x in range(1, n + 1)
            for y in range(1, n + 1)
            for z in range(1, n + 1)
            if c1 * x + c2 * y + c3 * z == 0
        }
        assert got == want

    def test_all_positive_has_no_solutions(self):
        assert list(enumerate_solutions(parse_equation("1,1,1"), 50)) == []


class TestStructure:
    def test_sum_form(self):
        pos, am = parse_equation("2(x+y)=3z").sum_form()
        assert pos == (2, 2) and am == 3
        pos, am = parse_equation("2,-3,7").sum_form()
        assert pos == (2, 7) and am == 3
        assert parse_equation("1,1,1").sum_form() is None

    @pytest.mark.parametrize(
        "text,regular",
        [("x+y=z", True), ("x-y=2z", True), ("x+y=4z", False),
         ("3x+2y=z", False), ("1,1,1", False), ("2(x+y)=3z", False)],
    )
    def test_regularity(self, text, regular):
        assert is_regular(parse_equation(text)) is regular

    def test_two_regular(self):
        assert is_two_regular(parse_equation("x+y=4z"))
        assert not is_two_regular(parse_equation("1,1,1"))

    @given(x=st.integers(1, 10**6), p=st.sampled_from([2, 3, 5, 7, 11]))
    @settings(max_examples=80, deadline=None)
    def test_padic_valuation_definition(self, x, p):
        v = padic_valuation(x, p)
        assert x % p**v == 0 and x % p ** (v + 1) != 0

    def test_base_valuation(self):
        assert base_valuation(12, 2) == 2
        assert base_valuation(27, 3) == 3
        assert base_valuation(7, 3) == 0
