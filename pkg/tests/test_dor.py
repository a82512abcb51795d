import math

import pytest

from radosat.dor import (
    compute_dor,
    dor_upper_bounds,
    sum_equation_counterexample,
)
from radosat.equation import EquationError, parse_equation
from radosat.search import SearchConfig, load_tables


class TestUpperBounds:
    def test_equal_pair_rule(self):
        eq = parse_equation("2(x+y)=3z")
        rules = {r for _, r, _ in dor_upper_bounds(eq)}
        assert "equal_pair_bound" in rules

    def test_product_coloring_single_even_order(self):
        # x+y=9z: g = -1 mod 9 has order 2, so the 4-coloring applies
        eq = parse_equation("x+y=9z")
        hits = {r: (b, p) for b, r, p in dor_upper_bounds(eq)}
        assert "product_coloring_single" in hits
        bound, params = hits["product_coloring_single"]
        assert bound == 3 and params["even_order"]

    def test_product_coloring_pair(self):
        eq = parse_equation("x+3y=6z")
        hits = {r for _, r, _ in dor_upper_bounds(eq)}
        assert "product_coloring_pair" in hits

    def test_log_rules_present_for_large_ratio(self):
        eq = parse_equation("x+y=4z")
        hits = {r: b for b, r, _ in dor_upper_bounds(eq)}
        assert hits.get("log_interval_ii") == 2


class TestComputeDor:
    def test_regular_is_infinite(self):
        result = compute_dor(parse_equation("x+y=z"))
        assert result.value == math.inf
        assert result.derivation[0]["rule"] == "regular_subset_sum"
        assert result.to_json()["value"] == "inf"

    def test_needs_three_variables(self):
        with pytest.raises(EquationError):
            compute_dor(parse_equation("1,1,1,-3"))

    def test_exact_value_two(self):
        result = compute_dor(parse_equation("x+y=4z"))
        assert result.value == 2

    def test_exact_value_three(self):
        # 2(x+y)=3z: upper bound 3 from the equal-pair rule, lower bound 3
        # from a finite 3-color refutation (R_3 = 54)
        result = compute_dor(parse_equation("2(x+y)=3z"), SearchConfig(budget=300.0))
        assert result.value == 3
        rules = [step["rule"] for step in result.derivation]
        assert "finite_three_color_refutation" in rules

    def test_spot_check_grid(self):
        tables = {t["id"]: t for t in load_tables()["tables"]}
        grid = {
            tuple(sorted(e["params"].items())): e["expected"]
            for e in tables["dor-ax-by-cz"]["entries"]
        }
        for a, b, c in [(1, 1, 1), (1, 1, 2), (1, 2, 4), (2, 2, 3)]:
            eq = parse_equation(f"{a},{b},{-c}")
            result = compute_dor(eq, SearchConfig(budget=300.0))
            want = grid[(("a", a), ("b", b), ("c", c))]
            got = "inf" if result.value == math.inf else result.value
            assert got == want, (a, b, c)


class TestCounterexampleFamily:
    @pytest.mark.parametrize("m,k", [(3, 3), (3, 4), (4, 3), (5, 4)])
    def test_construction_validates(self, m, k):
        eq = sum_equation_counterexample(m, k)
        assert eq.coeffs[: m - 1] == (1,) * (m - 1)
        t = -eq.coeffs[-1]
        # t is the least integer with t^(k-2) >= (m-1)^(k-1)
        assert t ** (k - 2) >= (m - 1) ** (k - 1)
        assert t == 1 or (t - 1) ** (k - 2) < (m - 1) ** (k - 1)

    def test_rejects_small_parameters(self):
        with pytest.raises(ValueError):
            sum_equation_counterexample(2, 3)
