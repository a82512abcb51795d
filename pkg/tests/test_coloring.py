import pytest
from hypothesis import given, settings, strategies as st

from radosat.coloring import (
    Coloring,
    ColoringNotApplicable,
    chi_aminus1_coloring,
    cycle_graph_coloring,
    logd_coloring,
    product_coloring_unique_prime,
    va_coloring,
    verify_coloring,
    vp_modk_coloring,
)
from radosat.equation import enumerate_solutions, parse_equation

from conftest import brute_force_colorable


def reference_verify(eq, coloring):
    for sol in enumerate_solutions(eq, coloring.n):
        c = coloring.color(sol[0])
        if all(coloring.color(v) == c for v in sol[1:]):
            return sol
    return None


class TestVerifier:
    @given(
        data=st.data(),
        text=st.sampled_from(["x+y=z", "x-y=2z", "2x+3y=5z", "1,1,-4"]),
        n=st.integers(1, 15),
        k=st.integers(1, 3),
    )
    @settings(max_examples=80, deadline=None)
    def test_matches_reference_on_random_colorings(self, data, text, n, k):
        eq = parse_equation(text)
        colors = data.draw(
            st.tuples(*[st.integers(1, k) for _ in range(n)])
        )
        coloring = Coloring(n=n, k=k, colors=colors)
        got = verify_coloring(eq, coloring)
        ref = reference_verify(eq, coloring)
        if ref is None:
            assert got is None
        else:
            assert got is not None
            # any witness must be a genuine monochromatic solution
            assert eq.is_solution(got.tuple_)
            c = coloring.color(got.tuple_[0])
            assert all(coloring.color(v) == c for v in got.tuple_)

    def test_schur_known_witness(self):
        eq = parse_equation("x+y=z")
        bad = Coloring(n=4, k=2, colors=(1, 1, 2, 2))
        assert verify_coloring(eq, bad) is not None
        good = Coloring(n=4, k=2, colors=(1, 2, 2, 1))
        assert verify_coloring(eq, good) is None

    def test_json_roundtrip(self):
        c = Coloring(n=5, k=3, colors=(1, 2, 3, 1, 2))
        assert Coloring.from_json(c.to_json()) == c


class TestConstructions:
    @pytest.mark.parametrize("a,b", [(3, 1), (3, 2), (4, 1), (5, 2)])
    def test_base_valuation_coloring_avoids(self, a, b):
        eq = parse_equation(f"{a}(x-y)={b}z")
        coloring = va_coloring(a, 3, a**3 - 1)
        assert verify_coloring(eq, coloring) is None

    def test_base_valuation_coloring_domain_guard(self):
        with pytest.raises(ColoringNotApplicable):
            va_coloring(3, 3, 27)

    @pytest.mark.parametrize("a", [3, 4, 5, 6, 7, 8])
    def test_chi_coloring_avoids(self, a):
        eq = parse_equation(f"{a}(x-y)={a-1}z")
        coloring = chi_aminus1_coloring(a)
        assert coloring.n == a**3 + (a - 1) ** 2 - 1
        assert verify_coloring(eq, coloring) is None

    @pytest.mark.parametrize(
        "text,k,variant",
        [("4(x+y)=z", 3, "I"), ("x+y=4z", 3, "II"), ("5(x+y)=20z", 3, "II")],
    )
    def test_log_interval_colorings_avoid(self, text, k, variant):
        eq = parse_equation(text)
        coloring = logd_coloring(eq, k, variant, 2000)
        assert verify_coloring(eq, coloring) is None

    def test_vp_modk_coloring_avoids(self):
        # 4x+2y=z: 2-adic valuations 2,1,0 are pairwise distinct mod 3
        eq = parse_equation("4x+2y=z")
        coloring = vp_modk_coloring(2, 3, 1500)
        assert verify_coloring(eq, coloring) is None


class TestCycleGraph:
    def test_modulus_nine_multiplier_two(self):
        graph = cycle_graph_coloring(9, 2)
        assert graph.check_proper()
        assert graph.num_colors == 2

    def test_odd_order_needs_three_colors(self):
        # multiplier 2 mod 7 has odd order 3: some cycle is odd
        graph = cycle_graph_coloring(7, 2)
        assert graph.check_proper()
        assert graph.num_colors == 3


class TestProductColoring:
    def test_single_pattern(self):
        # x+y=9z: v_3(1)=v_3(1)=v_3(2)=0 < v_3(9)=2, g=-1 mod 9=8, order 2
        eq = parse_equation("x+y=9z")
        coloring, params = product_coloring_unique_prime(eq, "single", 800)
        assert params["p"] == 3 and params["r"] == 2
        assert coloring.k <= 4  # even order gives the 4-coloring
        assert verify_coloring(eq, coloring) is None

    def test_pair_pattern(self):
        # x+3y=6z: v_3(1)=0 < v_3(3)=v_3(6)=v_3(3+(-6))=1
        eq = parse_equation("x+3y=6z")
        coloring, params = product_coloring_unique_prime(eq, "pair", 800)
        assert params["p"] == 3 and params["r"] == 1
        assert verify_coloring(eq, coloring) is None

    def test_not_applicable_on_regular(self):
        with pytest.raises(ColoringNotApplicable):
            product_coloring_unique_prime(parse_equation("x+y=z"), "single", 50)


class TestAgainstBruteForce:
    @pytest.mark.parametrize("a", [3, 4])
    def test_valuation_coloring_is_genuinely_needed(self, a):
        # below R_3 = a^3 an avoiding coloring exists; brute force agrees on
        # a small prefix of the domain
        eq = parse_equation(f"{a}(x-y)=z")
        assert brute_force_colorable(eq, min(12, a**3 - 1), 3)
