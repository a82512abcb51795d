import pytest
from hypothesis import given, settings, strategies as st

from radosat.solver import BackendConfig, solve
from radosat.symbolic import (
    ParametricFamily,
    Polynomial,
    bounded_integer_polynomial,
    build_parametric_formula,
    find_polynomials,
    instantiate_and_check,
    shipped_family,
)

NAMES_M = ("m",)
NAMES_AB = ("a", "b")


def P(text, names=NAMES_M):
    return Polynomial.parse(text, names)


class TestPolynomial:
    def test_parse_str_roundtrip(self):
        for text in ["m", "m-2", "m**3-m**2-m-1", "2*m+5", "-m+1"]:
            p = P(text)
            assert P(str(p)) == p

    def test_arithmetic(self):
        m = Polynomial.variable("m", NAMES_M)
        assert (m + 1) * (m - 1) == P("m**2-1")
        assert (m - 2) ** 2 == P("m**2-4*m+4")
        assert m - m == Polynomial.constant(0, NAMES_M)
        assert (m - m).is_zero

    @given(v=st.integers(-20, 20))
    @settings(max_examples=30, deadline=None)
    def test_evaluate(self, v):
        p = P("m**3-m**2-m-1")
        assert p.evaluate({"m": v}) == v**3 - v**2 - v - 1

    def test_exact_divide(self):
        q = P("m**2-1").exact_divide(P("m-1"))
        assert q == P("m+1")
        assert P("m**2+1").exact_divide(P("m-1")) is None

    def test_bivariate(self):
        p = Polynomial.parse("a*b - b**2", NAMES_AB)
        assert p.evaluate({"a": 5, "b": 3}) == 6

    def test_canonical_ordering_is_stable(self):
        assert P("1+m") == P("m+1")
        assert hash(P("1+m")) == hash(P("m+1"))


@pytest.fixture(scope="module")
def fam1():
    fam, s0, g0 = shipped_family("x-y=(m-2)z")
    return fam, s0, g0


@pytest.fixture(scope="module")
def fam2():
    fam, s0, g0 = shipped_family("a(x-y)=(a-1)z")
    return fam, s0, g0


@pytest.fixture(scope="module")
def fam3():
    fam, s0, g0 = shipped_family("a(x-y)=bz")
    return fam, s0, g0


class TestBoundedness:
    def test_univariate_verified(self, fam1):
        fam, _, _ = fam1
        for text in ["1", "m-2", "m**2-m", "m**3-m**2-m-1"]:
            cert = bounded_integer_polynomial(P(text), fam)
            assert cert.verified, text

    def test_univariate_rejected(self, fam1):
        fam, _, _ = fam1
        for text in ["0", "-m", "m**3", "m-3"]:
            cert = bounded_integer_polynomial(P(text), fam)
            assert not cert.verified, text

    def test_bivariate_verified(self, fam3):
        fam, _, _ = fam3
        for text in ["1", "a", "a-b", "a*b", "a**3", "a**3-b"]:
            cert = bounded_integer_polynomial(P(text, NAMES_AB), fam)
            assert cert.verified, text

    def test_bivariate_rejected(self, fam3):
        fam, _, _ = fam3
        # b-a is negative on the domain (b <= a-2)
        for text in ["b-a", "a**3+1", "0"]:
            cert = bounded_integer_polynomial(P(text, NAMES_AB), fam)
            assert not cert.verified, text

    def test_alphabet_mismatch(self, fam1):
        fam, _, _ = fam1
        with pytest.raises(ValueError):
            bounded_integer_polynomial(P("a", NAMES_AB), fam)


class TestFamilyProof:
    def test_family1_unsat_with_certified_atoms(self, fam1):
        fam, s0, g0 = fam1
        s, c = find_polynomials(fam, s0, g0, max_iterations=1)
        assert len(c) >= len(s0)
        pf = build_parametric_formula(fam, 3, s, c)
        assert pf.cnf.meta["parametric"]
        verdict = solve(pf.cnf, BackendConfig(time_budget=120.0))
        assert verdict.status == "UNSAT"

    def test_family1_instantiation(self, fam1):
        fam, s0, g0 = fam1
        s, c = find_polynomials(fam, s0, g0, max_iterations=1)
        pf = build_parametric_formula(fam, 3, s, c)
        report = instantiate_and_check(pf, {"m": 10})
        assert report.ok and report.bound == 889
        report = instantiate_and_check(pf, {"m": 2})
        assert not report.ok  # below the domain minimum

    def test_family2_loads_published_seeds(self, fam2):
        fam, s0, g0 = fam2
        assert len(s0) == 9 and len(g0) == 5
        assert fam.bound == Polynomial.parse("a**3+(a-1)**2", ("a",))

    def test_solutions_satisfy_equation_symbolically(self, fam1):
        fam, s0, g0 = fam1
        s, c = find_polynomials(fam, s0, g0, max_iterations=1)
        for x, y, z in c:
            assert (fam.a_poly * x - fam.a_poly * y - fam.b_poly * z).is_zero

    def test_unknown_family_raises(self):
        with pytest.raises(KeyError):
            shipped_family("nope")


class TestDomain:
    def test_contains(self, fam3):
        fam, _, _ = fam3
        assert fam.contains({"a": 16, "b": 1})
        assert fam.contains({"a": 20, "b": 18})
        assert not fam.contains({"a": 20, "b": 19})
        assert not fam.contains({"a": 15, "b": 1})

    def test_equation_at(self, fam1):
        fam, _, _ = fam1
        eq = fam.equation_at({"m": 10})
        assert eq.coeffs == (1, -1, -8)
