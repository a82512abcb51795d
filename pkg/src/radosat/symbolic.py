"""Parametrized CNF certificates: integer polynomials as propositional atoms,
the gap-driven polynomial search, bound certification on constrained integer
domains, and instantiation checks tying symbolic refutations back to concrete
coloring formulas."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .encoder import CnfFormula
from .equation import LinearEquation

__all__ = [
    "Polynomial",
    "ParametricFamily",
    "ParametricFormula",
    "BoundCertificate",
    "bounded_integer_polynomial",
    "find_polynomials",
    "build_parametric_formula",
    "instantiate_and_check",
    "InstantiationReport",
    "load_family",
    "shipped_family",
]

_MAX_TOTAL_DEGREE = 12


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in at most two named parameters, kept in a unique
    canonical form (sorted exponent/coefficient pairs with no zero terms), so
    equal polynomials compare and hash equal."""

    names: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], int], ...]

    # -- construction ------------------------------------------------------

    @staticmethod
    def _canon(names, terms_dict) -> "Polynomial":
        terms = tuple(
            (exp, c) for exp, c in sorted(terms_dict.items()) if c != 0
        )
        for exp, _ in terms:
            if sum(exp) > _MAX_TOTAL_DEGREE:
                raise OverflowError("polynomial degree exceeds the supported cap")
        return Polynomial(names=tuple(names), terms=terms)

    @classmethod
    def constant(cls, value: int, names: Sequence[str]) -> "Polynomial":
        zero = (0,) * len(names)
        return cls._canon(names, {zero: int(value)})

    @classmethod
    def variable(cls, name: str, names: Sequence[str]) -> "Polynomial":
        if name not in names:
            raise ValueError(f"{name!r} is not in the alphabet {names!r}")
        exp = tuple(1 if n == name else 0 for n in names)
        return cls._canon(names, {exp: 1})

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "Polynomial":
        """Parse an arithmetic expression such as 'a**3+(a-1)**2' over the
        given alphabet; '^' is accepted as a power operator too."""
        if len(names) > 2:
            raise ValueError("alphabets with more than 2 parameters are unsupported")
        text = text.replace("^", "**")
        env = {n: cls.variable(n, names) for n in names}
        try:
            value = eval(text, {"__builtins__": {}}, env)  # noqa: S307
        except Exception as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        if isinstance(value, int):
            value = cls.constant(value, names)
        if not isinstance(value, Polynomial):
            raise ValueError(f"{text!r} is not a polynomial expression")
        return value

    # -- arithmetic --------------------------------------------------------

    def _dict(self) -> dict:
        return dict(self.terms)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.names != self.names:
                raise ValueError("alphabet mismatch")
            return other
        return Polynomial.constant(int(other), self.names)

    def __add__(self, other):
        other = self._coerce(other)
        out = self._dict()
        for exp, c in other.terms:
            out[exp] = out.get(exp, 0) + c
        return Polynomial._canon(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._canon(self.names, {e: -c for e, c in self.terms})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                exp = tuple(a + b for a, b in zip(e1, e2))
                out[exp] = out.get(exp, 0) + c1 * c2
        return Polynomial._canon(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        acc = Polynomial.constant(1, self.names)
        for _ in range(n):
            acc = acc * self
        return acc

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def evaluate(self, values: dict) -> int:
        total = 0
        for exp, c in self.terms:
            term = c
            for name, e in zip(self.names, exp):
                term *= values[name] ** e
            total += term
        return total

    def exact_divide(self, divisor: "Polynomial") -> Optional["Polynomial"]:
        """Exact polynomial division; None when the quotient is not an
        integer polynomial. Uses lex leading-term elimination."""
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = self._dict()
        quot: dict = {}
        d_exp, d_c = max(divisor.terms)
        while rem:
            r_exp, r_c = max(rem.items())
            exp = tuple(a - b for a, b in zip(r_exp, d_exp))
            if any(e < 0 for e in exp) or r_c % d_c != 0:
                return None
            factor = r_c // d_c
            quot[exp] = quot.get(exp, 0) + factor
            for e2, c2 in divisor.terms:
                key = tuple(a + b for a, b in zip(exp, e2))
                rem[key] = rem.get(key, 0) - factor * c2
                if rem[key] == 0:
                    del rem[key]
        try:
            return Polynomial._canon(self.names, quot)
        except OverflowError:
            return None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in sorted(self.terms, reverse=True):
            factors = []
            for name, e in zip(self.names, exp):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = "+".join(parts).replace("+-", "-")
        return out


@dataclass(frozen=True)
class ParametricFamily:
    """An equation family a_poly*(x - y) = b_poly*z over an alphabet of at
    most two parameters, with an integer domain and a bound polynomial f.

    Univariate domain: main parameter >= var_min. Bivariate domain (alphabet
    (a, b)): a >= var_min, 1 <= b <= a - 2; coprimality of instantiations is
    recorded by callers, not enforced symbolically.
    """

    family_id: str
    alphabet: tuple[str, ...]
    a_poly: Polynomial
    b_poly: Polynomial
    bound: Polynomial  # f
    var_min: int
    display: str = ""

    @property
    def is_bivariate(self) -> bool:
        return len(self.alphabet) == 2

    def equation_at(self, values: dict) -> LinearEquation:
        a = self.a_poly.evaluate(values)
        b = self.b_poly.evaluate(values)
        return LinearEquation(
            coeffs=(a, -a, -b), display_form=f"{a}(x-y)={b}z"
        )

    def domain_points(self) -> Iterable[dict]:
        """A deterministic stream of sample points in the domain (for spot
        checks); infinite, so take what you need."""
        main = self.alphabet[0]
        if not self.is_bivariate:
            v = self.var_min
            while True:
                yield {main: v}
                v += 1
        else:
            second = self.alphabet[1]
            a = self.var_min
            while True:
                for b in range(1, a - 1):
                    yield {main: a, second: b}
                a += 1

    def contains(self, values: dict) -> bool:
        main = self.alphabet[0]
        if values[main] < self.var_min:
            return False
        if self.is_bivariate:
            b = values[self.alphabet[1]]
            if not 1 <= b <= values[main] - 2:
                return False
        return True


@dataclass(frozen=True)
class BoundCertificate:
    status: str  # "verified" | "unverified"
    method: str = ""
    detail: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.status == "verified"


# -- nonnegativity on integer domains -------------------------------------


def _nonneg_univariate(g: Polynomial, a0: int) -> bool:
    """Exact decision of g(x) >= 0 for all integers x >= a0."""
    if g.is_zero:
        return True
    coeffs: dict[int, int] = {e[0]: c for e, c in g.terms}
    deg = max(coeffs)
    lead = coeffs[deg]
    if deg == 0:
        return lead >= 0
    if lead < 0:
        return False
    # Cauchy bound: no real root beyond 1 + max |c_i / c_deg|
    cauchy = 1 + max(abs(coeffs.get(i, 0)) for i in range(deg)) // abs(lead) + 1
    hi = max(a0, cauchy)
    # only one name occurs in a univariate polynomial, so evaluating every
    # name at x is harmless
    for x in range(a0, hi + 1):
        if g.evaluate({n: x for n in g.names}) < 0:
            return False
    return True


def _exact_nonneg_combination(
    target: Polynomial, generators: list[Polynomial]
) -> Optional[list[Fraction]]:
    """Find nonnegative rationals lam with sum(lam_i * gen_i) == target,
    exactly, via a phase-1 simplex over Fractions. None if infeasible."""
    monomials = sorted(
        {e for g in generators for e, _ in g.terms}
        | {e for e, _ in target.terms}
    )
    mindex = {m: i for i, m in enumerate(monomials)}
    nrows = len(monomials)
    ncols = len(generators)
    a = [[Fraction(0)] * ncols for _ in range(nrows)]
    for j, g in enumerate(generators):
        for e, c in g.terms:
            a[mindex[e]][j] = Fraction(c)
    b = [Fraction(0)] * nrows
    for e, c in target.terms:
        b[mindex[e]] = Fraction(c)
    # Make right-hand sides nonnegative.
    for i in range(nrows):
        if b[i] < 0:
            b[i] = -b[i]
            for j in range(ncols):
                a[i][j] = -a[i][j]
    # Phase-1: minimize sum of artificials with Bland's rule.
    total = ncols + nrows
    tab = [row[:] + [Fraction(0)] * nrows + [b[i]] for i, row in enumerate(a)]
    for i in range(nrows):
        tab[i][ncols + i] = Fraction(1)
    basis = list(range(ncols, total))
    # objective row: cost 1 on artificials, reduced
    obj = [Fraction(0)] * (total + 1)
    for i in range(nrows):
        for j in range(total + 1):
            obj[j] -= tab[i][j]
    for j in range(ncols, total):
        obj[j] += Fraction(1)
    guard = 0
    while True:
        guard += 1
        if guard > 10000:
            return None
        enter = next((j for j in range(total) if obj[j] < 0), None)
        if enter is None:
            break
        ratios = [
            (tab[i][total] / tab[i][enter], i)
            for i in range(nrows)
            if tab[i][enter] > 0
        ]
        if not ratios:
            return None
        _, piv = min(ratios, key=lambda t: (t[0], basis[t[1]]))
        pv = tab[piv][enter]
        tab[piv] = [x / pv for x in tab[piv]]
        for i in range(nrows):
            if i != piv and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[piv])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, tab[piv])]
        basis[piv] = enter
    if -obj[total] != 0:
        return None
    lam = [Fraction(0)] * ncols
    for i, var in enumerate(basis):
        if var < ncols:
            lam[var] = tab[i][total]
        elif tab[i][total] != 0:
            return None
    # exact re-verification of the identity
    acc: dict = {}
    for coef, g in zip(lam, generators):
        for e, c in g.terms:
            acc[e] = acc.get(e, Fraction(0)) + coef * c
    want = {e: Fraction(c) for e, c in target.terms}
    for e in set(acc) | set(want):
        if acc.get(e, Fraction(0)) != want.get(e, Fraction(0)):
            return None
    return lam


def _bivariate_generators(fam: ParametricFamily) -> list[Polynomial]:
    names = fam.alphabet
    one = Polynomial.constant(1, names)
    a = Polynomial.variable(names[0], names)
    b = Polynomial.variable(names[1], names)
    base = [a - fam.var_min, b - 1, a - 2 - b]
    gens = [one] + base
    for g1, g2 in itertools.combinations_with_replacement(base, 2):
        gens.append(g1 * g2)
    # cubic products are needed to reach degree-3 targets such as f - p
    for g1, g2, g3 in itertools.combinations_with_replacement(base, 3):
        gens.append(g1 * g2 * g3)
    return gens


def bounded_integer_polynomial(
    p: Polynomial, fam: ParametricFamily
) -> BoundCertificate:
    """Certify 1 <= p <= f on the family's whole integer domain.

    Univariate families are decided exactly (root-bound scan plus
    leading-sign tail). Bivariate families search a representation of p-1
    and f-p as nonnegative rational combinations of products (degree <= 2)
    of the affine domain constraints; failure yields 'unverified', never a
    wrong 'verified'.
    """
    if p.names != fam.alphabet:
        raise ValueError("polynomial alphabet does not match the family")
    lower = p - 1
    upper = fam.bound - p
    if not fam.is_bivariate:
        ok = _nonneg_univariate(lower, fam.var_min) and _nonneg_univariate(
            upper, fam.var_min
        )
        return BoundCertificate(
            status="verified" if ok else "unverified",
            method="univariate-exact",
        )
    gens = _bivariate_generators(fam)
    lam_lo = _exact_nonneg_combination(lower, gens)
    if lam_lo is None:
        return BoundCertificate(status="unverified", method="handelman")
    lam_hi = _exact_nonneg_combination(upper, gens)
    if lam_hi is None:
        return BoundCertificate(status="unverified", method="handelman")
    return BoundCertificate(
        status="verified",
        method="handelman",
        detail={
            "lower_multipliers": [str(x) for x in lam_lo],
            "upper_multipliers": [str(x) for x in lam_hi],
            "generators": [str(g) for g in gens],
        },
    )


# -- polynomial search -----------------------------------------------------


def find_polynomials(
    fam: ParametricFamily,
    s0: Sequence[Polynomial],
    g0: Sequence[Polynomial],
    max_iterations: int = 3,
) -> tuple[set[Polynomial], set[tuple[Polynomial, Polynomial, Polynomial]]]:
    """Grow atom and gap sets, then assemble symbolic solutions.

    Each round extends the gap set G by exact quotients (p-q)/b_poly over
    pairs from S, then extends S by p +/- b_poly*q for p in S, q in G,
    keeping only bound-certified polynomials. Finally every pair p, q from S
    yields the candidate solution (x, y, z) = (p, p - b_poly*q, a_poly*q),
    admitted when all three components certify; admitted components join S.
    """
    cache: dict[Polynomial, bool] = {}

    def bounded(poly: Polynomial) -> bool:
        if poly not in cache:
            cache[poly] = bounded_integer_polynomial(poly, fam).verified
        return cache[poly]

    s = set(s0)
    g = set(g0)
    for _ in range(max_iterations):
        for p, q in itertools.product(sorted(s, key=str), repeat=2):
            r = (p - q).exact_divide(fam.b_poly)
            if r is not None and bounded(r):
                g.add(r)
        new_s = set()
        for p in s:
            for q in g:
                for r in (p + fam.b_poly * q, p - fam.b_poly * q):
                    if bounded(r):
                        new_s.add(r)
        s |= new_s
    c = set()
    for p, q in itertools.product(sorted(s, key=str), repeat=2):
        x = p
        y = p - fam.b_poly * q
        z = fam.a_poly * q
        if bounded(x) and bounded(y) and bounded(z):
            s.update((x, y, z))
            identity = fam.a_poly * (x - y) - fam.b_poly * z
            if not identity.is_zero:
                raise AssertionError("constructed tuple violates the equation")
            c.add((x, y, z))
    return s, c


# -- parametric formulas ---------------------------------------------------


@dataclass
class ParametricFormula:
    family: ParametricFamily
    k: int
    atoms: tuple[Polynomial, ...]  # canonical, sorted; atom id = index + 1 base
    solutions: tuple[tuple[Polynomial, Polynomial, Polynomial], ...]
    cnf: CnfFormula

    def atom_var(self, atom_index: int, color: int) -> int:
        """Propositional variable of (atom, color), colors 1-based."""
        return atom_index * self.k + color


def build_parametric_formula(
    fam: ParametricFamily,
    k: int,
    s: Iterable[Polynomial],
    c: Iterable[tuple[Polynomial, ...]],
) -> ParametricFormula:
    """Ground the symbolic coloring formula: one propositional atom per
    canonical polynomial, positive and optional clauses per atom, and k
    negative clauses per symbolic solution (duplicate literals removed)."""
    atoms = tuple(sorted(set(s), key=lambda p: (p.total_degree, str(p))))
    index = {p: i for i, p in enumerate(atoms)}
    solutions = []
    for tup in c:
        if len(tup) != 3:
            raise ValueError("solutions must be 3-tuples")
        for member in tup:
            if member not in index:
                raise ValueError(f"solution member {member} is not an atom")
        identity = fam.a_poly * (tup[0] - tup[1]) - fam.b_poly * tup[2]
        if not identity.is_zero:
            raise ValueError(f"tuple {tuple(map(str, tup))} fails the equation")
        solutions.append(tuple(tup))
    solutions = tuple(sorted(solutions, key=lambda t: tuple(map(str, t))))

    na = len(atoms)
    clauses: list[list[int]] = []
    var = lambda ai, i: ai * k + i  # noqa: E731  (atom ai 0-based, color 1-based)
    for ai in range(na):
        clauses.append([var(ai, i) for i in range(1, k + 1)])
    n_pos = len(clauses)
    for tup in solutions:
        ids = sorted({index[p] for p in tup})
        for i in range(1, k + 1):
            clauses.append([-var(ai, i) for ai in ids])
    n_neg = len(clauses) - n_pos
    for ai in range(na):
        for i1 in range(1, k + 1):
            for i2 in range(i1 + 1, k + 1):
                clauses.append([-var(ai, i1), -var(ai, i2)])
    n_opt = len(clauses) - n_pos - n_neg

    lens = np.array([len(cl) for cl in clauses], dtype=np.int64)
    starts = np.zeros(lens.size + 1, dtype=np.int64)
    np.cumsum(lens, out=starts[1:])
    lits = np.array(
        [lit for cl in clauses for lit in cl], dtype=np.int32
    )
    cnf = CnfFormula(
        nvars=na * k,
        lits=lits,
        starts=starts,
        meta={
            "parametric": True,
            "family": fam.family_id,
            "k": k,
            "atoms": na,
            "groups": {"positive": n_pos, "negative": n_neg,
                       "optional": n_opt, "symmetry": 0},
        },
    )
    return ParametricFormula(
        family=fam, k=k, atoms=atoms, solutions=solutions, cnf=cnf
    )


@dataclass
class InstantiationReport:
    values: dict
    ok: bool
    bound: Optional[int] = None
    atom_values: Optional[dict] = None
    failure: Optional[str] = None


def instantiate_and_check(
    pf: ParametricFormula, values: dict
) -> InstantiationReport:
    """Evaluate the symbolic formula at concrete parameter values: every atom
    must land in [1, f(values)] and every symbolic solution must instantiate
    to a genuine solution of the instantiated equation inside that range.
    On success, the induced Rado-number upper bound f(values) is reported."""
    fam = pf.family
    if not fam.contains(values):
        return InstantiationReport(
            values=values, ok=False, failure="values outside the family domain"
        )
    f_val = fam.bound.evaluate(values)
    atom_values = {}
    for p in pf.atoms:
        v = p.evaluate(values)
        if not 1 <= v <= f_val:
            return InstantiationReport(
                values=values, ok=False,
                failure=f"atom {p} evaluates to {v}, outside [1, {f_val}]",
            )
        atom_values[str(p)] = v
    eq = fam.equation_at(values)
    for tup in pf.solutions:
        ground = tuple(p.evaluate(values) for p in tup)
        if not eq.is_solution(ground):
            return InstantiationReport(
                values=values, ok=False,
                failure=f"tuple {tuple(map(str, tup))} instantiates to "
                        f"{ground}, not a solution of {eq}",
            )
        if any(not 1 <= g <= f_val for g in ground):
            return InstantiationReport(
                values=values, ok=False,
                failure=f"tuple {ground} leaves [1, {f_val}]",
            )
    return InstantiationReport(
        values=values, ok=True, bound=f_val, atom_values=atom_values
    )


# -- family persistence ----------------------------------------------------


def load_family(obj: dict) -> tuple[ParametricFamily, list[Polynomial], list[Polynomial]]:
    """Build a family plus its seed sets from a JSON-style dict."""
    alphabet = tuple(obj["alphabet"])
    fam = ParametricFamily(
        family_id=obj["id"],
        alphabet=alphabet,
        a_poly=Polynomial.parse(obj["a_poly"], alphabet),
        b_poly=Polynomial.parse(obj["b_poly"], alphabet),
        bound=Polynomial.parse(obj["bound"], alphabet),
        var_min=int(obj["var_min"]),
        display=obj.get("display", ""),
    )
    s0 = [Polynomial.parse(t, alphabet) for t in obj["S0"]]
    g0 = [Polynomial.parse(t, alphabet) for t in obj["G0"]]
    return fam, s0, g0


def shipped_family(family_id: str):
    """Load one of the seed families shipped with the package."""
    import importlib.resources

    text = (
        importlib.resources.files("radosat")
        .joinpath("data/families.json")
        .read_text()
    )
    for obj in json.loads(text)["families"]:
        if obj["id"] == family_id:
            return load_family(obj)
    raise KeyError(f"no shipped family {family_id!r}")
