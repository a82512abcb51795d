"""Degree of regularity of 3-variable equations ax+by=cz: upper-bound rules
from explicit avoiding colorings, exact values by combining them with finite
Rado-number computations, and a family of sum equations that fail to be
k-regular despite having many variables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .coloring import _multiplicative_order
from .equation import (
    EquationError,
    LinearEquation,
    is_regular,
    is_two_regular,
    padic_valuation,
)
from .search import SearchConfig, detect_infinite, finite_upper_bound

__all__ = [
    "DorResult",
    "dor_upper_bounds",
    "compute_dor",
    "sum_equation_counterexample",
]

_PRIME_LIMIT = 100
_K_MAX = 12


def _small_primes(limit: int = _PRIME_LIMIT) -> list[int]:
    primes = []
    for n in range(2, limit + 1):
        if all(n % p for p in primes):
            primes.append(n)
    return primes


@dataclass
class DorResult:
    equation: str
    value: object  # int, math.inf, or None when only an interval is known
    interval: Optional[tuple[int, Optional[int]]]  # (lo, hi); hi None = no bound
    derivation: list = field(default_factory=list)  # applied rules in order
    coefficient_sum: Optional[int] = None  # sum of the positive side

    def to_json(self) -> dict:
        value = self.value
        if value == math.inf:
            value = "inf"
        return {
            "equation": self.equation,
            "value": value,
            "interval": list(self.interval) if self.interval else None,
            "derivation": self.derivation,
            "coefficient_sum": self.coefficient_sum,
        }


def dor_upper_bounds(
    eq: LinearEquation, k_max: int = _K_MAX, p_limit: int = _PRIME_LIMIT
) -> list[tuple[int, str, dict]]:
    """All applicable upper bounds on dor(eq) with their justifying rules.

    Each entry is (bound, rule, params) meaning dor(eq) <= bound. Rules:

    - 'log_interval_i' / 'log_interval_ii': the interval-coloring conditions
      on sum-form equations, checked for k up to k_max; a condition holding
      at k shows the equation is not k-regular, so dor <= k-1.
    - 'valuations_mod_k': a prime whose coefficient valuations are pairwise
      distinct mod k (dor <= k-1).
    - 'distinct_valuations': a prime whose coefficient valuations are
      pairwise distinct as integers (dor <= 3; 3-variable equations only).
    - 'product_coloring_single': nonregular ax+by+cz=0 with
      0 = v_p(a) = v_p(b) = v_p(a+b) < v_p(c) = r gives dor <= 5, or
      dor <= 3 when -a*b^-1 has even order mod p^r.
    - 'product_coloring_pair': nonregular ax+by+cz=0 with
      0 = v_p(a) < v_p(b) = v_p(c) = v_p(b+c) = r gives dor <= 5, or
      dor <= 3 when -(b/p^r)*(c/p^r)^-1 has even order mod p^r.
    - 'equal_pair_bound': nonregular a(x+y)=bz (equal positive coefficients)
      has dor <= 3.
    """
    bounds: list[tuple[int, str, dict]] = []
    m = eq.num_vars
    primes = _small_primes(p_limit)

    form = eq.sum_form()
    if form is not None:
        pos, am = form
        a1 = pos[0]
        s = sum(pos)
        for k in range(2, k_max + 1):
            if s * am ** (k - 2) <= a1 ** (k - 1):
                bounds.append(
                    (k - 1, "log_interval_i",
                     {"k": k, "S": s, "a1": a1, "am": am})
                )
                break
        for k in range(2, k_max + 1):
            if s ** (k - 1) <= a1 * am ** (k - 2):
                bounds.append(
                    (k - 1, "log_interval_ii",
                     {"k": k, "S": s, "a1": a1, "am": am})
                )
                break

    for k in range(2, k_max + 1):
        hit = None
        for p in primes:
            vals = [padic_valuation(c, p) % k for c in eq.coeffs]
            if len(set(vals)) == m:
                hit = (p, vals)
                break
        if hit:
            bounds.append(
                (k - 1, "valuations_mod_k",
                 {"k": k, "p": hit[0], "valuations_mod_k": hit[1]})
            )
            break

    if m == 3:
        for p in primes:
            vals = [padic_valuation(c, p) for c in eq.coeffs]
            if len(set(vals)) == 3:
                bounds.append(
                    (3, "distinct_valuations", {"p": p, "valuations": vals})
                )
                break

    if m == 3 and not is_regular(eq):
        bounds.extend(_product_coloring_bounds(eq, primes))
        if form is not None:
            pos, am = form
            if len(pos) == 2 and pos[0] == pos[1]:
                bounds.append(
                    (3, "equal_pair_bound", {"a": pos[0], "b": am})
                )

    return bounds


def _product_coloring_bounds(eq: LinearEquation, primes) -> list:
    """The two product-coloring rules, searching all role assignments of the
    three coefficients over the given primes."""
    out = []
    coeffs = eq.coeffs
    best_single = None
    best_pair = None
    for p in primes:
        # pattern 'single': 0 = v_p(a) = v_p(b) = v_p(a+b) < v_p(c) = r
        for roles in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            a, b, c = (coeffs[i] for i in roles)
            if (
                padic_valuation(a, p) == 0
                and padic_valuation(b, p) == 0
                and a + b != 0
                and padic_valuation(a + b, p) == 0
                and padic_valuation(c, p) > 0
            ):
                r = padic_valuation(c, p)
                mod = p**r
                g = (-a * pow(b, -1, mod)) % mod
                even = _multiplicative_order(g, mod) % 2 == 0
                bound = 3 if even else 5
                cand = (bound, "product_coloring_single",
                        {"p": p, "r": r, "g": g, "even_order": even})
                if best_single is None or cand[0] < best_single[0]:
                    best_single = cand
        # pattern 'pair': 0 = v_p(a) < v_p(b) = v_p(c) = v_p(b+c) = r
        for roles in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
            a, b, c = (coeffs[i] for i in roles)
            if padic_valuation(a, p) == 0 and padic_valuation(b, p) > 0:
                r = padic_valuation(b, p)
                if (
                    padic_valuation(c, p) == r
                    and b + c != 0
                    and padic_valuation(b + c, p) == r
                ):
                    mod = p**r
                    g = (-(b // mod) * pow(c // mod, -1, mod)) % mod
                    even = _multiplicative_order(g, mod) % 2 == 0
                    bound = 3 if even else 5
                    cand = (bound, "product_coloring_pair",
                            {"p": p, "r": r, "g": g, "even_order": even})
                    if best_pair is None or cand[0] < best_pair[0]:
                        best_pair = cand
    if best_single:
        out.append(best_single)
    if best_pair:
        out.append(best_pair)
    return out


def compute_dor(
    eq: LinearEquation, cfg: Optional[SearchConfig] = None
) -> DorResult:
    """Degree of regularity of a 3-variable equation.

    Regular equations get infinity. Otherwise the smallest upper bound from
    dor_upper_bounds is combined with lower bounds: mixed signs give
    2-regularity, and a finite 3-color formula refutation (found by growing
    probes) gives 3-regularity. When the two meet, the value is exact;
    otherwise an interval is reported.
    """
    if eq.num_vars != 3:
        raise EquationError("degree-of-regularity analysis needs 3 variables")
    derivation: list = []
    form = eq.sum_form()
    coefficient_sum = sum(form[0]) if form else None

    if is_regular(eq):
        derivation.append({"rule": "regular_subset_sum", "value": "inf"})
        return DorResult(
            equation=str(eq), value=math.inf, interval=None,
            derivation=derivation, coefficient_sum=coefficient_sum,
        )

    bounds = dor_upper_bounds(eq)
    for bound, rule, params in sorted(bounds, key=lambda t: t[0]):
        derivation.append({"rule": rule, "bound": bound, "params": params})
    hi = min((b for b, _, _ in bounds), default=None)

    lo = 1
    if is_two_regular(eq):
        lo = 2
        derivation.append({"rule": "two_regular_mixed_signs", "lower_bound": 2})

    if hi is not None and lo >= hi:
        return DorResult(
            equation=str(eq), value=hi, interval=None,
            derivation=derivation, coefficient_sum=coefficient_sum,
        )

    # Try to raise the lower bound to 3 with a finite 3-color refutation.
    if lo == 2 and (hi is None or hi >= 3):
        search_cfg = cfg or SearchConfig(budget=1800.0)
        n_unsat = finite_upper_bound(eq, 3, search_cfg)
        if n_unsat is not None:
            lo = 3
            derivation.append(
                {"rule": "finite_three_color_refutation", "lower_bound": 3,
                 "unsat_at_n": n_unsat}
            )

    if hi is not None and lo == hi:
        return DorResult(
            equation=str(eq), value=hi, interval=None,
            derivation=derivation, coefficient_sum=coefficient_sum,
        )
    return DorResult(
        equation=str(eq), value=None, interval=(lo, hi),
        derivation=derivation, coefficient_sum=coefficient_sum,
    )


def sum_equation_counterexample(m: int, k: int) -> LinearEquation:
    """The equation x_1+...+x_{m-1} = ceil((m-1)^((k-1)/(k-2))) x_m, which is
    not k-regular; its interval-coloring precondition is verified before
    returning."""
    if m < 3 or k < 3:
        raise ValueError("need m >= 3 and k >= 3")
    base = m - 1
    # smallest t with t^(k-2) >= (m-1)^(k-1), i.e. ceil((m-1)^((k-1)/(k-2)))
    target = base ** (k - 1)
    t = round(base ** ((k - 1) / (k - 2)))
    while t ** (k - 2) < target:
        t += 1
    while t > 1 and (t - 1) ** (k - 2) >= target:
        t -= 1
    eq = LinearEquation(
        coeffs=(1,) * (m - 1) + (-t,),
        display_form=f"x_1+...+x_{m-1}={t}z" if m > 3 else f"x+y={t}z",
    )
    just = detect_infinite(eq, k)
    if just is None or just.rule != "log_interval_ii":
        raise AssertionError(
            "constructed equation fails its interval-coloring precondition"
        )
    return eq
