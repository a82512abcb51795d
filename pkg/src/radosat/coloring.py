"""Colorings of [1..n], monochromatic-solution checking, and the explicit
avoiding colorings behind the degree-of-regularity bounds."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .equation import (
    EquationError,
    LinearEquation,
    base_valuation,
    enumerate_solutions,
    is_regular,
    padic_valuation,
)

__all__ = [
    "Coloring",
    "Witness",
    "CycleGraph",
    "verify_coloring",
    "va_coloring",
    "chi_aminus1_coloring",
    "logd_coloring",
    "vp_modk_coloring",
    "product_coloring_unique_prime",
    "ColoringNotApplicable",
]


class ColoringNotApplicable(ValueError):
    """The hypothesis of the requested coloring construction does not hold."""


@dataclass(frozen=True)
class Coloring:
    """A total map [1..n] -> [1..k], stored 1-based in colors[i-1]."""

    n: int
    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if len(self.colors) != self.n:
            raise ValueError("coloring must assign every integer in [1..n]")
        if self.colors and not all(1 <= c <= self.k for c in self.colors):
            raise ValueError("colors must lie in [1..k]")

    def color(self, i: int) -> int:
        return self.colors[i - 1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.colors, dtype=np.int32)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k, "colors": list(self.colors)})

    @classmethod
    def from_json(cls, text: str) -> "Coloring":
        obj = json.loads(text)
        return cls(n=int(obj["n"]), k=int(obj["k"]), colors=tuple(obj["colors"]))


@dataclass(frozen=True)
class Witness:
    """A monochromatic solution found by the verifier."""

    tuple_: tuple[int, ...]
    color: int


def verify_coloring(eq: LinearEquation, coloring: Coloring) -> Optional[Witness]:
    """Return None if the coloring avoids monochromatic solutions of eq on
    [1..n], else the first monochromatic solution in enumeration order."""
    n = coloring.n
    if eq.num_vars == 3:
        return _verify3(eq, coloring)
    col = coloring.color
    for sol in enumerate_solutions(eq, n):
        c0 = col(sol[0])
        if all(col(v) == c0 for v in sol[1:]):
            return Witness(sol, c0)
    return None


def _verify3(eq: LinearEquation, coloring: Coloring) -> Optional[Witness]:
    n = coloring.n
    c1, c2, c3 = eq.coeffs
    cols = coloring.as_array()
    y = np.arange(1, n + 1, dtype=np.int64)
    coly = cols  # color of y[i] is cols[i]
    for x in range(1, n + 1):
        t = -(c1 * x + c2 * y)
        q, r = np.divmod(t, c3)
        ok = (r == 0) & (q >= 1) & (q <= n)
        if not ok.any():
            continue
        cx = cols[x - 1]
        mono = ok & (coly == cx) & (cols[np.clip(q, 1, n) - 1] == cx)
        idx = np.flatnonzero(mono)
        if idx.size:
            i = idx[0]
            return Witness((x, int(y[i]), int(q[i])), int(cx))
    return None


def va_coloring(a: int, k: int, n: int) -> Coloring:
    """Color i by (highest power of a dividing i) mod k; valid for
    a(x-y) = bz with gcd(a, b) = 1 on [1 .. a^k - 1]."""
    if a < 2:
        raise ValueError("a must be >= 2")
    if n >= a**k:
        raise ColoringNotApplicable(f"domain must stay below {a}^{k} = {a**k}")
    colors = tuple(base_valuation(i, a) % k + 1 for i in range(1, n + 1))
    return Coloring(n=n, k=k, colors=colors)


def chi_aminus1_coloring(a: int) -> Coloring:
    """The 3-coloring of [1 .. a^3 + (a-1)^2 - 1] avoiding monochromatic
    solutions of a(x-y) = (a-1)z, for a >= 3."""
    if a < 3:
        raise ValueError("a must be >= 3")
    n = a**3 + (a - 1) ** 2 - 1
    colors = []
    for i in range(1, n + 1):
        v = base_valuation(i, a)
        if v == 2 or (v == 0 and (i < a**2 - a or i > a**3 - a)):
            colors.append(1)
        elif v == 1:
            colors.append(2)
        else:
            colors.append(3)
    return Coloring(n=n, k=3, colors=tuple(colors))


def _ceil_log_ratio(n: int, num: int, den: int, e: int) -> int:
    """ceil(log_d n) for d = (num/den)^(1/e) > 1, via exact integer power
    comparisons: the smallest i >= 0 with num^i >= n^e * den^i."""
    i = 0
    lhs = 1
    rhs = n**e
    while lhs < rhs:
        i += 1
        lhs *= num
        rhs *= den
    return i


def _ceil_log_ratio_desc(n: int, num: int, den: int, e: int) -> int:
    """ceil(log_d n) for d = (num/den)^(1/e) < 1 (num < den): the answer is
    -t0 where t0 is the largest t >= 0 with den^t <= n^e * num^t."""
    t = 0
    lhs = 1  # den^t
    rhs = n**e  # n^e * num^t
    while lhs * den <= rhs * num:
        t += 1
        lhs *= den
        rhs *= num
    return -t


def logd_coloring(eq: LinearEquation, k: int, variant: str, n: int) -> Coloring:
    """The interval coloring chi(i) = ceil(log_d i) mod k for sum-form
    equations a_1 x_1 + ... + a_{m-1} x_{m-1} = a_m x_m.

    variant 'I' uses d = (S/a_m)^(1/(k-1)) and requires S <= a_1^(k-1) / a_m^(k-2);
    variant 'II' uses d = (a_1/a_m)^(1/(k-1)) and requires
    S <= a_1^(1/(k-1)) * a_m^(1-1/(k-1)). All comparisons are exact integer
    power comparisons; no floating point is involved.
    """
    form = eq.sum_form()
    if form is None:
        raise ColoringNotApplicable("equation is not in positive sum form")
    pos, am = form
    a1 = pos[0]
    s = sum(pos)
    if k < 2:
        raise ValueError("k must be >= 2")
    if variant == "I":
        # S * am^(k-2) <= a1^(k-1)
        if s * am ** (k - 2) > a1 ** (k - 1):
            raise ColoringNotApplicable(
                f"S={s} > a1^{k-1}/am^{k-2} = {a1**(k-1)}/{am**(k-2)}"
            )
        if s <= am:
            raise ColoringNotApplicable("interval base d would not exceed 1")
        colors = tuple(
            _ceil_log_ratio(i, s, am, k - 1) % k + 1 for i in range(1, n + 1)
        )
    elif variant == "II":
        # S^(k-1) <= a1 * am^(k-2)
        if s ** (k - 1) > a1 * am ** (k - 2):
            raise ColoringNotApplicable(
                f"S^{k-1} = {s**(k-1)} > a1*am^{k-2} = {a1 * am**(k-2)}"
            )
        if a1 >= am:
            raise ColoringNotApplicable("interval base d would not be below 1")
        colors = tuple(
            _ceil_log_ratio_desc(i, a1, am, k - 1) % k + 1 for i in range(1, n + 1)
        )
    else:
        raise ValueError("variant must be 'I' or 'II'")
    return Coloring(n=n, k=k, colors=colors)


def vp_modk_coloring(p: int, k: int, n: int) -> Coloring:
    """Color i by v_p(i) mod k."""
    colors = tuple(padic_valuation(i, p) % k + 1 for i in range(1, n + 1))
    return Coloring(n=n, k=k, colors=colors)


@dataclass(frozen=True)
class CycleGraph:
    """Functional graph on [1 .. modulus-1] with edges (x, y) iff
    x = multiplier * y mod modulus, together with a proper vertex coloring.

    The graph is a disjoint union of cycles since the multiplier is a unit.
    Uses 2 colors when the multiplier has even order, at most 3 otherwise.
    """

    modulus: int
    multiplier: int
    vertex_colors: tuple[int, ...]  # color of vertex i at index i-1

    @property
    def num_colors(self) -> int:
        return max(self.vertex_colors)

    def check_proper(self) -> bool:
        g, mod = self.multiplier, self.modulus
        for y in range(1, mod):
            x = (g * y) % mod
            if x != y and self.vertex_colors[x - 1] == self.vertex_colors[y - 1]:
                return False
        return True


def _multiplicative_order(g: int, mod: int) -> int:
    if math.gcd(g, mod) != 1:
        raise ValueError("element is not a unit")
    e, acc = 1, g % mod
    while acc != 1:
        acc = (acc * g) % mod
        e += 1
    return e


def cycle_graph_coloring(modulus: int, multiplier: int) -> CycleGraph:
    """Properly color the cycle decomposition of x -> multiplier*x mod modulus
    on the nonzero residues, greedily alternating two colors along each cycle
    and spending a third color only to close odd cycles."""
    g = multiplier % modulus
    if math.gcd(g, modulus) != 1:
        raise ValueError("multiplier must be a unit")
    colors = [0] * (modulus - 1)
    for start in range(1, modulus):
        if colors[start - 1]:
            continue
        cycle = [start]
        cur = (g * start) % modulus
        while cur != start:
            cycle.append(cur)
            cur = (g * cur) % modulus
        if len(cycle) == 1:
            colors[start - 1] = 1
            continue
        for idx, v in enumerate(cycle):
            colors[v - 1] = idx % 2 + 1
        if len(cycle) % 2 == 1:
            colors[cycle[-1] - 1] = 3
    return CycleGraph(modulus=modulus, multiplier=g, vertex_colors=tuple(colors))


def _primes_upto(limit: int):
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return [int(p) for p in np.flatnonzero(sieve)]


def product_coloring_unique_prime(
    eq: LinearEquation, case: str, n: int, p_limit: int = 100
) -> tuple[Coloring, dict]:
    """The 4- or 6-coloring built from a cycle-graph coloring times a residue
    coloring, for 3-variable equations ax+by+cz=0 meeting one of the two
    valuation patterns:

      case 'single': 0 = v_p(a) = v_p(b) = v_p(a+b) < v_p(c) = r,
                     with g = -a * b^{-1} mod p^r;
      case 'pair':   0 = v_p(a) < v_p(b) = v_p(c) = v_p(b+c) = r,
                     with g = -(b/p^r) * (c/p^r)^{-1} mod p^r.

    All role assignments of the three coefficients are searched, over primes
    p <= p_limit. Returns the coloring plus the parameters used. Raises
    ColoringNotApplicable when no prime and role assignment fits or the
    equation is regular.
    """
    if eq.num_vars != 3:
        raise ColoringNotApplicable("needs a 3-variable equation")
    if is_regular(eq):
        raise ColoringNotApplicable("equation is regular")
    found = None
    for p in _primes_upto(p_limit):
        for roles in _role_orders(case):
            a, b, c = (eq.coeffs[i] for i in roles)
            if case == "single":
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
                    found = (p, r, g)
            elif case == "pair":
                if padic_valuation(a, p) == 0 and padic_valuation(b, p) > 0:
                    r = padic_valuation(b, p)
                    if (
                        padic_valuation(c, p) == r
                        and b + c != 0
                        and padic_valuation(b + c, p) == r
                    ):
                        mod = p**r
                        bp = b // p**r
                        cp = c // p**r
                        g = (-bp * pow(cp, -1, mod)) % mod
                        found = (p, r, g)
            else:
                raise ValueError("case must be 'single' or 'pair'")
            if found:
                break
        if found:
            break
    if not found:
        raise ColoringNotApplicable(
            f"no prime <= {p_limit} fits the '{case}' valuation pattern"
        )
    p, r, g = found
    graph = cycle_graph_coloring(p**r, g)
    width = graph.num_colors
    pr = p**r
    q = p ** (2 * r)
    colors = []
    for i in range(1, n + 1):
        m = i
        while m % q == 0:
            m //= q
        if m % pr != 0:
            c1_color = graph.vertex_colors[m % pr - 1]
            colors.append(c1_color)
        else:
            c1_color = graph.vertex_colors[(m // pr) % pr - 1]
            colors.append(width + c1_color)
    meta = {
        "case": case,
        "p": p,
        "r": r,
        "g": g,
        "cycle_colors": width,
        "k": 2 * width,
        "group_modulus_exponent_assumed_r": True,
    }
    return Coloring(n=n, k=2 * width, colors=tuple(colors)), meta


def _role_orders(case: str):
    # 'single': first two roles are symmetric (a, b), third is special (c).
    # 'pair': first role is special (a), last two are symmetric (b, c).
    if case == "single":
        return [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
    return [(0, 1, 2), (1, 0, 2), (2, 0, 1)]
