"""Linear homogeneous equations and their positive solutions in a box."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

__all__ = [
    "LinearEquation",
    "EquationError",
    "parse_equation",
    "enumerate_solutions",
    "solutions_array",
    "is_regular",
    "is_two_regular",
    "padic_valuation",
    "base_valuation",
]


class EquationError(ValueError):
    """Raised for malformed or unsupported equations."""


@dataclass(frozen=True)
class LinearEquation:
    """The equation sum(coeffs[i] * x_i) = 0 with nonzero integer coefficients."""

    coeffs: tuple[int, ...]
    display_form: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise EquationError("need at least 2 variables")
        if any(c == 0 for c in self.coeffs):
            raise EquationError("zero coefficients are not allowed")

    @property
    def num_vars(self) -> int:
        return len(self.coeffs)

    @property
    def coeff_gcd(self) -> int:
        return math.gcd(*(abs(c) for c in self.coeffs))

    def __str__(self) -> str:
        if self.display_form:
            return self.display_form
        return ",".join(str(c) for c in self.coeffs)

    def is_solution(self, values) -> bool:
        if len(values) != self.num_vars:
            return False
        return sum(c * int(v) for c, v in zip(self.coeffs, values)) == 0

    def sum_form(self) -> tuple[tuple[int, ...], int] | None:
        """Split into (positive coefficients sorted ascending, a_m) when the
        equation can be written a_1 x_1 + ... + a_{m-1} x_{m-1} = a_m x_m,
        i.e. exactly one coefficient has the opposite sign from the rest.

        Returns None when no such form exists.
        """
        pos = [c for c in self.coeffs if c > 0]
        neg = [-c for c in self.coeffs if c < 0]
        if len(neg) == 1 and len(pos) >= 2:
            return tuple(sorted(pos)), neg[0]
        if len(pos) == 1 and len(neg) >= 2:
            return tuple(sorted(neg)), pos[0]
        return None


_TERM_RE = re.compile(r"([+-]?)\s*(\d*)\s*\(?\s*([a-z](?:\s*[+-]\s*[a-z])*)\s*\)?")


def _parse_side(side: str, var_order: list[str], coeffs: dict[str, int], sign: int):
    pos = 0
    side = side.strip()
    if not side:
        raise EquationError("empty side of equation")
    while pos < len(side):
        m = _TERM_RE.match(side, pos)
        if not m or m.end() == pos:
            raise EquationError(f"cannot parse equation near {side[pos:]!r}")
        term_sign = -1 if m.group(1) == "-" else 1
        if m.group(1) == "" and pos > 0:
            raise EquationError(f"missing operator near {side[pos:]!r}")
        mult = int(m.group(2)) if m.group(2) else 1
        inner = re.split(r"\s*([+-])\s*", m.group(3))
        inner_sign = 1
        for tok in inner:
            if tok == "+":
                inner_sign = 1
            elif tok == "-":
                inner_sign = -1
            else:
                if tok not in coeffs:
                    var_order.append(tok)
                    coeffs[tok] = 0
                coeffs[tok] += sign * term_sign * inner_sign * mult
        pos = m.end()


def parse_equation(text: str) -> LinearEquation:
    """Parse 'x+y=z', '3(x-y)=2z', 'ax+by=cz' style strings or a raw
    comma-separated coefficient list such as '1,1,-4'."""
    text = text.strip()
    if not text:
        raise EquationError("empty equation")
    if "=" not in text:
        try:
            coeffs = tuple(int(tok) for tok in text.split(","))
        except ValueError as exc:
            raise EquationError(f"bad coefficient list: {text!r}") from exc
        return LinearEquation(coeffs)
    lhs, _, rhs = text.partition("=")
    var_order: list[str] = []
    coeffs: dict[str, int] = {}
    _parse_side(lhs, var_order, coeffs, +1)
    _parse_side(rhs, var_order, coeffs, -1)
    vals = tuple(coeffs[v] for v in var_order)
    if any(c == 0 for c in vals):
        raise EquationError(f"variable cancels to zero coefficient in {text!r}")
    if len(vals) < 2:
        raise EquationError("fewer than 2 variables")
    return LinearEquation(vals, display_form=text)


def enumerate_solutions(eq: LinearEquation, n: int) -> Iterator[tuple[int, ...]]:
    """Yield all positive solutions of eq with every coordinate in [1, n],
    each exactly once, lexicographically in the first m-1 coordinates.

    The last coordinate is solved in closed form from the others.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    m = eq.num_vars
    c = eq.coeffs
    cm = c[-1]

    def rec(prefix: tuple[int, ...], acc: int):
        if len(prefix) == m - 1:
            # acc + cm * xm = 0
            if acc % cm == 0:
                xm = -acc // cm
                if 1 <= xm <= n:
                    yield prefix + (xm,)
            return
        ci = c[len(prefix)]
        for v in range(1, n + 1):
            yield from rec(prefix + (v,), acc + ci * v)

    yield from rec((), 0)


def solutions_array(eq: LinearEquation, n: int) -> np.ndarray:
    """All solutions of eq in [1, n]^m as an (s, m) int64 array, in the same
    order as enumerate_solutions. Vectorized fast path for 3-variable
    equations; falls back to the generator otherwise."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = eq.num_vars
    if m != 3:
        sols = list(enumerate_solutions(eq, n))
        if not sols:
            return np.empty((0, m), dtype=np.int64)
        return np.asarray(sols, dtype=np.int64)
    c1, c2, c3 = eq.coeffs
    y = np.arange(1, n + 1, dtype=np.int64)
    chunks = []
    for x in range(1, n + 1):
        t = -(c1 * x + c2 * y)
        q, r = np.divmod(t, c3)
        ok = (r == 0) & (q >= 1) & (q <= n)
        if ok.any():
            ys = y[ok]
            zs = q[ok]
            block = np.empty((ys.size, 3), dtype=np.int64)
            block[:, 0] = x
            block[:, 1] = ys
            block[:, 2] = zs
            chunks.append(block)
    if not chunks:
        return np.empty((0, 3), dtype=np.int64)
    return np.concatenate(chunks)


def is_regular(eq: LinearEquation) -> bool:
    """Rado's criterion: some nonempty subset of the coefficients sums to 0."""
    m = eq.num_vars
    if m > 30:
        raise EquationError("subset scan unsupported beyond 30 variables")
    for r in range(1, m + 1):
        for sub in combinations(eq.coeffs, r):
            if sum(sub) == 0:
                return True
    return False


def is_two_regular(eq: LinearEquation) -> bool:
    """Rado's 2-regularity criterion for m >= 3: mixed coefficient signs."""
    if eq.num_vars < 3:
        raise EquationError("2-regularity criterion requires at least 3 variables")
    return any(c > 0 for c in eq.coeffs) and any(c < 0 for c in eq.coeffs)


def padic_valuation(x: int, p: int) -> int:
    """Largest e with p**e dividing x; x must be nonzero."""
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    x = abs(x)
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def base_valuation(x: int, a: int) -> int:
    """Largest e with a**e dividing x, for any base a >= 2."""
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    if a < 2:
        raise ValueError("base must be >= 2")
    x = abs(x)
    e = 0
    while x % a == 0:
        x //= a
        e += 1
    return e
