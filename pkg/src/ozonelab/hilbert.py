"""Hilbert series kept in factored form and exact rank extraction.

A series is an integer polynomial numerator over a product of factors
(1 - t^k).  That restricted shape is enough for every graded algebra this
package handles, and it makes the order of the pole at t = 1 explicit, which
is what the rank computation needs.  General rational functions are rejected
on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonIntegerRank, PoleAtOne, SeriesFormatError, SeriesUnavailable


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _one_minus_tk(k):
    p = [0] * (k + 1)
    p[0] = 1
    p[k] = -1
    return p


def _divide_exact(num, k):
    """num / (1 - t^k) if the division is exact over the integers, else None."""
    # if num = (1 - t^k) * q then q[i] = num[i] + q[i - k]
    q = [0] * len(num)
    for i, c in enumerate(num):
        q[i] = c + (q[i - k] if i >= k else 0)
    for i in range(max(0, len(num) - k), len(num)):
        if q[i] != 0:
            return None
    return _poly_trim(q[:max(1, len(num) - k)])


def _value_at_one(p) -> int:
    return sum(p)

def _divide_by_one_minus_t(p):
    # p = (1 - t) * q exactly, assuming p(1) == 0
    q = [0] * (len(p) - 1 or 1)
    acc = 0
    for i in range(len(p) - 1):
        acc += p[i]
        q[i] = acc
    return _poly_trim(q)


class HilbertSeries:
    """numerator / product of (1 - t^k) factors, with integer coefficients."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=()):
        num = _poly_trim([int(c) for c in numerator])
        den = sorted(int(k) for k in denominator)
        if any(k < 1 for k in den):
            raise SeriesFormatError("denominator factors (1-t^k) need k >= 1")
        # cancel numerator factors that divide exactly
        changed = True
        while changed and num != [0]:
            changed = False
            for i, k in enumerate(den):
                q = _divide_exact(num, k)
                if q is not None:
                    num = q
                    del den[i]
                    changed = True
                    break
        self.numerator = tuple(num)
        self.denominator = tuple(den)

    # -- construction ------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "HilbertSeries":
        return _SeriesParser(text).parse()

    @classmethod
    def free_commutative(cls, weights) -> "HilbertSeries":
        """Series of a polynomial ring on generators of the given degrees."""
        return cls((1,), tuple(weights))

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, int):
            return HilbertSeries([c * other for c in self.numerator], self.denominator)
        if isinstance(other, HilbertSeries):
            return HilbertSeries(
                _poly_mul(list(self.numerator), list(other.numerator)),
                self.denominator + other.denominator,
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    # -- expansion ---------------------------------------------------------

    def expand(self, max_degree: int) -> list[int]:
        """Exact Taylor coefficients in degrees 0..max_degree."""
        coeffs = [0] * (max_degree + 1)
        for i, c in enumerate(self.numerator[:max_degree + 1]):
            coeffs[i] = c
        for k in self.denominator:
            for i in range(k, max_degree + 1):
                coeffs[i] += coeffs[i - k]
        return coeffs

    # -- display -----------------------------------------------------------

    def _num_str(self) -> str:
        parts = []
        for e in range(len(self.numerator)):
            c = self.numerator[e]
            if not c:
                continue
            if e == 0:
                body = str(abs(c))
            else:
                tpow = "t" if e == 1 else f"t^{e}"
                body = tpow if abs(c) == 1 else f"{abs(c)}*{tpow}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+" if c > 0 else "-") + body)
        return "".join(parts) or "0"

    def __str__(self):
        num = self._num_str()
        if not self.denominator:
            return num
        from collections import Counter
        facs = []
        for k, m in sorted(Counter(self.denominator).items()):
            f = f"(1-t^{k})" if k > 1 else "(1-t)"
            facs.append(f if m == 1 else f + f"^{m}")
        den = "*".join(facs)
        if len(facs) > 1:
            den = f"({den})"
        if len(self.numerator) > 1 or self.numerator[0] < 0:
            num = f"({num})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"HilbertSeries({self})"


@dataclass(frozen=True)
class RankReport:
    rank: int
    pi_degree: int | None

    @property
    def is_perfect_square(self) -> bool:
        return self.pi_degree is not None


def rank_at_one(h_big: HilbertSeries, h_small: HilbertSeries) -> RankReport:
    """Limit of h_big / h_small at t = 1 after cancelling (1 - t) powers.

    This is the rank of a module whose Hilbert series is h_big over a
    subring with series h_small, whenever that rank is defined.  The limit
    must come out as a positive integer; its square root is reported when it
    is a perfect square.
    """
    num = list(h_big.numerator)
    for k in h_small.denominator:
        num = _poly_mul(num, _one_minus_tk(k))
    den = list(h_small.numerator)
    for k in h_big.denominator:
        den = _poly_mul(den, _one_minus_tk(k))
    if _poly_trim(den) == [0]:
        raise SeriesFormatError("zero series in rank computation")

    def strip(p):
        v = 0
        while _value_at_one(p) == 0 and len(p) > 1:
            p = _divide_by_one_minus_t(p)
            v += 1
        return p, v

    num, vn = strip(num)
    den, vd = strip(den)
    if vn != vd:
        raise PoleAtOne(
            f"(1-t) multiplicities differ at t=1: {vn} in the numerator, {vd} in the denominator"
        )
    value = Fraction(_value_at_one(num), _value_at_one(den))
    if value.denominator != 1 or value <= 0:
        raise NonIntegerRank(f"series ratio at t=1 is {value}, not a positive integer")
    rank = int(value)
    root = math.isqrt(rank)
    return RankReport(rank, root if root * root == rank else None)


def fit_series(dims: list[int], template: HilbertSeries) -> bool:
    """Check that the expansion of the template matches a computed dim table."""
    if template is None:
        raise SeriesUnavailable("no series template supplied")
    return template.expand(len(dims) - 1) == list(dims)


# ---------------------------------------------------------------------------
# series literals, e.g. "(1-t^16)/((1-t^4)^3*(1-t^8))"
# ---------------------------------------------------------------------------

class _SeriesParser:
    """Parses series literals into a numerator and a list of (1-t^k) factors.

    Parenthesized products keep their factored structure, so that
    "((1-t^4)^3*(1-t^8))" on the denominator side stays a list of factors
    instead of being multiplied out.
    """

    def __init__(self, text):
        self.text = text
        self.i = 0

    def error(self, message):
        raise SeriesFormatError(f"{message} (at position {self.i})")

    def peek(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1
        return self.text[self.i] if self.i < len(self.text) else ""

    def take(self, ch):
        if self.peek() == ch:
            self.i += 1
            return True
        return False

    def read_int(self):
        self.peek()
        start = self.i
        if self.i < len(self.text) and self.text[self.i] == "-":
            self.i += 1
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if self.i == start or self.text[start:self.i] == "-":
            self.error("expected an integer")
        return int(self.text[start:self.i])

    def parse(self) -> HilbertSeries:
        num_factors = self.factors()
        den_factors = []
        if self.take("/"):
            den_factors = self.factors()
        if self.peek():
            self.error("unexpected trailing input")
        numerator = [1]
        for p in num_factors:
            numerator = _poly_mul(numerator, p)
        denom = []
        for p in den_factors:
            k = self._as_one_minus_tk(p)
            if k is None:
                self.error("denominator factors must have the form (1-t^k)")
            denom.append(k)
        return HilbertSeries(numerator, denom)

    @staticmethod
    def _as_one_minus_tk(p):
        p = _poly_trim(list(p))
        if len(p) < 2 or p[0] != 1 or p[-1] != -1:
            return None
        if any(c != 0 for c in p[1:-1]):
            return None
        return len(p) - 1

    def factors(self):
        out = self.fac()
        while self.take("*"):
            out += self.fac()
        return out

    def fac(self):
        base = self.base()
        if self.take("^"):
            e = self.read_int()
            if e < 0:
                self.error("negative exponents are not supported")
            return base * e
        return base

    def base(self):
        c = self.peek()
        if c == "(":
            self.i += 1
            inner = self.sum_or_factors()
            if not self.take(")"):
                self.error("expected ')'")
            return inner
        if c.isdigit() or c == "-":
            return [[self.read_int()]]
        if c == "t":
            self.i += 1
            e = self.read_int() if self.take("^") else 1
            return [[0] * e + [1]]
        self.error("expected '(', an integer or 't'")

    def sum_or_factors(self):
        first = self.factors()
        if self.peek() not in "+-":
            return first
        acc = [1]
        for p in first:
            acc = _poly_mul(acc, p)
        while True:
            if self.take("+"):
                q = self._product_poly()
            elif self.peek() == "-":
                self.i += 1
                q = [-c for c in self._product_poly()]
            else:
                return [_poly_trim(acc)]
            n = max(len(acc), len(q))
            acc = [(acc[i] if i < len(acc) else 0) + (q[i] if i < len(q) else 0)
                   for i in range(n)]

    def _product_poly(self):
        out = [1]
        for p in self.factors():
            out = _poly_mul(out, p)
        return out


def parse_series(text: str) -> HilbertSeries:
    return HilbertSeries.parse(text)
