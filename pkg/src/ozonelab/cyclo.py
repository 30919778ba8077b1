"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A scalar is stored as a vector of rationals of length phi(N), the residue of a
polynomial in zeta_N modulo the N-th cyclotomic polynomial.  All operations
are exact; there are no floats anywhere.  Scalars with different conductors
interoperate by lifting both to the least common multiple, using the standard
embedding zeta_N = zeta_M ** (M // N) for N dividing M.

The module also provides the small expression grammar used for scalar
literals in input files::

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := rational | root | '(' expr ')' | '-' factor
    root     := 'z' INT ('^' INT)?
    rational := INT ('/' INT)?

so that e.g. ``"1/2 + z6^2"`` denotes 1/2 + zeta_6**2.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero, ScalarSyntaxError, ZeroInput

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# number theory helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("conductor must be a positive integer")
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return tuple(out)


# ---------------------------------------------------------------------------
# integer polynomial arithmetic for the cyclotomic polynomials
# ---------------------------------------------------------------------------

def _int_poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic; division is exact by construction
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for e in range(len(num) - 1, dd - 1, -1):
        c = num[e]
        if c:
            out[e - dd] = c
            for i in range(dd + 1):
                num[e - dd + i] -= c * den[i]
    if any(num):
        raise ArithmeticError("non-exact division while building a cyclotomic polynomial")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first, monic of degree phi(n).

    Computed by dividing x**n - 1 by the product of Phi_d over the proper
    divisors d of n.
    """
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            num = _int_poly_div_exact(num, cyclotomic_poly(d))
    return tuple(num)


def _reduce(n: int, vec) -> tuple[Fraction, ...]:
    """Reduce a coefficient vector modulo Phi_n, returning length phi(n)."""
    deg = euler_phi(n)
    poly = cyclotomic_poly(n)
    v = [Fraction(c) for c in vec]
    if len(v) < deg:
        v.extend([_ZERO] * (deg - len(v)))
    for e in range(len(v) - 1, deg - 1, -1):
        c = v[e]
        if c:
            v[e] = _ZERO
            off = e - deg
            for i in range(deg):
                if poly[i]:
                    v[off + i] -= c * poly[i]
    return tuple(v[:deg])


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [_ZERO] * max(1, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and any(a):
        if not a[-1]:
            a.pop()
            continue
        c = a[-1] * inv_lead
        off = len(a) - len(b)
        q[off] = c
        for i in range(len(b)):
            a[off + i] -= c * b[i]
        a.pop()
    return q, _poly_trim(a)


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [_ZERO] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _poly_trim(out)


def _mod_inverse(n: int, coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Inverse of a nonzero residue modulo Phi_n via the extended Euclid scheme."""
    phi_poly = [Fraction(c) for c in cyclotomic_poly(n)]
    f = _poly_trim(list(coeffs))
    if not f:
        raise DivisionByZero("division by zero in Q(zeta_%d)" % n)
    r0, r1 = phi_poly, f
    t0, t1 = [], [_ONE]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
    if not r1:
        # can only happen for the zero residue, which was excluded above
        raise DivisionByZero("division by zero in Q(zeta_%d)" % n)
    c = r1[0]
    return _reduce(n, [x / c for x in t1])


# ---------------------------------------------------------------------------
# lifting between conductors
# ---------------------------------------------------------------------------

def _lift_coeffs(m: int, n: int, coeffs) -> tuple[Fraction, ...]:
    """Rewrite a residue for conductor m as one for conductor n (m | n)."""
    if m == n:
        return tuple(Fraction(c) for c in coeffs)
    step = n // m
    out = [_ZERO] * (euler_phi(m) * step + 1)
    for j, c in enumerate(coeffs):
        if c:
            out[j * step] += Fraction(c)
    return _reduce(n, out)


@lru_cache(maxsize=None)
def _embedding_rows(m: int, n: int):
    """Row i is the conductor-n coordinate vector of zeta_m ** i, i < phi(m)."""
    rows = []
    for i in range(euler_phi(m)):
        vec = [_ZERO] * (i * (n // m) + 1)
        vec[i * (n // m)] = _ONE
        rows.append(_reduce(n, vec))
    return tuple(rows)


def _solve_columns(rows, target):
    """Solve sum_i x_i * rows[i] == target over the rationals, or None.

    Plain Gaussian elimination on a (phi(n) x phi(m)) system; the matrices
    here are tiny so nothing clever is required.
    """
    ncols = len(rows)
    width = len(target)
    # augmented matrix with unknowns as columns
    mat = [[rows[c][r] for c in range(ncols)] + [target[r]] for r in range(width)]
    pivots = []
    rpos = 0
    for col in range(ncols):
        sel = None
        for r in range(rpos, width):
            if mat[r][col]:
                sel = r
                break
        if sel is None:
            continue
        mat[rpos], mat[sel] = mat[sel], mat[rpos]
        inv = 1 / mat[rpos][col]
        mat[rpos] = [x * inv for x in mat[rpos]]
        for r in range(width):
            if r != rpos and mat[r][col]:
                c = mat[r][col]
                mat[r] = [a - c * b for a, b in zip(mat[r], mat[rpos])]
        pivots.append(col)
        rpos += 1
    for r in range(rpos, width):
        if mat[r][ncols]:
            return None
    sol = [_ZERO] * ncols
    for r, col in enumerate(pivots):
        sol[col] = mat[r][ncols]
    return sol


# ---------------------------------------------------------------------------
# the scalar type
# ---------------------------------------------------------------------------

class CycNum:
    """An element of Q(zeta_N), stored reduced modulo Phi_N."""

    __slots__ = ("conductor", "coeffs", "_key")

    def __init__(self, conductor: int, coeffs):
        if conductor < 1:
            raise ValueError("conductor must be a positive integer")
        self.conductor = conductor
        deg = euler_phi(conductor)
        t = tuple(Fraction(c) for c in coeffs)
        if len(t) != deg:
            t = _reduce(conductor, t)
        self.coeffs = t
        self._key = None

    # -- construction ------------------------------------------------------

    @classmethod
    def rational(cls, value) -> "CycNum":
        return cls(1, (Fraction(value),))

    def lift(self, n: int) -> "CycNum":
        if n == self.conductor:
            return self
        if n % self.conductor != 0:
            raise ValueError("can only lift to a multiple of the conductor")
        return CycNum(n, _lift_coeffs(self.conductor, n, self.coeffs))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coeffs[0] if self.coeffs else _ZERO

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- canonical form ----------------------------------------------------

    def _descend_once(self):
        n = self.conductor
        for p in prime_factors(n):
            m = n // p
            sol = _solve_columns(_embedding_rows(m, n), self.coeffs)
            if sol is not None:
                return CycNum(m, _reduce(m, sol))
        return None

    def key(self):
        """Conductor-independent canonical form, used for equality and hashing.

        Descends to the smallest cyclotomic subfield containing the value, so
        e.g. zeta_6 ** 2 and zeta_3 produce identical keys.
        """
        if self._key is None:
            cur = self
            while True:
                nxt = cur._descend_once()
                if nxt is None:
                    break
                cur = nxt
            self._key = (cur.conductor, cur.coeffs)
        return self._key

    # -- arithmetic --------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, CycNum):
            pass
        elif isinstance(other, (int, Fraction)):
            other = CycNum.rational(other)
        else:
            return None, None
        if self.conductor == other.conductor:
            return self, other
        n = math.lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycNum(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.conductor, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycNum(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return CycNum(self.conductor, tuple(x * f for x in self.coeffs))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        n = a.conductor
        deg = euler_phi(n)
        if deg == 1:
            return CycNum(n, (a.coeffs[0] * b.coeffs[0],))
        out = [_ZERO] * (2 * deg - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        out[i + j] += x * y
        return CycNum(n, _reduce(n, out))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise DivisionByZero("division by zero")
        return CycNum(self.conductor, _mod_inverse(self.conductor, self.coeffs))

    def __truediv__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return CycNum.rational(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        out = CycNum.rational(1)
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    # -- comparison and hashing --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.as_rational() == other
        if not isinstance(other, CycNum):
            return NotImplemented
        if self.conductor == other.conductor:
            return self.coeffs == other.coeffs
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.key())

    # -- display -----------------------------------------------------------

    def __repr__(self):
        return f"CycNum({self.conductor}, {scalar_to_str(self)!r})"

    def __str__(self):
        return scalar_to_str(self)


ZERO = CycNum.rational(0)
ONE = CycNum.rational(1)


def zeta(n: int) -> CycNum:
    """The primitive n-th root of unity zeta_n."""
    if n < 1:
        raise ValueError("the order of a root of unity must be positive")
    if n == 1:
        return CycNum(1, (_ONE,))
    vec = [_ZERO] * euler_phi(n)
    if len(vec) > 1:
        vec[1] = _ONE
        return CycNum(n, tuple(vec))
    return CycNum(n, _reduce(n, [_ZERO, _ONE]))


def root_order(x: CycNum):
    """Multiplicative order of x if it is a root of unity, otherwise None.

    Any root of unity inside Q(zeta_N) has order dividing 2N, so only those
    divisors need to be tested.
    """
    if not isinstance(x, CycNum):
        x = CycNum.rational(x)
    if x.is_zero():
        raise ZeroInput("0 has no multiplicative order")
    for d in divisors(2 * x.conductor):
        if (x ** d) == 1:
            return d
    return None


# ---------------------------------------------------------------------------
# the scalar literal grammar
# ---------------------------------------------------------------------------

class _ScalarParser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def error(self, message: str):
        raise ScalarSyntaxError(message, pos=self.i)

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() == ch:
            self.i += 1
            return True
        return False

    def read_int(self) -> int:
        self.skip_ws()
        start = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if self.i == start:
            self.error("expected an integer")
        return int(self.text[start:self.i])

    def parse(self) -> CycNum:
        v = self.expr()
        self.skip_ws()
        if self.i != len(self.text):
            self.error("unexpected trailing input")
        return v

    def expr(self) -> CycNum:
        v = self.term()
        while True:
            if self.take("+"):
                v = v + self.term()
            elif self.take("-"):
                v = v - self.term()
            else:
                return v

    def term(self) -> CycNum:
        v = self.factor()
        while True:
            if self.take("*"):
                v = v * self.factor()
            elif self.take("/"):
                v = v / self.factor()
            else:
                return v

    def factor(self) -> CycNum:
        c = self.peek()
        if c == "-":
            self.i += 1
            return -self.factor()
        if c == "(":
            self.i += 1
            v = self.expr()
            if not self.take(")"):
                self.error("expected ')'")
            return v
        if c == "z":
            self.i += 1
            n = self.read_int()
            if n < 1:
                self.error("root of unity order must be positive")
            v = zeta(n)
            if self.take("^"):
                v = v ** self.read_int()
            return v
        if c.isdigit():
            return CycNum.rational(self.read_int())
        self.error("expected a rational number, a root of unity or '('")


def parse_scalar(text: str) -> CycNum:
    """Evaluate a scalar literal such as ``"1/2 - z6^2"``."""
    return _ScalarParser(text).parse()


def scalar_to_str(x: CycNum) -> str:
    """Serialize a scalar in a form parse_scalar accepts again."""
    n = x.conductor
    parts = []
    for j in range(len(x.coeffs) - 1, -1, -1):
        c = x.coeffs[j]
        if not c:
            continue
        if j == 0:
            body = str(abs(c))
        else:
            sym = f"z{n}" if j == 1 else f"z{n}^{j}"
            body = sym if abs(c) == 1 else f"{abs(c)}*{sym}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    if not parts:
        return "0"
    return " ".join(parts)


def common_conductor(values) -> int:
    n = 1
    for v in values:
        if isinstance(v, CycNum):
            n = math.lcm(n, v.conductor)
    return n
