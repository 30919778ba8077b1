"""Finitely presented graded algebras and truncated rewriting completion.

An algebra is given by weighted generators and homogeneous relations in the
free algebra.  Words are tuples of generator indices; elements are sparse
maps from words to cyclotomic scalars.  The monomial order is
degree-lexicographic: compare weighted degree first, then letters from the
left using a declared precedence.  The precedence is a list of generator
names from smallest to largest; the default is declaration order, so for a
two-generator algebra on (x, y) the word yx exceeds xy.

complete() runs overlap (diamond) resolution up to a degree bound D.  The
resulting rewrite system gives unique normal forms in all degrees <= D, and
products are exact as long as the degree of the result stays within the
bound.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .cyclo import CycNum, ONE, ZERO, common_conductor, parse_scalar, scalar_to_str, zeta
from .errors import (
    BudgetExceeded,
    DegreeOutOfRange,
    InconsistentPresentation,
    InhomogeneousRelation,
    NonGradedTwist,
    ScalarSyntaxError,
)
from .hilbert import HilbertSeries

Word = tuple  # tuple of generator indices


@dataclass(frozen=True)
class Generator:
    name: str
    weight: int = 1

    def __post_init__(self):
        if not self.name.isidentifier():
            raise ValueError(f"generator name {self.name!r} is not an identifier")
        if self.weight < 1:
            raise ValueError("generator weights must be >= 1")


class FreeElt:
    """A free-algebra element: sparse map word -> scalar, no zero entries."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for w, c in terms.items():
                if not isinstance(c, CycNum):
                    c = CycNum.rational(c)
                if c:
                    t[tuple(w)] = c
        self.terms = t

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(): ONE})

    @classmethod
    def word(cls, w, coeff=ONE):
        return cls({tuple(w): coeff})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, FreeElt):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        r = FreeElt.__new__(FreeElt)
        r.terms = out
        return r

    def __neg__(self):
        r = FreeElt.__new__(FreeElt)
        r.terms = {w: -c for w, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not isinstance(c, CycNum):
            c = CycNum.rational(c)
        if not c:
            return FreeElt.zero()
        r = FreeElt.__new__(FreeElt)
        r.terms = {w: c * v for w, v in self.terms.items()}
        return r

    def __rmul__(self, c):
        if isinstance(c, (int, CycNum)):
            return self.scale(c)
        return NotImplemented

    def concat(self, other):
        """Product in the free algebra (no rewriting)."""
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                s = out.get(w)
                s = c if s is None else s + c
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        r = FreeElt.__new__(FreeElt)
        r.terms = out
        return r

    def __eq__(self, other):
        if not isinstance(other, FreeElt):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(c == other.terms[w] for w, c in self.terms.items())

    def __hash__(self):
        return hash(frozenset((w, c.key()) for w, c in self.terms.items()))

    def support(self):
        return sorted(self.terms)

    def __repr__(self):
        return f"FreeElt({len(self.terms)} terms)"


class AlgebraPresentation:
    """Generators, homogeneous relations, and optional declared data."""

    def __init__(self, generators, relations, declared_hilbert=None, label="",
                 conductor=None, multidegree_map=None):
        self.generators = list(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        self.names = names
        self.weights = tuple(g.weight for g in self.generators)
        self._index = {g.name: i for i, g in enumerate(self.generators)}
        self.relations = list(relations)
        self.declared_hilbert = declared_hilbert
        self.label = label
        self.multidegree_map = multidegree_map
        for r in self.relations:
            if r.is_zero():
                raise InhomogeneousRelation("zero relation supplied")
            degs = {self.wdeg(w) for w in r.terms}
            if len(degs) != 1:
                raise InhomogeneousRelation(
                    f"relation {self.elt_to_str(r)} mixes degrees {sorted(degs)}")
            if degs.pop() < 2:
                raise InhomogeneousRelation("relations must have degree >= 2")
        cond = conductor or 1
        for r in self.relations:
            cond = _lcm(cond, common_conductor(r.terms.values()))
        self.conductor = cond

    # -- basics ------------------------------------------------------------

    @property
    def ngens(self):
        return len(self.generators)

    def index_of(self, name: str) -> int:
        return self._index[name]

    def gen(self, name: str) -> FreeElt:
        return FreeElt.word((self.index_of(name),))

    def wdeg(self, word: Word) -> int:
        w = self.weights
        return sum(w[i] for i in word)

    def elt_degree(self, f: FreeElt):
        degs = {self.wdeg(w) for w in f.terms}
        if len(degs) > 1:
            raise InhomogeneousRelation("element is not homogeneous")
        return degs.pop() if degs else 0

    def is_homogeneous(self, f: FreeElt) -> bool:
        return len({self.wdeg(w) for w in f.terms}) <= 1

    # -- display -----------------------------------------------------------

    def word_to_str(self, word: Word) -> str:
        if not word:
            return "1"
        out = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            name = self.names[word[i]]
            out.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(out)

    def elt_to_str(self, f: FreeElt) -> str:
        if f.is_zero():
            return "0"
        parts = []
        for w in sorted(f.terms, key=lambda w: (self.wdeg(w), w)):
            c = f.terms[w]
            cs = scalar_to_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if " + " in cs or " - " in cs:
                cs = f"({cs})"
            if not w:
                body = cs
            elif cs == "1":
                body = self.word_to_str(w)
            else:
                body = f"{cs}*{self.word_to_str(w)}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def parse(self, text: str, params=None) -> FreeElt:
        """Parse an element expression, e.g. "x*y - q*y*x - z^2"."""
        return _ExprParser(text, self, params or {}).parse()


def _lcm(a, b):
    import math
    return math.lcm(a, b)


# ---------------------------------------------------------------------------
# element expression grammar (scalar grammar plus generator names and powers)
# ---------------------------------------------------------------------------

class _ExprParser:
    def __init__(self, text, pres, params):
        self.text = text
        self.pres = pres
        self.params = params
        self.i = 0

    def error(self, message):
        raise ScalarSyntaxError(message, pos=self.i)

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
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if self.i == start:
            self.error("expected an integer")
        return int(self.text[start:self.i])

    def read_name(self):
        self.peek()
        start = self.i
        while self.i < len(self.text) and (self.text[self.i].isalnum() or self.text[self.i] == "_"):
            self.i += 1
        return self.text[start:self.i]

    def parse(self):
        v = self.expr()
        self.peek()
        if self.i != len(self.text):
            self.error("unexpected trailing input")
        return v

    def expr(self):
        v = self.term()
        while True:
            if self.take("+"):
                v = v + self.term()
            elif self.take("-"):
                v = v - self.term()
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            if self.take("*"):
                v = v.concat(self.factor())
            elif self.take("/"):
                w = self.factor()
                if set(w.terms) != {()}:
                    self.error("cannot divide by a non-scalar")
                v = v.scale(w.terms[()].inverse())
            else:
                return v

    def factor(self):
        base = self.base()
        if self.take("^"):
            e = self.read_int()
            out = FreeElt.one()
            for _ in range(e):
                out = out.concat(base)
            return out
        return base

    def base(self):
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
        if c.isdigit():
            return FreeElt({(): CycNum.rational(self.read_int())})
        if c.isalpha() or c == "_":
            pos = self.i
            name = self.read_name()
            if name in self.pres._index:
                return self.pres.gen(name)
            if name in self.params:
                val = self.params[name]
                if not isinstance(val, CycNum):
                    val = parse_scalar(str(val))
                return FreeElt({(): val})
            if name[0] == "z" and name[1:].isdigit():
                v = zeta(int(name[1:]))
                if self.take("^"):
                    v = v ** self.read_int()
                return FreeElt({(): v})
            self.i = pos
            self.error(f"unknown name {name!r}")
        self.error("expected a scalar, a generator or '('")


# ---------------------------------------------------------------------------
# monomial order and rewrite systems
# ---------------------------------------------------------------------------

def make_order_key(pres: AlgebraPresentation, order=None):
    """Word sort key for degree-lex with the given precedence list.

    `order` lists generator names from smallest to largest; omitted names are
    an error.  Larger key means larger word.
    """
    if order is None:
        order = list(pres.names)
    if sorted(order) != sorted(pres.names):
        raise ValueError("precedence list must mention each generator exactly once")
    rank = {pres.index_of(n): r for r, n in enumerate(order)}
    weights = pres.weights

    def key(word):
        return (sum(weights[i] for i in word), tuple(rank[i] for i in word))

    return key


class RewriteSystem:
    """A completed-to-degree-D rewriting system for one presentation."""

    def __init__(self, pres, order, rules, completed_to):
        self.pres = pres
        self.order = list(order)
        self.key = make_order_key(pres, order)
        self.rules = dict(rules)          # leading word -> FreeElt of lower terms
        self.completed_to = completed_to
        self._by_len = {}
        for lw in self.rules:
            self._by_len.setdefault(len(lw), {})[lw] = self.rules[lw]
        self._lens = sorted(self._by_len)
        self._nf_cache = {}

    # -- reduction ---------------------------------------------------------

    def _first_reduction(self, word):
        for i in range(len(word)):
            for L in self._lens:
                if i + L > len(word):
                    break
                seg = word[i:i + L]
                if seg in self._by_len[L]:
                    return i, seg
        return None

    def _nf_word(self, word):
        cache = self._nf_cache
        hit = cache.get(word)
        if hit is not None:
            return hit
        stack = [word]
        while stack:
            u = stack[-1]
            if u in cache:
                stack.pop()
                continue
            red = self._first_reduction(u)
            if red is None:
                cache[u] = {u: ONE}
                stack.pop()
                continue
            i, seg = red
            pre, suf = u[:i], u[i + len(seg):]
            rhs = self.rules[seg]
            children = [pre + t + suf for t in rhs.terms]
            missing = [c for c in children if c not in cache]
            if missing:
                stack.extend(missing)
                continue
            acc = {}
            for t, c in rhs.terms.items():
                for t2, c2 in cache[pre + t + suf].items():
                    s = acc.get(t2)
                    s = c * c2 if s is None else s + c * c2
                    if s:
                        acc[t2] = s
                    else:
                        acc.pop(t2, None)
            cache[u] = acc
            stack.pop()
        return cache[word]

    def normal_form(self, f: FreeElt) -> FreeElt:
        """The unique irreducible representative of f, degree-checked."""
        out = {}
        for w, c in f.terms.items():
            if self.pres.wdeg(w) > self.completed_to:
                raise DegreeOutOfRange(
                    f"word of degree {self.pres.wdeg(w)} exceeds the completion bound "
                    f"{self.completed_to}")
            for t, v in self._nf_word(w).items():
                s = out.get(t)
                s = c * v if s is None else s + c * v
                if s:
                    out[t] = s
                else:
                    out.pop(t, None)
        r = FreeElt.__new__(FreeElt)
        r.terms = out
        return r

    def multiply(self, f: FreeElt, g: FreeElt) -> FreeElt:
        """Product in the algebra; the result degree must stay in bounds."""
        return self.normal_form(f.concat(g))

    def is_irreducible_word(self, word) -> bool:
        return self._first_reduction(word) is None

    def basis(self, max_degree: int) -> "GradedBasis":
        """Graded basis up to max_degree; reuses a previously built one."""
        cached = getattr(self, "_basis_cache", None)
        if cached is None or cached.max_degree < max_degree:
            cached = GradedBasis(self, max_degree)
            self._basis_cache = cached
        return cached

    def leading_word(self, f: FreeElt):
        if f.is_zero():
            return None
        return max(f.terms, key=self.key)

    def apply_gen_images(self, images: dict, f: FreeElt) -> FreeElt:
        """Substitute generator images (FreeElt values) into f, then reduce."""
        out = FreeElt.zero()
        img = [images[n] for n in self.pres.names]
        cache = {}
        for w, c in f.terms.items():
            piece = cache.get(w)
            if piece is None:
                piece = FreeElt.one()
                for i in w:
                    piece = piece.concat(img[i])
                cache[w] = piece
            out = out + piece.scale(c)
        return self.normal_form(out)


def complete(pres: AlgebraPresentation, max_degree: int, order=None,
             rule_budget: int = 10000) -> RewriteSystem:
    """Truncated overlap completion up to weighted degree max_degree."""
    key = make_order_key(pres, order)
    rules = {}          # lw -> rhs FreeElt
    by_len = {}
    lens = []

    def first_reduction(word):
        for i in range(len(word)):
            for L in lens:
                if i + L > len(word):
                    break
                seg = word[i:i + L]
                if seg in by_len.get(L, ()):
                    return i, seg
        return None

    def nf(f: FreeElt) -> FreeElt:
        # plain repeated reduction; no caching because rules keep changing
        acc = dict(f.terms)
        out = {}
        while acc:
            w = max(acc, key=key)
            c = acc.pop(w)
            if not c:
                continue
            red = first_reduction(w)
            if red is None:
                s = out.get(w)
                s = c if s is None else s + c
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
                continue
            i, seg = red
            pre, suf = w[:i], w[i + len(seg):]
            for t, v in rules[seg].terms.items():
                w2 = pre + t + suf
                s = acc.get(w2)
                s = c * v if s is None else s + c * v
                if s:
                    acc[w2] = s
                else:
                    acc.pop(w2, None)
        r = FreeElt.__new__(FreeElt)
        r.terms = out
        return r

    def add_rule(lw, rhs):
        rules[lw] = rhs
        by_len.setdefault(len(lw), {})[lw] = rhs
        if len(lw) not in lens:
            lens.append(len(lw))
            lens.sort()

    def drop_rule(lw):
        rhs = rules.pop(lw)
        group = by_len[len(lw)]
        del group[lw]
        if not group:
            del by_len[len(lw)]
            lens.remove(len(lw))
        return rhs

    pending = deque()
    for r in pres.relations:
        if pres.elt_degree(r) <= max_degree:
            pending.append(r)

    while pending:
        f = nf(pending.popleft())
        if f.is_zero():
            continue
        lw = max(f.terms, key=key)
        if pres.wdeg(lw) == 0:
            raise InconsistentPresentation("the relations force 1 = 0")
        c = f.terms[lw]
        rhs = FreeElt({w: -(v / c) for w, v in f.terms.items() if w != lw})
        # retire any existing rule whose leading word contains the new one
        stale = [u for u in rules if len(u) >= len(lw) and _contains(u, lw)]
        for u in stale:
            old_rhs = drop_rule(u)
            pending.append(FreeElt.word(u) - old_rhs)
        add_rule(lw, rhs)
        if len(rules) > rule_budget:
            raise BudgetExceeded(
                f"rewrite rule budget of {rule_budget} exceeded at degree bound {max_degree}")
        # overlaps of the new rule with every current rule, both ways
        for other in list(rules):
            pairs = ((lw, lw),) if other == lw else ((lw, other), (other, lw))
            for u, v in pairs:
                fu, fv = rules[u], rules[v]
                for k in range(1, min(len(u), len(v))):
                    if u[len(u) - k:] == v[:k]:
                        a = u[:len(u) - k]
                        b = v[k:]
                        if pres.wdeg(u + b) > max_degree:
                            continue
                        s = fu.concat(FreeElt.word(b)) - FreeElt.word(a).concat(fv)
                        pending.append(s)

    # interreduce right-hand sides so the final system is canonical
    changed = True
    while changed:
        changed = False
        for lw in sorted(rules, key=key):
            red = nf(rules[lw])
            if red.terms != rules[lw].terms:
                rules[lw] = red
                by_len[len(lw)][lw] = red
                changed = True

    return RewriteSystem(pres, order or list(pres.names), rules, max_degree)


def _contains(big, small):
    n, m = len(big), len(small)
    if m > n:
        return False
    return any(big[i:i + m] == small for i in range(n - m + 1))


# ---------------------------------------------------------------------------
# graded bases
# ---------------------------------------------------------------------------

class GradedBasis:
    """Irreducible words per degree, with coordinates and a certification log."""

    def __init__(self, rs: RewriteSystem, max_degree: int):
        if max_degree > rs.completed_to:
            raise DegreeOutOfRange(
                f"basis degree {max_degree} exceeds the completion bound {rs.completed_to}")
        self.rs = rs
        self.pres = rs.pres
        self.max_degree = max_degree
        words = {0: [()]}
        pool = {0: [()]}
        weights = self.pres.weights
        for d in range(1, max_degree + 1):
            found = []
            for gi in range(self.pres.ngens):
                w = weights[gi]
                for u in pool.get(d - w, ()):
                    cand = u + (gi,)
                    ok = True
                    for L in rs._lens:
                        if L <= len(cand) and cand[len(cand) - L:] in rs._by_len[L]:
                            ok = False
                            break
                    if ok:
                        found.append(cand)
            found.sort(key=rs.key)
            words[d] = found
            pool[d] = found
        self.words = words
        self.index = {d: {w: i for i, w in enumerate(ws)} for d, ws in words.items()}
        self.dims = [len(words[d]) for d in range(max_degree + 1)]
        self.certification = self._certify()

    def _certify(self):
        declared = self.pres.declared_hilbert
        if declared is None:
            return None
        expected = declared.expand(self.max_degree)
        mism = [(d, self.dims[d], expected[d])
                for d in range(self.max_degree + 1) if self.dims[d] != expected[d]]
        return {"ok": not mism, "mismatches": mism}

    def dim(self, d: int) -> int:
        self._check(d)
        return self.dims[d]

    def _check(self, d):
        if d < 0 or d > self.max_degree:
            raise DegreeOutOfRange(f"degree {d} outside 0..{self.max_degree}")

    def coords(self, f: FreeElt, d: int):
        """Coordinate vector of a (normal-form) element in degree d."""
        self._check(d)
        vec = [ZERO] * self.dims[d]
        idx = self.index[d]
        for w, c in f.terms.items():
            pos = idx.get(w)
            if pos is None:
                raise DegreeOutOfRange(
                    f"word {self.pres.word_to_str(w)} is not a degree-{d} normal word")
            vec[pos] = c
        return vec

    def from_coords(self, vec, d: int) -> FreeElt:
        self._check(d)
        return FreeElt({w: c for w, c in zip(self.words[d], vec)})


def graded_basis(rs: RewriteSystem, max_degree: int) -> GradedBasis:
    return GradedBasis(rs, max_degree)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def tensor_product(p1: AlgebraPresentation, p2: AlgebraPresentation) -> AlgebraPresentation:
    """A tensor B: disjoint generators, cross pairs commute."""
    names1 = set(p1.names)
    rename = {}
    gens = [Generator(g.name, g.weight) for g in p1.generators]
    for g in p2.generators:
        name = g.name
        while name in names1 or name in rename.values():
            name = name + "_2"
        rename[g.name] = name
        gens.append(Generator(name, g.weight))
    n1 = p1.ngens
    rels = [FreeElt(dict(r.terms)) for r in p1.relations]
    for r in p2.relations:
        rels.append(FreeElt({tuple(i + n1 for i in w): c for w, c in r.terms.items()}))
    for j in range(p2.ngens):
        for i in range(n1):
            rels.append(FreeElt.word((n1 + j, i)) - FreeElt.word((i, n1 + j)))
    declared = None
    if p1.declared_hilbert is not None and p2.declared_hilbert is not None:
        declared = p1.declared_hilbert * p2.declared_hilbert
    label = " (x) ".join(x for x in (p1.label, p2.label) if x) or ""
    return AlgebraPresentation(gens, rels, declared_hilbert=declared, label=label,
                               conductor=_lcm(p1.conductor, p2.conductor))


def ore_extension(pres: AlgebraPresentation, sigma_images: dict, t_weight: int = 1,
                  t_name: str = "t") -> AlgebraPresentation:
    """A[t; sigma] for sigma acting by scalars and generator permutations.

    sigma_images maps each generator name to a FreeElt that must be a scalar
    multiple of a single generator of the same weight; anything else is a
    NonGradedTwist.  The new relations are t*x - sigma(x)*t.
    """
    name = t_name
    while name in pres.names:
        name += "_"
    gens = list(pres.generators) + [Generator(name, t_weight)]
    ti = len(pres.generators)
    rels = [FreeElt(dict(r.terms)) for r in pres.relations]
    for gname in pres.names:
        gi = pres.index_of(gname)
        img = sigma_images.get(gname)
        if img is None:
            raise NonGradedTwist(f"no image supplied for generator {gname}")
        if len(img.terms) != 1:
            raise NonGradedTwist(
                "only scalar/permutation twists are supported; image of "
                f"{gname} is not a scalar multiple of a single generator")
        (w, c), = img.terms.items()
        if len(w) != 1 or pres.weights[w[0]] != pres.weights[gi]:
            raise NonGradedTwist(
                f"image of {gname} must be a scalar multiple of one generator "
                "of the same weight")
        rels.append(FreeElt({(ti, gi): ONE, (w[0], ti): -c}))
    declared = None
    if pres.declared_hilbert is not None:
        declared = HilbertSeries(pres.declared_hilbert.numerator,
                                 pres.declared_hilbert.denominator + (t_weight,))
    cond = _lcm(pres.conductor, common_conductor(
        c for img in sigma_images.values() for c in img.terms.values()))
    label = f"{pres.label}[{name}; twist]" if pres.label else ""
    return AlgebraPresentation(gens, rels, declared_hilbert=declared, label=label,
                               conductor=cond)


def skew_presentation(names, p, declared=True, label="") -> AlgebraPresentation:
    """Skew polynomial presentation: x_j x_i = p[i][j] x_i x_j for i < j.

    p is indexed p[i][j] by generator position, so the relation list is
    x_j*x_i - p[i][j]*x_i*x_j over all i < j.
    """
    n = len(names)
    gens = [Generator(nm) for nm in names]
    rels = []
    for i in range(n):
        for j in range(i + 1, n):
            rels.append(FreeElt({(j, i): ONE, (i, j): -p[i][j]}))
    h = HilbertSeries((1,), (1,) * n) if declared else None
    return AlgebraPresentation(gens, rels, declared_hilbert=h, label=label)
