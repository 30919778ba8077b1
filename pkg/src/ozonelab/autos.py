"""Graded automorphisms: verification, composition, finite group structure.

An automorphism is stored by its generator images, kept in normal form with
respect to a fixed rewrite system.  Verification checks three things: each
image is homogeneous of the generator's weight, each defining relation maps
to zero, and the induced linear map on every graded piece up to the largest
generator weight is bijective.  For a connected graded algebra that forces
bijectivity in all degrees, so the three checks together certify a genuine
graded automorphism.
"""

from __future__ import annotations

from .cyclo import CycNum, ONE, parse_scalar
from .errors import DegreeOutOfRange, NonAbelianGroup, NotAutomorphism, SearchSpaceTooLarge
from .exactla import Matrix, rank
from .ncalg import FreeElt, RewriteSystem, graded_basis


class GradedAutomorphism:
    """Generator images plus a verified flag; composes and applies exactly."""

    __slots__ = ("rs", "images", "name", "verified", "_key")

    def __init__(self, rs: RewriteSystem, images: dict, name: str = "",
                 verified: bool = False):
        self.rs = rs
        self.images = {n: rs.normal_form(images[n]) for n in rs.pres.names}
        self.name = name
        self.verified = verified
        self._key = None

    @classmethod
    def identity(cls, rs: RewriteSystem):
        images = {n: rs.pres.gen(n) for n in rs.pres.names}
        return cls(rs, images, name="id", verified=True)

    @classmethod
    def diagonal(cls, rs: RewriteSystem, scalars: dict, name: str = ""):
        """The map sending each generator x to scalars[x] * x."""
        images = {}
        for n in rs.pres.names:
            c = scalars[n]
            if not isinstance(c, CycNum):
                c = CycNum.rational(c)
            images[n] = rs.pres.gen(n).scale(c)
        if not name:
            from .cyclo import scalar_to_str
            name = "diag(" + ", ".join(
                scalar_to_str(images[n].terms[(rs.pres.index_of(n),)])
                if images[n] else "0" for n in rs.pres.names) + ")"
        return cls(rs, images, name=name)

    def __call__(self, f: FreeElt) -> FreeElt:
        return self.rs.apply_gen_images(self.images, f)

    def is_identity(self) -> bool:
        pres = self.rs.pres
        return all(self.images[n] == pres.gen(n) for n in pres.names)

    def is_diagonal(self) -> bool:
        pres = self.rs.pres
        for n in pres.names:
            img = self.images[n]
            if len(img.terms) != 1:
                return False
            (w, _c), = img.terms.items()
            if w != (pres.index_of(n),):
                return False
        return True

    def diagonal_scalars(self) -> dict:
        """Generator name -> scalar, for diagonal maps only."""
        pres = self.rs.pres
        out = {}
        for n in pres.names:
            img = self.images[n]
            (w, c), = img.terms.items()
            if w != (pres.index_of(n),):
                raise ValueError("automorphism is not diagonal")
            out[n] = c
        return out

    def compose(self, other: "GradedAutomorphism") -> "GradedAutomorphism":
        """self after other: (self.compose(other))(f) = self(other(f))."""
        if self.rs is not other.rs:
            raise ValueError("automorphisms live over different rewrite systems")
        images = {n: self(other.images[n]) for n in self.rs.pres.names}
        name = f"{self.name}*{other.name}" if self.name and other.name else ""
        return GradedAutomorphism(self.rs, images, name=name,
                                  verified=self.verified and other.verified)

    def key(self):
        if self._key is None:
            pres = self.rs.pres
            self._key = tuple(
                tuple(sorted((w, c.key()) for w, c in self.images[n].terms.items()))
                for n in pres.names)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, GradedAutomorphism):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GradedAutomorphism({self.name or self.key()})"

    def describe(self) -> dict:
        pres = self.rs.pres
        return {n: pres.elt_to_str(self.images[n]) for n in pres.names}


def automorphism_from_exprs(rs: RewriteSystem, exprs: dict, name: str = "",
                            params=None) -> GradedAutomorphism:
    """Parse generator-image expressions and verify the result."""
    pres = rs.pres
    missing = [n for n in pres.names if n not in exprs]
    if missing:
        raise NotAutomorphism(f"no image given for generator(s) {', '.join(missing)}")
    images = {n: pres.parse(exprs[n], params=params) for n in pres.names}
    return verify_automorphism(rs, images, name=name)


def verify_automorphism(rs: RewriteSystem, images: dict,
                        name: str = "") -> GradedAutomorphism:
    """Certify generator images as a graded automorphism or raise."""
    pres = rs.pres
    phi = GradedAutomorphism(rs, images, name=name)
    for n in pres.names:
        img = phi.images[n]
        w = pres.weights[pres.index_of(n)]
        if img.is_zero():
            raise NotAutomorphism(f"the image of {n} is zero")
        if not pres.is_homogeneous(img) or pres.elt_degree(img) != w:
            raise NotAutomorphism(
                f"the image of {n} is not homogeneous of degree {w}")
    maxrel = max((pres.elt_degree(r) for r in pres.relations), default=0)
    need = max(maxrel, max(pres.weights))
    if need > rs.completed_to:
        raise DegreeOutOfRange(
            f"verification needs completion to degree {need}, "
            f"have {rs.completed_to}")
    for r in pres.relations:
        if not phi(r).is_zero():
            raise NotAutomorphism(
                f"the relation {pres.elt_to_str(r)} is not preserved")
    gb = graded_basis(rs, max(pres.weights))
    for d in range(1, max(pres.weights) + 1):
        dim = gb.dim(d)
        if dim == 0:
            continue
        rows = [gb.coords(phi(gb.from_coords([ONE if i == j else 0 for i in range(dim)], d)), d)
                for j in range(dim)]
        if rank(Matrix(rows)) != dim:
            raise NotAutomorphism(f"the induced map on degree {d} is singular")
    phi.verified = True
    return phi


# ---------------------------------------------------------------------------
# finite groups of automorphisms
# ---------------------------------------------------------------------------

class FiniteGroupTable:
    """A finite set of automorphisms closed under composition.

    Stores the elements, the multiplication table, inverses, and element
    orders.  Construction closes the given generators under composition and
    fails if the closure passes the cap.
    """

    def __init__(self, generators, cap: int = 20000):
        if not generators:
            raise ValueError("at least one automorphism is required")
        rs = generators[0].rs
        ident = GradedAutomorphism.identity(rs)
        elements = [ident]
        index = {ident.key(): 0}
        frontier = [ident]
        gens = []
        for g in generators:
            if g.key() not in index:
                index[g.key()] = len(elements)
                elements.append(g)
                frontier.append(g)
                gens.append(g)
        # breadth-first closure under left multiplication by the generators
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    p = g.compose(a)
                    if p.key() not in index:
                        index[p.key()] = len(elements)
                        elements.append(p)
                        nxt.append(p)
                        if len(elements) > cap:
                            raise SearchSpaceTooLarge(
                                f"closure exceeded {cap} elements")
            frontier = nxt
        self.elements = elements
        self.index = index
        n = len(elements)
        self.table = [[index[elements[i].compose(elements[j]).key()]
                       for j in range(n)] for i in range(n)]
        self.inverse = [0] * n
        for i in range(n):
            for j in range(n):
                if self.table[i][j] == 0:
                    self.inverse[i] = j
                    break
        self._orders = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_abelian(self) -> bool:
        t = self.table
        n = len(t)
        return all(t[i][j] == t[j][i] for i in range(n) for j in range(i + 1, n))

    def element_orders(self):
        if self._orders is None:
            orders = []
            for i in range(len(self.elements)):
                k, cur = 1, i
                while cur != 0:
                    cur = self.table[cur][i]
                    k += 1
                orders.append(k)
            self._orders = orders
        return self._orders

    def power(self, i: int, e: int) -> int:
        cur = 0
        for _ in range(e):
            cur = self.table[cur][i]
        return cur

    def contains(self, phi: GradedAutomorphism) -> bool:
        return phi.key() in self.index

    def same_elements(self, other: "FiniteGroupTable") -> bool:
        return set(self.index) == set(other.index)


def group_structure(table: FiniteGroupTable):
    """Invariant factors of a finite abelian group, largest first.

    For each prime p dividing the order, count the solutions of
    x^(p^k) = e.  The base-p logs of those counts grow by a non-increasing
    sequence of jumps, and jump k equals the number of cyclic p-factors of
    exponent at least k.  Conjugating that sequence gives the p-exponents,
    and the invariant factors are assembled prime by prime.
    """
    if not table.is_abelian():
        raise NonAbelianGroup("invariant factors require an abelian group")
    if table.order == 1:
        return ()
    orders = table.element_orders()
    exponents_by_prime = {}
    for p in _prime_factors(table.order):
        jumps = []
        s_prev = 0
        k = 1
        while True:
            count = sum(1 for o in orders if _divides_ppow(o, p, k))
            s_k = _ilog(count, p)
            if s_k == s_prev:
                break
            jumps.append(s_k - s_prev)
            s_prev = s_k
            k += 1
        exps = [sum(1 for d in jumps if d > j) for j in range(jumps[0])]
        exponents_by_prime[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in exponents_by_prime.values())
    invariants = []
    for i in range(width):
        f = 1
        for p, exps in exponents_by_prime.items():
            if i < len(exps):
                f *= p ** exps[i]
        invariants.append(f)
    return tuple(invariants)


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _divides_ppow(o, p, k):
    for _ in range(k):
        if o == 1:
            return True
        if o % p:
            return False
        o //= p
    return o == 1


def _ilog(n, p):
    e = 0
    while n > 1:
        if n % p:
            raise ValueError("count is not a power of the expected prime")
        n //= p
        e += 1
    return e
