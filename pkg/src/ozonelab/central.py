"""Centers, twisted centralizers, normal elements, and fixed rings.

Everything here is a finite linear-algebra computation in a fixed degree of
a completed algebra.  The degree plus the largest generator weight must stay
within the completion bound, since commutators land one generator higher.

The normality convention: f is normal with associated automorphism eta when
x * f = f * eta(x) for every generator x.  Equivalently f lies in the
twisted centralizer of eta in its degree.
"""

from __future__ import annotations

from fractions import Fraction

from .autos import FiniteGroupTable, GradedAutomorphism, verify_automorphism
from .cyclo import CycNum, ONE, ZERO
from .errors import (
    DegreeOutOfRange,
    MolienMismatch,
    NonCommutingGenerators,
    NotNormal,
    UnverifiedAutomorphism,
)
from .exactla import Matrix, Subspace, kernel, solve
from .ncalg import FreeElt, RewriteSystem


def _require_degree(rs: RewriteSystem, need: int, what: str):
    if need > rs.completed_to:
        raise DegreeOutOfRange(
            f"{what} needs completion to degree {need}, have {rs.completed_to}")


def _columns_to_matrix(columns, nrows):
    if not columns:
        return Matrix([[] for _ in range(nrows)], cols=0)
    return Matrix([[col[r] for col in columns] for r in range(nrows)],
                  cols=len(columns))


def center_degree(rs: RewriteSystem, d: int) -> Subspace:
    """The subspace of degree-d elements commuting with every generator."""
    pres = rs.pres
    maxw = max(pres.weights)
    _require_degree(rs, d + maxw, "the center computation")
    gb = rs.basis(d + maxw)
    dim = gb.dim(d)
    if dim == 0:
        return Subspace.zero(0)
    columns = []
    for j, w in enumerate(gb.words[d]):
        e = FreeElt.word(w)
        col = []
        for gi, gname in enumerate(pres.names):
            g = pres.gen(gname)
            comm = rs.multiply(e, g) - rs.multiply(g, e)
            col.extend(gb.coords(comm, d + pres.weights[gi]))
        columns.append(col)
    nrows = len(columns[0])
    return kernel(_columns_to_matrix(columns, nrows))


def twisted_centralizer(rs: RewriteSystem, phi: GradedAutomorphism,
                        d: int) -> Subspace:
    """Degree-d solutions of x * f = f * phi(x) over all generators x."""
    if not phi.verified:
        raise UnverifiedAutomorphism(
            "twisted centralizers require a verified automorphism")
    pres = rs.pres
    maxw = max(pres.weights)
    _require_degree(rs, d + maxw, "the twisted centralizer computation")
    gb = rs.basis(d + maxw)
    dim = gb.dim(d)
    if dim == 0:
        return Subspace.zero(0)
    columns = []
    for w in gb.words[d]:
        e = FreeElt.word(w)
        col = []
        for gi, gname in enumerate(pres.names):
            g = pres.gen(gname)
            diff = rs.multiply(g, e) - rs.multiply(e, phi.images[gname])
            col.extend(gb.coords(diff, d + pres.weights[gi]))
        columns.append(col)
    nrows = len(columns[0])
    return kernel(_columns_to_matrix(columns, nrows))


def eta_of_normal(rs: RewriteSystem, f: FreeElt,
                  name: str = "") -> GradedAutomorphism:
    """The automorphism eta with x * f = f * eta(x), for normal f.

    Raises NotNormal when some generator equation has no solution or when
    right multiplication by f is not injective in the degrees involved, and
    NotAutomorphism when the solved images fail verification.
    """
    pres = rs.pres
    f = rs.normal_form(f)
    if f.is_zero():
        raise NotNormal("the zero element has no associated automorphism")
    if not pres.is_homogeneous(f):
        raise NotNormal("normal-element tests require a homogeneous element")
    d = pres.elt_degree(f)
    maxw = max(pres.weights)
    maxrel = max((pres.elt_degree(r) for r in pres.relations), default=0)
    _require_degree(rs, max(d + maxw, maxrel, maxw), "the normality test")
    gb = rs.basis(d + maxw)
    images = {}
    for gname in pres.names:
        w = pres.weights[pres.index_of(gname)]
        target = gb.coords(rs.multiply(pres.gen(gname), f), d + w)
        columns = [gb.coords(rs.multiply(f, FreeElt.word(u)), d + w)
                   for u in gb.words[w]]
        m = _columns_to_matrix(columns, len(target))
        if kernel(m).dim != 0:
            raise NotNormal(
                "right multiplication by the element is not injective in "
                f"degree {w}, so the associated map is not determined")
        sol = solve(m, target)
        if sol is None:
            raise NotNormal(
                f"x * f does not lie in f * A for the generator {gname}")
        images[gname] = gb.from_coords(sol, w)
    return verify_automorphism(rs, images, name=name or "eta")


def is_normal(rs: RewriteSystem, f: FreeElt) -> bool:
    try:
        eta_of_normal(rs, f)
        return True
    except NotNormal:
        return False


def fixed_ring_degree(rs: RewriteSystem, group: FiniteGroupTable,
                      d: int) -> Subspace:
    """Degree-d invariants of a finite automorphism group.

    Cross-checks the kernel dimension against the average trace of the
    group elements on the degree-d piece; a disagreement means one of the
    two routes is wrong and raises MolienMismatch.
    """
    _require_degree(rs, d, "the fixed-ring computation")
    gb = rs.basis(d)
    dim = gb.dim(d)
    if dim == 0:
        return Subspace.zero(0)
    unit_rows = [[ONE if i == j else ZERO for i in range(dim)] for j in range(dim)]
    trace_sum = CycNum.rational(0)
    columns = [[] for _ in range(dim)]
    for phi in group.elements:
        image_rows = [gb.coords(phi(gb.from_coords(unit_rows[j], d)), d)
                      for j in range(dim)]
        for j in range(dim):
            trace_sum = trace_sum + image_rows[j][j]
            diff = [image_rows[j][i] - unit_rows[j][i] for i in range(dim)]
            columns[j].extend(diff)
    space = kernel(_columns_to_matrix(columns, len(columns[0])))
    avg = trace_sum / CycNum.rational(group.order)
    if not avg.is_rational() or avg.as_rational() != Fraction(space.dim):
        raise MolienMismatch(
            f"fixed-space dimension {space.dim} in degree {d} disagrees with "
            f"the average trace {avg}")
    return space


# ---------------------------------------------------------------------------
# subalgebra generators and relations, over any algebra backend
# ---------------------------------------------------------------------------

class AlgebraOps:
    """Minimal backend interface for degreewise subalgebra computations."""

    def dim(self, d: int) -> int:
        raise NotImplementedError

    def coords(self, elt, d: int):
        raise NotImplementedError

    def from_coords(self, vec, d: int):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError


class PlainAlgebraOps(AlgebraOps):
    def __init__(self, rs: RewriteSystem, max_degree: int):
        _require_degree(rs, max_degree, "the requested computation")
        self.rs = rs
        self.gb = rs.basis(max_degree)
        self.max_degree = max_degree

    def dim(self, d):
        return self.gb.dim(d)

    def coords(self, elt, d):
        return self.gb.coords(elt, d)

    def from_coords(self, vec, d):
        return self.gb.from_coords(vec, d)

    def mul(self, a, b):
        return self.rs.multiply(a, b)

    def one(self):
        return FreeElt.one()


class _Echelon:
    """Incremental row echelon over the cyclotomic field."""

    def __init__(self, width):
        self.width = width
        self.rows = []      # list of (pivot_index, row)

    def reduce(self, vec):
        v = list(vec)
        for p, row in self.rows:
            c = v[p]
            if c:
                for i in range(p, self.width):
                    v[i] = v[i] - c * row[i]
        return v

    def add(self, vec):
        """Insert if independent; returns the normalized residue or None."""
        v = self.reduce(vec)
        p = next((i for i, c in enumerate(v) if c), None)
        if p is None:
            return None
        inv = v[p].inverse()
        v = [c * inv for c in v]
        self.rows.append((p, v))
        self.rows.sort(key=lambda t: t[0])
        return v

    def contains(self, vec):
        return all(not c for c in self.reduce(vec))

    @property
    def dim(self):
        return len(self.rows)


def subalgebra_generators(ops: AlgebraOps, pieces, max_degree: int):
    """Minimal homogeneous generators of a graded subalgebra.

    pieces maps each degree 1..max_degree to a Subspace of the ambient
    degree-d piece (in ops coordinates); degree 0 is assumed to be the
    scalars.  Returns a list of (degree, element) pairs, in degree order,
    with deterministic representatives taken from the canonical basis of
    each piece reduced against the products of earlier generators.
    """
    found = []
    span_elts = {0: [ops.one()]}
    for d in range(1, max_degree + 1):
        target = pieces.get(d)
        tdim = target.dim if target is not None else 0
        ech = _Echelon(ops.dim(d))
        if ops.dim(d):
            for gdeg, gelt in found:
                if gdeg >= d:
                    continue
                for belt in span_elts.get(d - gdeg, ()):
                    ech.add(ops.coords(ops.mul(gelt, belt), d))
        new_here = []
        if target is not None:
            for row in target.basis:
                residue = ech.add(list(row))
                if residue is not None:
                    elt = ops.from_coords(residue, d)
                    found.append((d, elt))
                    new_here.append(elt)
        span_elts[d] = [ops.from_coords(list(row), d)
                        for row in (target.basis if target is not None else [])]
        if target is None:
            span_elts[d] = [ops.from_coords(r, d) for _, r in ech.rows]
    return found


def _monomials(degrees, total):
    """Exponent tuples e with sum(e[i] * degrees[i]) == total."""
    n = len(degrees)
    out = []

    def rec(i, rem, acc):
        if i == n:
            if rem == 0:
                out.append(tuple(acc))
            return
        if rem == 0:
            out.append(tuple(acc + [0] * (n - i)))
            return
        top = rem // degrees[i]
        for e in range(top + 1):
            rec(i + 1, rem - e * degrees[i], acc + [e])

    rec(0, total, [])
    return sorted(out)


def find_relations(ops: AlgebraOps, generators, max_degree: int):
    """Polynomial relations among commuting homogeneous elements.

    generators is a list of (degree, element) pairs.  The return value is a
    list of (degree, poly) pairs where poly maps exponent tuples to scalars;
    exponent position i refers to generators[i].  Degree d lists only the
    relations that are new in degree d, i.e. not symbolic multiples of
    earlier ones.  Raises NonCommutingGenerators if some pair of the given
    elements fails to commute.
    """
    degs = [d for d, _ in generators]
    elts = [e for _, e in generators]
    k = len(generators)
    for i in range(k):
        for j in range(i + 1, k):
            if degs[i] + degs[j] <= max_degree:
                ab = ops.mul(elts[i], elts[j])
                ba = ops.mul(elts[j], elts[i])
                if not (ab - ba).is_zero():
                    raise NonCommutingGenerators(
                        f"generators {i} and {j} do not commute")
    eval_cache = {tuple([0] * k): ops.one()}

    def evaluate(mon):
        hit = eval_cache.get(mon)
        if hit is not None:
            return hit
        i = max(p for p, e in enumerate(mon) if e)
        prev = list(mon)
        prev[i] -= 1
        val = ops.mul(evaluate(tuple(prev)), elts[i])
        eval_cache[mon] = val
        return val

    relations = []
    for d in range(1, max_degree + 1):
        mons = _monomials(degs, d)
        if not mons:
            continue
        mon_index = {m: i for i, m in enumerate(mons)}
        adim = ops.dim(d)
        columns = [ops.coords(evaluate(m), d) for m in mons]
        ker = kernel(_columns_to_matrix(columns, adim))
        if ker.dim == 0:
            continue
        ech = _Echelon(len(mons))
        for rdeg, rpoly in relations:
            for m in _monomials(degs, d - rdeg):
                vec = [ZERO] * len(mons)
                for rm, c in rpoly.items():
                    tot = tuple(a + b for a, b in zip(rm, m))
                    vec[mon_index[tot]] = vec[mon_index[tot]] + c
                ech.add(vec)
        for row in ker.basis:
            residue = ech.add(list(row))
            if residue is not None:
                poly = {mons[i]: c for i, c in enumerate(residue) if c}
                relations.append((d, poly))
    return relations


def poly_to_str(poly, names):
    """Render an exponent-tuple polynomial with the given variable names."""
    from .cyclo import scalar_to_str

    def mon_str(mon):
        parts = []
        for nm, e in zip(names, mon):
            if e == 1:
                parts.append(nm)
            elif e > 1:
                parts.append(f"{nm}^{e}")
        return "*".join(parts) if parts else "1"

    parts = []
    for mon in sorted(poly, reverse=True):
        c = poly[mon]
        cs = scalar_to_str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if " + " in cs or " - " in cs:
            cs = f"({cs})"
        ms = mon_str(mon)
        if ms == "1":
            body = cs
        elif cs == "1":
            body = ms
        else:
            body = f"{cs}*{ms}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts) if parts else "0"
