"""Ozone groups by sandwiching, skew recognition, filtered realizations.

The ozone group of a connected graded algebra collects the automorphisms
attached to its normal elements: each homogeneous normal f determines eta
with x * f = f * eta(x), and these maps form a group that fixes the center
elementwise.  Both containments are computable in bounded degree:

  * a lower bound is the subgroup generated by the eta maps of any normal
    elements we can exhibit;
  * an upper bound is the group of automorphisms that fix the center up to
    the inspected degree, enumerated over diagonal maps with entries in a
    chosen cyclotomic level together with any explicitly supplied maps.

When the two bounds coincide the group is certified exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .autos import (
    FiniteGroupTable,
    GradedAutomorphism,
    group_structure,
    verify_automorphism,
)
from .central import (
    _columns_to_matrix,
    _Echelon,
    center_degree,
    eta_of_normal,
    twisted_centralizer,
)
from .cyclo import CycNum, ONE, ZERO, zeta
from .errors import (
    ContradictsDivisibility,
    DegreeOutOfRange,
    NotDegreeOneGenerated,
    NotNormal,
    NotSkew,
    SearchSpaceTooLarge,
)
from .exactla import kernel, solve
from .ncalg import FreeElt, RewriteSystem, skew_presentation

__all__ = [
    "FiniteGroupTable",
    "GradedAutomorphism",
    "OzoneSandwich",
    "SkewRecognition",
    "diagonal_relation_preservers",
    "diagonal_upper_bound",
    "filtered_realization_check",
    "group_structure",
    "ozone_sandwich",
    "skew_recognition",
    "verify_automorphism",
    "witness_equivalence",
]

_ENUMERATION_CAP = 10 ** 7


def _word_profile(word, ngens):
    prof = [0] * ngens
    for i in word:
        prof[i] += 1
    return tuple(prof)


def _center_profiles(rs: RewriteSystem, max_degree: int):
    """Exponent profiles of all words supporting the center up to a degree."""
    gb = rs.basis(max_degree)
    ngens = rs.pres.ngens
    profiles = set()
    for d in range(1, max_degree + 1):
        space = center_degree(rs, d)
        for row in space.basis:
            for w, c in zip(gb.words[d], row):
                if c:
                    profiles.add(_word_profile(w, ngens))
    return profiles


def _diagonal_candidates(rs: RewriteSystem, conductor: int, profiles):
    """Diagonal exponent tuples preserving relations and killing profiles."""
    pres = rs.pres
    n = pres.ngens
    if conductor ** n > _ENUMERATION_CAP:
        raise SearchSpaceTooLarge(
            f"diagonal search space {conductor}^{n} exceeds the cap")
    zpow = [zeta(conductor) ** k for k in range(conductor)]
    rel_data = []
    for r in pres.relations:
        rel_data.append([(w, _word_profile(w, n), c) for w, c in r.terms.items()])
    found = []
    for a in itertools.product(range(conductor), repeat=n):
        ok = True
        for terms in rel_data:
            scaled = FreeElt({w: c * zpow[sum(x * y for x, y in zip(a, p)) % conductor]
                              for w, p, c in terms})
            if not rs.normal_form(scaled).is_zero():
                ok = False
                break
        if not ok:
            continue
        if any(sum(x * y for x, y in zip(a, p)) % conductor for p in profiles):
            continue
        found.append(a)
    return found, zpow


def _diagonal_from_exponents(rs, a, zpow):
    scalars = {n: zpow[a[i]] for i, n in enumerate(rs.pres.names)}
    return verify_automorphism(
        rs, GradedAutomorphism.diagonal(rs, scalars).images,
        name="diag(" + ", ".join(f"z{len(zpow)}^{e}" if e else "1" for e in a) + ")")


def diagonal_relation_preservers(rs: RewriteSystem, conductor=None):
    """All diagonal maps with entries in a root-of-unity level that are
    automorphisms, with no condition on the center."""
    if conductor is None:
        conductor = 2 * rs.pres.conductor
    tuples, zpow = _diagonal_candidates(rs, conductor, profiles=())
    return [_diagonal_from_exponents(rs, a, zpow) for a in tuples]


def diagonal_upper_bound(rs: RewriteSystem, max_degree: int, conductor=None):
    """Diagonal automorphisms at the given level fixing the center up to
    max_degree.  These contain every diagonal member of the ozone group."""
    if conductor is None:
        conductor = 2 * rs.pres.conductor
    maxw = max(rs.pres.weights)
    if max_degree + maxw > rs.completed_to:
        raise DegreeOutOfRange(
            f"inspecting the center to degree {max_degree} needs completion "
            f"to {max_degree + maxw}, have {rs.completed_to}")
    profiles = _center_profiles(rs, max_degree)
    tuples, zpow = _diagonal_candidates(rs, conductor, profiles)
    return [_diagonal_from_exponents(rs, a, zpow) for a in tuples]


def _fixes_center(rs, phi, max_degree):
    gb = rs.basis(max_degree)
    for d in range(1, max_degree + 1):
        space = center_degree(rs, d)
        for row in space.basis:
            f = gb.from_coords(list(row), d)
            if not (phi(f) - f).is_zero():
                return False
    return True


@dataclass
class OzoneSandwich:
    """Two-sided certificate for an ozone group computation."""

    lower: FiniteGroupTable
    upper: FiniteGroupTable
    exact: bool
    lower_structure: tuple
    upper_structure: tuple
    conductor: int
    max_degree: int
    witness_etas: list = field(default_factory=list)

    @property
    def certified(self):
        return self.exact


def _structure_or_none(table):
    return group_structure(table) if table.is_abelian() else None


def ozone_sandwich(rs: RewriteSystem, max_degree: int, conductor=None,
                   extra_autos=(), witnesses=(), expected_rank=None):
    """Sandwich the ozone group between witness eta maps and center-fixers.

    witnesses are homogeneous normal elements; their eta maps generate the
    lower bound.  The upper bound closes the level-`conductor` diagonal
    center-fixers together with those supplied maps in extra_autos that fix
    the center up to max_degree.  If expected_rank is given, the lower
    bound's order must divide it, since the full ozone group's order does.
    """
    if conductor is None:
        conductor = 2 * rs.pres.conductor
    etas = []
    for f in witnesses:
        eta = eta_of_normal(rs, f, name="eta")
        if not _fixes_center(rs, eta, max_degree):
            raise NotNormal(
                "a witness eta does not fix the center to the inspected "
                "degree, which is impossible for a normal element of a "
                "domain; the presentation or witness is wrong")
        etas.append((f, eta))
    diagonals = diagonal_upper_bound(rs, max_degree, conductor)
    pool = list(diagonals) + [e for _, e in etas]
    for phi in extra_autos:
        if not phi.verified:
            phi = verify_automorphism(rs, phi.images, name=phi.name)
        if _fixes_center(rs, phi, max_degree):
            pool.append(phi)
    upper = FiniteGroupTable(pool or [GradedAutomorphism.identity(rs)])
    lower = FiniteGroupTable([e for _, e in etas] or [GradedAutomorphism.identity(rs)])
    if expected_rank is not None and expected_rank % lower.order:
        raise ContradictsDivisibility(
            f"the witness subgroup has order {lower.order}, which does not "
            f"divide the declared rank {expected_rank}")
    return OzoneSandwich(
        lower=lower,
        upper=upper,
        exact=lower.same_elements(upper),
        lower_structure=_structure_or_none(lower),
        upper_structure=_structure_or_none(upper),
        conductor=conductor,
        max_degree=max_degree,
        witness_etas=etas,
    )


# ---------------------------------------------------------------------------
# skew recognition
# ---------------------------------------------------------------------------

@dataclass
class SkewRecognition:
    """A certified skew-commutation structure on a degree-one generated
    algebra: elements t_i spanning degree one, the scalar matrix q with
    eta_{t_i}(t_j) = q[i][j] * t_j, and the degree bound through which the
    graded dimensions match the skew polynomial ring."""

    elements: list
    matrix: list
    dims_match_through: int


def skew_recognition(rs: RewriteSystem, elements=None, max_degree=None):
    """Certify that given degree-one normal elements skew-commute.

    With no elements supplied, the generators themselves are used.  Raises
    NotDegreeOneGenerated if some generator has weight above one, and
    NotSkew when a supplied element is not normal, some eta fails to act
    diagonally on the chosen elements, or the commutation scalars are not
    antisymmetric.
    """
    pres = rs.pres
    if any(w != 1 for w in pres.weights):
        raise NotDegreeOneGenerated(
            "skew recognition requires all generators in degree one")
    if max_degree is None:
        max_degree = rs.completed_to
    if elements is None:
        elements = [pres.gen(n) for n in pres.names]
    elements = [rs.normal_form(e) for e in elements]
    n = len(elements)
    gb = rs.basis(max(2, max_degree))
    if n != pres.ngens:
        raise NotSkew(f"need {pres.ngens} elements to span degree one, got {n}")
    rows = [gb.coords(e, 1) for e in elements]
    ech = _Echelon(pres.ngens)
    for r in rows:
        ech.add(r)
    if ech.dim != pres.ngens:
        raise NotSkew("the chosen elements do not span degree one")
    etas = []
    for i, t in enumerate(elements):
        try:
            etas.append(eta_of_normal(rs, t, name=f"eta_t{i + 1}"))
        except NotNormal as exc:
            raise NotSkew(f"element {i + 1} is not normal: {exc}") from exc
    matrix = [[None] * n for _ in range(n)]
    for i, eta in enumerate(etas):
        for j, t in enumerate(elements):
            img = eta(t)
            c = _proportionality(gb, img, t, 1)
            if c is None:
                raise NotSkew(
                    f"eta of element {i + 1} does not act by a scalar on "
                    f"element {j + 1}")
            matrix[i][j] = c
    for i in range(n):
        if matrix[i][i] != 1:
            raise NotSkew("eta of an element must fix that element")
        for j in range(i + 1, n):
            if matrix[i][j] * matrix[j][i] != 1:
                raise NotSkew("commutation scalars are not antisymmetric")
    for d in range(max_degree + 1):
        if gb.dim(d) != comb(n - 1 + d, n - 1):
            raise NotSkew(
                f"graded dimension {gb.dim(d)} in degree {d} differs from "
                f"the skew polynomial value {comb(n - 1 + d, n - 1)}")
    return SkewRecognition(elements=elements, matrix=matrix,
                           dims_match_through=max_degree)


def _proportionality(gb, img, t, d):
    """img == c * t in degree d: return c, or None."""
    a = gb.coords(img, d)
    b = gb.coords(t, d)
    c = None
    for x, y in zip(a, b):
        if not y:
            if x:
                return None
            continue
        ratio = x / y
        if c is None:
            c = ratio
        elif c != ratio:
            return None
    if c is None:
        c = CycNum.rational(0)
    return c


def skew_presentation_from(rec: SkewRecognition, names=None):
    """Build the skew presentation carried by a recognition certificate."""
    n = len(rec.elements)
    if names is None:
        names = [f"t{i + 1}" for i in range(n)]
    return skew_presentation(names, rec.matrix)


# ---------------------------------------------------------------------------
# filtered realizations
# ---------------------------------------------------------------------------

def filtered_realization_check(rs: RewriteSystem, elements, p, degrees=None):
    """Verify skew commutation up to lower-indexed correction terms.

    elements t_1..t_n are homogeneous; p[i][j] (0-based, i < j) are the
    intended scalars.  For each pair the difference t_j t_i - p t_i t_j must
    lie in the span of ascending monomials in t_1..t_{j-1} of the matching
    degree.  Returns the corrections as a list of (i, j, element) with the
    element written in the ambient algebra; raises NotSkew when some pair
    fails.
    """
    pres = rs.pres
    elements = [rs.normal_form(e) for e in elements]
    if degrees is None:
        degrees = [pres.elt_degree(e) for e in elements]
    n = len(elements)
    corrections = []
    for j in range(n):
        for i in range(j):
            target_deg = degrees[i] + degrees[j]
            if target_deg > rs.completed_to:
                raise DegreeOutOfRange(
                    f"pair ({i + 1}, {j + 1}) needs completion to degree "
                    f"{target_deg}, have {rs.completed_to}")
            gb = rs.basis(target_deg)
            diff = rs.multiply(elements[j], elements[i]) \
                - rs.multiply(elements[i], elements[j]).scale(p[i][j])
            if diff.is_zero():
                continue
            mons = _ascending_monomials(degrees[:j], target_deg)
            cols = []
            vals = []
            for mon in mons:
                acc = FreeElt.one()
                for k, e in enumerate(mon):
                    for _ in range(e):
                        acc = rs.multiply(acc, elements[k])
                cols.append(gb.coords(acc, target_deg))
                vals.append((mon, acc))
            target = gb.coords(diff, target_deg)
            sol = solve(_columns_to_matrix(cols, len(target)), target)
            if sol is None:
                raise NotSkew(
                    f"the commutator of elements {i + 1} and {j + 1} is not "
                    "a combination of lower-indexed monomials")
            corr = FreeElt.zero()
            for c, (_, acc) in zip(sol, vals):
                corr = corr + acc.scale(c)
            corrections.append((i, j, corr))
    return corrections


def _ascending_monomials(degrees, total):
    out = []

    def rec(k, rem, acc):
        if k == len(degrees):
            if rem == 0:
                out.append(tuple(acc))
            return
        top = rem // degrees[k] if degrees[k] else 0
        for e in range(top + 1):
            rec(k + 1, rem - e * degrees[k], acc + [e])

    rec(0, total, [])
    return out


# ---------------------------------------------------------------------------
# witness equivalence
# ---------------------------------------------------------------------------

def witness_equivalence(rs: RewriteSystem, f: FreeElt, g: FreeElt,
                        max_degree: int):
    """Find central z1, z2 with f * z1 == g * z2, both nonzero.

    Returns (z1, z2) as elements, or None if no such pair exists with
    product degree at most max_degree.  Two normal elements related this
    way share their eta map wherever it is defined.
    """
    pres = rs.pres
    f = rs.normal_form(f)
    g = rs.normal_form(g)
    df, dg = pres.elt_degree(f), pres.elt_degree(g)
    for total in range(max(df, dg), max_degree + 1):
        d1, d2 = total - df, total - dg
        z1_space = center_degree(rs, d1)
        z2_space = center_degree(rs, d2)
        if z1_space.dim == 0 or z2_space.dim == 0:
            continue
        gb = rs.basis(total)
        cols = []
        z1_elts = [gb.from_coords(list(r), d1) for r in z1_space.basis]
        z2_elts = [gb.from_coords(list(r), d2) for r in z2_space.basis]
        for z in z1_elts:
            cols.append(gb.coords(rs.multiply(f, z), total))
        for z in z2_elts:
            cols.append([-c for c in gb.coords(rs.multiply(g, z), total)])
        ker = kernel(_columns_to_matrix(cols, gb.dim(total)))
        if ker.dim == 0:
            continue
        k1 = len(z1_elts)
        pick1 = pick2 = None
        for row in ker.basis:
            has1 = any(c for c in row[:k1])
            has2 = any(c for c in row[k1:])
            if has1 and has2:
                pick1 = pick2 = row
                break
            if has1 and pick1 is None:
                pick1 = row
            if has2 and pick2 is None:
                pick2 = row
        if pick1 is None or pick2 is None:
            continue
        row = pick1 if pick1 is pick2 else tuple(
            a + b for a, b in zip(pick1, pick2))
        z1 = FreeElt.zero()
        for c, z in zip(row[:k1], z1_elts):
            z1 = z1 + z.scale(c)
        z2 = FreeElt.zero()
        for c, z in zip(row[k1:], z2_elts):
            z2 = z2 + z.scale(c)
        if z1.is_zero() or z2.is_zero():
            continue
        return z1, z2
    return None
