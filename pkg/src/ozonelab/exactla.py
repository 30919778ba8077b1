"""Dense exact linear algebra over cyclotomic scalars.

Everything here is deliberately plain: row reduction with full pivot
normalization, kernels, solving, and echelon-basis subspaces.  Degree pieces
of the algebras we care about stay small (a few hundred columns at the very
worst), so a dense representation with exact arithmetic is the right trade.

Pivot rows are chosen among the eligible ones by structural sparsity (fewest
nonzero entries first) to limit fill-in, with the row index as the tie-break
so results are deterministic.
"""

from __future__ import annotations

from .cyclo import CycNum, ONE, ZERO
from .errors import DimensionMismatch


def _as_rows(m):
    if isinstance(m, Matrix):
        return [list(r) for r in m.data]
    return [list(r) for r in m]


class Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols=None):
        self.data = [list(r) for r in data]
        self.rows = len(self.data)
        if self.rows:
            self.cols = len(self.data[0])
            for r in self.data:
                if len(r) != self.cols:
                    raise DimensionMismatch("ragged rows")
        else:
            if cols is None:
                cols = 0
            self.cols = cols

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


def _nonzeros(row):
    return sum(1 for x in row if x)


def rref(m, cols=None):
    """Reduced row echelon form.  Returns (Matrix, pivot column tuple)."""
    rows = _as_rows(m)
    if cols is None:
        cols = m.cols if isinstance(m, Matrix) else (len(rows[0]) if rows else 0)
    nrows = len(rows)
    pivots = []
    top = 0
    for col in range(cols):
        best = None
        best_score = None
        for r in range(top, nrows):
            if rows[r][col]:
                score = (_nonzeros(rows[r]), r)
                if best_score is None or score < best_score:
                    best, best_score = r, score
        if best is None:
            continue
        rows[top], rows[best] = rows[best], rows[top]
        inv = rows[top][col].inverse()
        rows[top] = [x * inv for x in rows[top]]
        prow = rows[top]
        for r in range(nrows):
            if r != top and rows[r][col]:
                c = rows[r][col]
                rows[r] = [a - c * b for a, b in zip(rows[r], prow)]
        pivots.append(col)
        top += 1
        if top == nrows:
            break
    return Matrix(rows, cols), tuple(pivots)


def rank(m) -> int:
    _, pivots = rref(m)
    return len(pivots)


def kernel(m) -> "Subspace":
    """Right null space {v : m v = 0} as a Subspace of the column space."""
    mat = m if isinstance(m, Matrix) else Matrix(m)
    red, pivots = rref(mat)
    free = [c for c in range(mat.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * mat.cols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red.data[r][fc]
        basis.append(v)
    return Subspace.from_vectors(mat.cols, basis)


def solve(m, b):
    """A particular solution of m x = b (free variables 0), or None."""
    mat = m if isinstance(m, Matrix) else Matrix(m)
    if len(b) != mat.rows:
        raise DimensionMismatch("right-hand side length does not match row count")
    aug = [list(r) + [bv] for r, bv in zip(mat.data, b)]
    red, pivots = rref(Matrix(aug, cols=mat.cols + 1))
    if mat.cols in pivots:
        return None
    x = [ZERO] * mat.cols
    for r, pc in enumerate(pivots):
        x[pc] = red.data[r][mat.cols]
    return x


class Subspace:
    """A subspace of an ambient coordinate space, held as a reduced echelon basis.

    Two Subspaces are equal iff their ambient dimension and echelon bases
    coincide entry by entry; since reduced echelon bases are canonical this
    is genuine subspace equality.
    """

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient, basis, pivots):
        self.ambient = ambient
        self.basis = [list(r) for r in basis]
        self.pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, ambient, vectors) -> "Subspace":
        vecs = [list(v) for v in vectors if any(v)]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionMismatch("vector length does not match the ambient dimension")
        if not vecs:
            return cls(ambient, [], ())
        red, pivots = rref(Matrix(vecs, cols=ambient))
        return cls(ambient, red.data[:len(pivots)], pivots)

    @classmethod
    def zero(cls, ambient) -> "Subspace":
        return cls(ambient, [], ())

    @classmethod
    def full(cls, ambient) -> "Subspace":
        rows = []
        for i in range(ambient):
            v = [ZERO] * ambient
            v[i] = ONE
            rows.append(v)
        return cls(ambient, rows, tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords_of(self, v):
        """Coordinates of v in the echelon basis, or None if v is outside."""
        if len(v) != self.ambient:
            raise DimensionMismatch("vector length does not match the ambient dimension")
        residue = list(v)
        coords = []
        for row, pc in zip(self.basis, self.pivots):
            c = residue[pc]
            coords.append(c)
            if c:
                residue = [a - c * b for a, b in zip(residue, row)]
        if any(residue):
            return None
        return coords

    def contains(self, v) -> bool:
        return self.coords_of(v) is not None

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus block construction."""
        if self.ambient != other.ambient:
            raise DimensionMismatch("ambient dimensions differ")
        n = self.ambient
        rows = []
        for r in self.basis:
            rows.append(list(r) + list(r))
        for r in other.basis:
            rows.append(list(r) + [ZERO] * n)
        if not rows:
            return Subspace.zero(n)
        red, pivots = rref(Matrix(rows, cols=2 * n))
        inter = []
        for i, row in enumerate(red.data[:len(pivots)]):
            if pivots[i] >= n:
                inter.append(row[n:])
        return Subspace.from_vectors(n, inter)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient != other.ambient or self.pivots != other.pivots:
            return False
        for a, b in zip(self.basis, other.basis):
            if any(x != y for x, y in zip(a, b)):
                return False
        return True

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"


def member(space: Subspace, v):
    """Spec-facing membership test: coordinates inside, None outside."""
    return space.coords_of(v)
