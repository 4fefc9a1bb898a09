"""Finite-dimensional spans of matrices and their Lie-algebra calculus.

A MatSpace fixes the ambient shape and the coefficient field of the span
arithmetic: base "Qi" treats entries as gaussian-rational coordinates, base
"Q" flattens every entry into (real, imaginary) rational pairs, which is how
real forms sit inside complex matrices.  A Span is a subspace in canonical
form (reduced row echelon basis of coordinate vectors), so equality,
membership, and dimension are all structural.

Everything downstream (stabilizer truncations, radicals, fixed-point sets of
involutions) reduces to the constraint solver `Span.where`, which cuts a span
by finitely many linear conditions.
"""

from fractions import Fraction

from .matrices import Matrix
from .scalars import GaussianRational, RationalQuaternion


class MatSpace:
    """Coordinate chart for n-by-m matrices over base field "Q" or "Qi"."""

    __slots__ = ("n", "m", "base")

    def __init__(self, n, m=None, base="Qi"):
        if base not in ("Q", "Qi"):
            raise ValueError("base must be 'Q' or 'Qi'")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", n if m is None else m)
        object.__setattr__(self, "base", base)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        if not isinstance(other, MatSpace):
            return NotImplemented
        return (self.n, self.m, self.base) == (other.n, other.m, other.base)

    def __hash__(self):
        return hash((self.n, self.m, self.base))

    def ambient_dim(self):
        d = self.n * self.m
        return d if self.base == "Qi" else 2 * d

    def flatten_scalar(self, s):
        """One scalar into base-field coordinates."""
        if isinstance(s, RationalQuaternion):
            raise TypeError("realize quaternionic matrices before span work")
        if self.base == "Qi":
            return [s]
        if isinstance(s, GaussianRational):
            return [s.re, s.im]
        return [Fraction(s), Fraction(0)]

    def to_vec(self, mat):
        if (mat.nrows, mat.ncols) != (self.n, self.m):
            raise ValueError("matrix shape does not match the space")
        out = []
        for e in mat.entries():
            out.extend(self.flatten_scalar(e))
        return tuple(out)

    def from_vec(self, vec):
        if len(vec) != self.ambient_dim():
            raise ValueError("coordinate length mismatch")
        ents = []
        if self.base == "Qi":
            ents = list(vec)
        else:
            for k in range(0, len(vec), 2):
                re, im = vec[k], vec[k + 1]
                ents.append(GaussianRational(re, im) if im != 0 else Fraction(re))
        rows = [ents[i * self.m:(i + 1) * self.m] for i in range(self.n)]
        return Matrix(rows)

    def zero_matrix(self):
        return Matrix.zeros(self.n, self.m)


def _rref_rows(rows):
    """Canonical rref of a list of coordinate tuples; zero rows dropped."""
    if not rows:
        return (), ()
    M, pivots = Matrix(rows).rref()
    return tuple(M.rows[i] for i in range(len(pivots))), pivots


class Span:
    __slots__ = ("space", "rows", "pivots", "basis")

    def __init__(self, space, mats):
        vecs = [space.to_vec(m) for m in mats]
        vecs = [v for v in vecs if any(e != 0 for e in v)]
        rows, pivots = _rref_rows(vecs)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "pivots", pivots)
        object.__setattr__(self, "basis", tuple(space.from_vec(r) for r in rows))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @staticmethod
    def empty(space):
        return Span(space, [])

    @staticmethod
    def full(space):
        mats = []
        n, m = space.n, space.m
        for i in range(n):
            for j in range(m):
                mats.append(Matrix.from_fn(n, m, lambda a, b, i=i, j=j: 1 if (a, b) == (i, j) else 0))
                if space.base == "Q":
                    mats.append(Matrix.from_fn(
                        n, m,
                        lambda a, b, i=i, j=j: GaussianRational(0, 1) if (a, b) == (i, j) else 0))
        return Span(space, mats)

    @property
    def dim(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Span):
            return NotImplemented
        return self.space == other.space and self.rows == other.rows

    def __hash__(self):
        return hash((self.space, self.rows))

    def __repr__(self):
        return "Span(dim=%d over %s %dx%d)" % (self.dim, self.space.base, self.space.n, self.space.m)

    # -- membership -------------------------------------------------------------

    def reduce_vec(self, vec):
        """(coefficients, residual) of vec against the canonical basis."""
        v = list(vec)
        coeffs = []
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            coeffs.append(c)
            if c != 0:
                v = [a - c * b for a, b in zip(v, row)]
        return tuple(coeffs), tuple(v)

    def residual(self, mat):
        return self.reduce_vec(self.space.to_vec(mat))[1]

    def contains(self, mat):
        return all(e == 0 for e in self.residual(mat))

    def coefficients_of(self, mat):
        coeffs, res = self.reduce_vec(self.space.to_vec(mat))
        if any(e != 0 for e in res):
            return None
        return coeffs

    def subspace_of(self, other):
        return all(other.contains(b) for b in self.basis)

    # -- lattice operations --------------------------------------------------------

    def add(self, other):
        self._peer(other)
        return Span(self.space, list(self.basis) + list(other.basis))

    def intersect(self, other):
        self._peer(other)
        if self.dim == 0 or other.dim == 0:
            return Span.empty(self.space)
        N = self.space.ambient_dim()
        cols = []
        for r in self.rows:
            cols.append(list(r))
        for r in other.rows:
            cols.append([-e for e in r])
        M = Matrix(cols).transpose()  # N x (k+l), columns u_i then -v_j
        mats = []
        for sol in M.nullspace():
            a = sol[:self.dim]
            vec = [Fraction(0)] * N
            for ci, row in zip(a, self.rows):
                if ci != 0:
                    vec = [x + ci * y for x, y in zip(vec, row)]
            if any(e != 0 for e in vec):
                mats.append(self.space.from_vec(vec))
        return Span(self.space, mats)

    def _peer(self, other):
        if not isinstance(other, Span) or other.space != self.space:
            raise ValueError("spans live in different spaces")

    def extend_to(self, whole):
        """Matrices from whole's basis completing self's basis inside whole."""
        cur = self
        extra = []
        for b in whole.basis:
            if not cur.contains(b):
                extra.append(b)
                cur = cur.add(Span(self.space, [b]))
        return extra

    # -- constraint solving -----------------------------------------------------------

    def where(self, conds):
        """Largest subspace on which every condition vanishes.

        Each condition maps a matrix to a Matrix, a scalar, or a list of
        scalars; all must be linear in the argument.
        """
        if self.dim == 0 or not conds:
            return self
        rows = []  # one row per constraint component; columns are basis coefficients
        per_basis = []
        for b in self.basis:
            comps = []
            for cond in conds:
                val = cond(b)
                comps.extend(self._flatten_cond(val))
            per_basis.append(comps)
        ncomp = len(per_basis[0])
        if ncomp == 0:
            return self
        for k in range(ncomp):
            rows.append([per_basis[i][k] for i in range(self.dim)])
        sols = Matrix(rows).nullspace()
        mats = []
        for sol in sols:
            vec = [Fraction(0)] * self.space.ambient_dim()
            for ci, row in zip(sol, self.rows):
                if ci != 0:
                    vec = [x + ci * y for x, y in zip(vec, row)]
            mats.append(self.space.from_vec(vec))
        return Span(self.space, mats)

    def _flatten_cond(self, val):
        if isinstance(val, Matrix):
            out = []
            for e in val.entries():
                out.extend(self.space.flatten_scalar(e))
            return out
        if isinstance(val, (list, tuple)):
            out = []
            for s in val:
                out.extend(self.space.flatten_scalar(s))
            return out
        return self.space.flatten_scalar(val)

    # -- Lie structure ------------------------------------------------------------------

    def bracket(self, other):
        self._peer(other)
        mats = []
        for a in self.basis:
            for b in other.basis:
                mats.append(a * b - b * a)
        return Span(self.space, mats)

    def derived_series(self, max_steps=60):
        series = [self]
        while series[-1].dim > 0:
            nxt = series[-1].bracket(series[-1])
            if nxt == series[-1]:
                break
            series.append(nxt)
            if len(series) > max_steps:
                raise ArithmeticError("derived series did not stabilize")
        return series

    def is_solvable(self):
        return self.derived_series()[-1].dim == 0

    def lower_central_series(self, max_steps=60):
        series = [self]
        while series[-1].dim > 0:
            nxt = self.bracket(series[-1])
            if nxt == series[-1]:
                break
            series.append(nxt)
            if len(series) > max_steps:
                raise ArithmeticError("lower central series did not stabilize")
        return series

    def is_nilpotent_algebra(self):
        return self.lower_central_series()[-1].dim == 0

    def is_abelian(self):
        return self.bracket(self).dim == 0

    def centralizer_in(self, ambient):
        """{x in ambient : [x, b] = 0 for every basis element b of self}."""
        conds = [lambda x, b=b: x * b - b * x for b in self.basis]
        return ambient.where(conds)

    def center(self):
        return self.centralizer_in(self)

    def normalizes(self, other):
        """[self, other] contained in other."""
        return self.bracket(other).subspace_of(other)

    def is_ideal_of(self, ambient):
        return self.subspace_of(ambient) and ambient.bracket(self).subspace_of(self)

    def ad_matrix(self, x):
        """Matrix of ad(x) = [x, .] on this span's basis; x must normalize it."""
        cols = []
        for b in self.basis:
            img = x * b - b * x
            coeffs = self.coefficients_of(img)
            if coeffs is None:
                raise ValueError("ad(x) does not preserve the span")
            cols.append(list(coeffs))
        if not cols:
            raise ValueError("ad on a zero span")
        return Matrix(cols).transpose()


def ideal_core(ambient, sub):
    """Largest subspace of sub stable under bracketing with ambient."""
    core = sub
    while True:
        nxt = core.where([
            lambda x, b=b, cur=core: cur.residual(b * x - x * b)
            for b in ambient.basis
        ])
        if nxt == core:
            return core
        core = nxt


def solvable_radical(p):
    """Largest solvable ideal, by trace-form saturation.

    Shrink R through {x in R : tr(x y) = 0 for y in [R, R]} followed by the
    largest p-stable core, until R is solvable.  The trace pairing of the
    defining representation vanishes on (radical, derived algebra), so the
    true radical survives every step; a non-solvable R always shrinks
    strictly, so the loop terminates at exactly the radical.
    """
    R = p
    while not R.is_solvable():
        D = R.bracket(R)
        S = R.where([lambda x, y=y: (x * y).trace() for y in D.basis])
        R2 = ideal_core(p, S)
        if R2 == R:
            raise ArithmeticError("radical saturation stalled on a non-solvable ideal")
        R = R2
    if not R.is_ideal_of(p):
        raise ArithmeticError("radical candidate is not an ideal")
    return R
