"""Exact dense matrices and univariate polynomials.

Entries live in the exact scalar tower (Fraction, GaussianRational,
RationalQuaternion); ints are promoted to Fraction on construction and floats
are rejected outright.  Reduction routines (rref, rank, det, inverse,
nullspace, solve, charpoly) assume commutative entries, so quaternionic
matrices must be pushed through their 2x2 complex realization first.

Pivoting is deterministic: columns left to right, first nonzero row wins.
"""

from fractions import Fraction

from .scalars import GaussianRational, RationalQuaternion, complex_realization
from .scalars import conj as scalar_conj


def _norm_entry(x):
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError("matrix entries must be exact scalars: %r" % (x,))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, GaussianRational, RationalQuaternion)):
        return x
    raise TypeError("matrix entries must be exact scalars: %r" % (x,))


class Matrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = tuple(tuple(_norm_entry(e) for e in r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix needs at least one row and column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", len(rows[0]))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zeros(n, m=None):
        m = n if m is None else m
        return Matrix([[0] * m for _ in range(n)])

    @staticmethod
    def identity(n):
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def from_fn(n, m, f):
        return Matrix([[f(i, j) for j in range(m)] for i in range(n)])

    @staticmethod
    def diag(entries):
        es = list(entries)
        return Matrix.from_fn(len(es), len(es), lambda i, j: es[i] if i == j else 0)

    # -- access ----------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def entries(self):
        for r in self.rows:
            yield from r

    def submatrix(self, row_idx, col_idx):
        return Matrix([[self.rows[i][j] for j in col_idx] for i in row_idx])

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return Matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Matrix([[-e for e in r] for r in self.rows])

    def scale(self, c):
        """Left scalar multiple c * self (side matters over quaternions)."""
        c = _norm_entry(c)
        return Matrix([[c * e for e in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch: %dx%d times %dx%d"
                                 % (self.nrows, self.ncols, other.nrows, other.ncols))
            cols = list(zip(*other.rows))
            return Matrix(
                [[_dot(r, c) for c in cols] for r in self.rows]
            )
        try:
            c = _norm_entry(other)
        except TypeError:
            return NotImplemented
        return Matrix([[e * c for e in r] for r in self.rows])

    def __rmul__(self, other):
        try:
            c = _norm_entry(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self):
        return all(e == 0 for e in self.entries())

    def transpose(self):
        return Matrix(list(zip(*self.rows)))

    def conj(self):
        return Matrix([[scalar_conj(e) for e in r] for r in self.rows])

    def conj_transpose(self):
        return self.transpose().conj()

    def trace(self):
        if self.nrows != self.ncols:
            raise ValueError("trace needs a square matrix")
        t = Fraction(0)
        for i in range(self.nrows):
            t = t + self.rows[i][i]
        return t

    def commutator(self, other):
        return self * other - other * self

    def __repr__(self):
        from .scalars import format_scalar
        body = "; ".join(" ".join(format_scalar(e) for e in r) for r in self.rows)
        return "Matrix[%s]" % body

    # -- reduction ---------------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column tuple)."""
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            sel = None
            for i in range(r, self.nrows):
                if rows[i][c] != 0:
                    sel = i
                    break
            if sel is None:
                continue
            rows[r], rows[sel] = rows[sel], rows[r]
            inv = 1 / rows[r][c]
            rows[r] = [inv * e for e in rows[r]]
            for i in range(self.nrows):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return Matrix(rows), tuple(pivots)

    def rank(self):
        return len(self.rref()[1])

    def nullspace(self):
        """Deterministic basis of the right kernel, as row tuples."""
        R, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for i, c in enumerate(pivots):
                v[c] = -R.rows[i][f]
            basis.append(tuple(v))
        return basis

    def solve(self, b):
        """One solution of self @ x = b, or None when inconsistent."""
        b = [_norm_entry(e) for e in b]
        if len(b) != self.nrows:
            raise ValueError("rhs length mismatch")
        aug = Matrix([list(r) + [be] for r, be in zip(self.rows, b)])
        R, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [Fraction(0)] * self.ncols
        for i, c in enumerate(pivots):
            x[c] = R.rows[i][self.ncols]
        return tuple(x)

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("det needs a square matrix")
        rows = [list(r) for r in self.rows]
        n = self.nrows
        sign = 1
        acc = Fraction(1)
        for c in range(n):
            sel = None
            for i in range(c, n):
                if rows[i][c] != 0:
                    sel = i
                    break
            if sel is None:
                return Fraction(0)
            if sel != c:
                rows[c], rows[sel] = rows[sel], rows[c]
                sign = -sign
            p = rows[c][c]
            acc = acc * p
            inv = 1 / p
            for i in range(c + 1, n):
                if rows[i][c] != 0:
                    f = rows[i][c] * inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return acc if sign == 1 else -acc

    def inverse(self):
        if self.nrows != self.ncols:
            raise ValueError("inverse needs a square matrix")
        n = self.nrows
        aug = Matrix([list(r) + [1 if i == j else 0 for j in range(n)]
                      for i, r in enumerate(self.rows)])
        R, pivots = aug.rref()
        if pivots[:n] != tuple(range(n)):
            raise ValueError("matrix is singular")
        return Matrix([r[n:] for r in R.rows])

    def charpoly(self):
        """Characteristic polynomial det(xI - A), monic, by trace recursion."""
        if self.nrows != self.ncols:
            raise ValueError("charpoly needs a square matrix")
        n = self.nrows
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        N = Matrix.identity(n)
        for k in range(1, n + 1):
            AN = self * N
            c = -AN.trace() / k
            coeffs[n - k] = c
            N = AN + Matrix.identity(n).scale(c)
        if not N.is_zero():
            raise ArithmeticError("trace recursion failed to terminate at zero")
        return Poly(coeffs)

    def realize_quaternionic(self):
        """Replace each entry by its 2x2 complex realization block."""
        out = []
        for r in self.rows:
            top, bot = [], []
            for e in r:
                if not isinstance(e, RationalQuaternion):
                    e = RationalQuaternion(e, 0, 0, 0) if not isinstance(e, GaussianRational) \
                        else RationalQuaternion(e.re, e.im, 0, 0)
                block = complex_realization(e)
                top.extend(block[0])
                bot.extend(block[1])
            out.append(top)
            out.append(bot)
        return Matrix(out)


def _dot(row, col):
    acc = None
    for a, b in zip(row, col):
        t = a * b
        acc = t if acc is None else acc + t
    return acc if acc is not None else Fraction(0)


def dump_matrix(mat):
    """Plain-text form: `matrix R C` header, then one row per line."""
    from .scalars import format_scalar
    lines = ["matrix %d %d" % (mat.nrows, mat.ncols)]
    for r in mat.rows:
        lines.append(" ".join(format_scalar(e) for e in r))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    from .scalars import parse_scalar
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix dump")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "matrix":
        raise ValueError("matrix dump must start with 'matrix R C'")
    try:
        nr, nc = int(head[1]), int(head[2])
    except ValueError:
        raise ValueError("bad matrix dimensions: %r" % (lines[0],)) from None
    if len(lines) - 1 != nr:
        raise ValueError("expected %d rows, found %d" % (nr, len(lines) - 1))
    rows = []
    for ln in lines[1:]:
        cells = ln.split()
        if len(cells) != nc:
            raise ValueError("expected %d columns, found %d in %r" % (nc, len(cells), ln))
        rows.append([parse_scalar(c) for c in cells])
    return Matrix(rows)


def hstack(a, b):
    if a.nrows != b.nrows:
        raise ValueError("row count mismatch")
    return Matrix([list(r1) + list(r2) for r1, r2 in zip(a.rows, b.rows)])


def vstack(a, b):
    if a.ncols != b.ncols:
        raise ValueError("column count mismatch")
    return Matrix(list(a.rows) + list(b.rows))


# -- polynomials -----------------------------------------------------------------


class Poly:
    """Dense univariate polynomial c0 + c1 x + ... over an exact field."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [_norm_entry(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @staticmethod
    def x():
        return Poly([0, 1])

    @staticmethod
    def const(c):
        return Poly([c])

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                     for i in range(n)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = _norm_entry(c)
        return Poly([c * e for e in self.coeffs])

    def divmod_by(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly([]), self
        quo = [Fraction(0)] * (dq + 1)
        lead_inv = 1 / other.leading()
        for k in range(dq, -1, -1):
            top = rem[k + other.degree]
            if top == 0:
                continue
            f = top * lead_inv
            quo[k] = f
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - f * b
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other):
        return self.divmod_by(other)[0]

    def __mod__(self, other):
        return self.divmod_by(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(1 / self.leading())

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """(g, u, v) with u*self + v*other = g, g monic."""
        r0, r1 = self, other
        u0, u1 = Poly([1]), Poly([])
        v0, v1 = Poly([]), Poly([1])
        while not r1.is_zero():
            q, r = r0.divmod_by(r1)
            r0, r1 = r1, r
            u0, u1 = u1, u0 - q * u1
            v0, v1 = v1, v0 - q * v1
        if r0.is_zero():
            return r0, u0, v0
        c = 1 / r0.leading()
        return r0.scale(c), u0.scale(c), v0.scale(c)

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def squarefree_part(self):
        """Monic polynomial with the same roots, each simple."""
        if self.degree <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def eval_scalar(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, A):
        n = A.nrows
        acc = Matrix.zeros(n)
        for c in reversed(self.coeffs):
            acc = acc * A + Matrix.identity(n).scale(c)
        return acc

    def shift(self, k):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly([Fraction(0)] * k + list(self.coeffs))

    def __repr__(self):
        from .scalars import format_scalar
        if self.is_zero():
            return "Poly[0]"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(format_scalar(c))
            else:
                xs = "x" if i == 1 else "x^%d" % i
                terms.append(xs if c == 1 else "(%s)%s" % (format_scalar(c), xs))
        return "Poly[%s]" % " + ".join(terms)
