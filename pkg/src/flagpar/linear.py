"""Dual systems, finitely supported vectors, and finite-rank operators.

A DualSystem is a pair of countable-dimensional spaces V and W with basis
vectors v_i, w_j indexed by one of the index domains, paired by an exactly
evaluable kernel:

  delta      beta(v_i, w_j) = 1 if i = j else 0
  orderstep  beta(v_q, w_r) = 1 if q > r else 0
  form       W is V itself through a symmetric or alternating form given in
             an adapted basis (hyperbolic pairs plus a definite part);
             beta(v_i, w_j) is the Gram entry

Operators are finite sums of rank-1 terms v (x) w acting by
x |-> beta(x, w) v.  Internally every operator is held in the canonical
elementary expansion {(a, b): coefficient}, so equality is structural.

Subspaces are basis-aligned: a side (V or W) plus a CutSet of indices.
Annihilators and Mackey closures are computed by per-kernel rules that are
exact on the aligned lattice; combinations outside the supported catalog
raise UnsupportedKernel instead of guessing.
"""

from fractions import Fraction

from .indices import NAT, CutSet
from .matrices import Matrix
from .scalars import RationalQuaternion
from .scalars import conj as scalar_conj

DELTA = "delta"
ORDERSTEP = "orderstep"
FORM = "form"

SYMMETRIC = "symmetric"
ALTERNATING = "alternating"
HERMITIAN = "hermitian"


class LinearError(ValueError):
    pass


class UnsupportedKernel(LinearError):
    """Requested operation has no exact rule for this kernel/subspace shape."""


class FormData:
    """Adapted-basis bilinear or sesquilinear form layout over NAT.

    segments: sequence of (style, count) with style in {"pairs", "plus",
    "minus"}; count is a positive int, or None for the single infinite tail,
    which must come last.  "pairs" consumes 2*count indices grouped into
    hyperbolic pairs (i, i+1); "plus"/"minus" are diagonal +1/-1 cells.
    Alternating forms admit only "pairs" segments.
    """

    __slots__ = ("kind", "segments", "starts")

    def __init__(self, kind, segments):
        if kind not in (SYMMETRIC, ALTERNATING, HERMITIAN):
            raise LinearError("unknown form kind: %r" % (kind,))
        segments = tuple((style, count) for style, count in segments)
        if not segments:
            raise LinearError("form needs at least one segment")
        starts = []
        pos = 1
        for k, (style, count) in enumerate(segments):
            if style not in ("pairs", "plus", "minus"):
                raise LinearError("unknown segment style: %r" % (style,))
            if kind == ALTERNATING and style != "pairs":
                raise LinearError("alternating forms have no definite part")
            starts.append(pos)
            if count is None:
                if k != len(segments) - 1:
                    raise LinearError("only the last segment may be infinite")
            else:
                if not isinstance(count, int) or count < 1:
                    raise LinearError("segment count must be a positive int or None")
                pos += 2 * count if style == "pairs" else count
        if segments[-1][1] is not None:
            raise LinearError("the last segment must be the infinite tail")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "starts", tuple(starts))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        if not isinstance(other, FormData):
            return NotImplemented
        return (self.kind, self.segments) == (other.kind, other.segments)

    def __hash__(self):
        return hash((self.kind, self.segments))

    def _segment_at(self, i):
        """(style, start) of the segment containing index i."""
        for (style, count), start in zip(self.segments, self.starts):
            if count is None:
                return style, start
            width = 2 * count if style == "pairs" else count
            if i < start + width:
                return style, start
        raise LinearError("index %d outside the form layout" % i)

    def partner(self, i):
        style, start = self._segment_at(i)
        if style != "pairs":
            return i
        return start + ((i - start) ^ 1)

    def first_of_pair(self, i):
        style, start = self._segment_at(i)
        return style == "pairs" and (i - start) % 2 == 0

    def sign(self, i):
        """beta(v_i, w_partner(i))."""
        style, start = self._segment_at(i)
        if style == "minus":
            return Fraction(-1)
        if self.kind == ALTERNATING and (i - start) % 2 == 1:
            return Fraction(-1)
        return Fraction(1)

    def gram_entry(self, i, j):
        return self.sign(i) if j == self.partner(i) else Fraction(0)

    def partner_cutset(self, cs):
        """Image of an aligned index set under the partner involution."""
        if cs.domain is not NAT:
            raise LinearError("forms are laid out over NAT")
        pieces = []
        for (style, count), start in zip(self.segments, self.starts):
            if count is None:
                seg = CutSet.ray(NAT, "ge", start)
            else:
                width = 2 * count if style == "pairs" else count
                seg = CutSet.interval(NAT, (start, True), (start + width - 1, True))
            part = cs.intersect(seg)
            if part.is_empty():
                continue
            if style != "pairs":
                pieces.append(part)
                continue
            for lo, hi in part.intervals:
                a = lo[0]
                b = hi[0] if hi is not None else None
                first = (a - start) % 2 == 0
                a2 = a
                if not first:
                    pieces.append(CutSet.finite(NAT, [a - 1]))
                    a2 = a + 1
                if b is None:
                    pieces.append(CutSet.ray(NAT, "ge", a2))
                    continue
                b2 = b
                if (b - start) % 2 == 0:
                    pieces.append(CutSet.finite(NAT, [b + 1]))
                    b2 = b - 1
                if a2 <= b2:
                    pieces.append(CutSet.interval(NAT, (a2, True), (b2, True)))
        out = CutSet.empty(NAT)
        for p in pieces:
            out = out.union(p)
        return out

    def close_window(self, window):
        """Smallest partner-closed window containing the given one."""
        s = set(window)
        for i in window:
            s.add(self.partner(i))
        return sorted(s)

    def is_matched_window(self, window):
        s = set(window)
        return all(self.partner(i) in s for i in window)

    def signature_counts(self, upto):
        """(plus, minus) diagonal counts among indices <= upto, pairs excluded."""
        plus = minus = 0
        for i in range(1, upto + 1):
            style, _ = self._segment_at(i)
            if style == "plus":
                plus += 1
            elif style == "minus":
                minus += 1
        return plus, minus


class DualSystem:
    __slots__ = ("domain", "ring", "kernel", "form")

    def __init__(self, domain, ring="Q", kernel=DELTA, form=None):
        if kernel not in (DELTA, ORDERSTEP, FORM):
            raise UnsupportedKernel("unknown kernel: %r" % (kernel,))
        if kernel == FORM:
            if form is None:
                raise LinearError("form kernel needs FormData")
            if domain is not NAT:
                raise LinearError("forms are laid out over NAT")
        elif form is not None:
            raise LinearError("form data requires the form kernel")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "form", form)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        if not isinstance(other, DualSystem):
            return NotImplemented
        return (self.domain is other.domain and self.ring == other.ring
                and self.kernel == other.kernel and self.form == other.form)

    def __hash__(self):
        return hash((self.domain.name, self.ring, self.kernel, self.form))

    def beta(self, i, j):
        """Kernel value beta(v_i, w_j) on basis vectors."""
        i, j = self.domain.check(i), self.domain.check(j)
        if self.kernel == DELTA:
            return Fraction(1) if i == j else Fraction(0)
        if self.kernel == ORDERSTEP:
            return Fraction(1) if self.domain.key(i) > self.domain.key(j) else Fraction(0)
        return self.form.gram_entry(i, j)

    def gram_matrix(self, window):
        return Matrix.from_fn(len(window), len(window),
                              lambda i, j: self.beta(window[i], window[j]))

    def is_sesquilinear(self):
        return self.kernel == FORM and self.form.kind == HERMITIAN

    # -- building blocks -------------------------------------------------------

    def vec(self, side, items):
        return Vec(self, side, items)

    def basis_vec(self, side, i):
        return Vec(self, side, [(i, 1)])

    def op(self, terms=()):
        return FinOp(self, elementary=terms)

    def rank_one(self, v, w):
        return FinOp.rank_one(v, w)

    def elementary(self, a, b, c=1):
        return FinOp(self, elementary=[(a, b, c)])

    def subspace(self, side, cutset):
        return SubspaceDesc(self, side, cutset)

    def full_subspace(self, side):
        return SubspaceDesc(self, side, CutSet.full(self.domain))

    def zero_subspace(self, side):
        return SubspaceDesc(self, side, CutSet.empty(self.domain))


class Vec:
    """Finitely supported vector on one side of a dual system."""

    __slots__ = ("system", "side", "coeffs")

    def __init__(self, system, side, items):
        if side not in ("V", "W"):
            raise LinearError("side must be 'V' or 'W'")
        coeffs = {}
        items = items.items() if isinstance(items, dict) else items
        for idx, c in items:
            idx = system.domain.check(idx)
            c = _coeff(c)
            if c == 0:
                continue
            coeffs[idx] = coeffs.get(idx, Fraction(0)) + c
        coeffs = {k: v for k, v in coeffs.items() if v != 0}
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def support(self):
        return sorted(self.coeffs, key=self.system.domain.key)

    def __getitem__(self, idx):
        return self.coeffs.get(self.system.domain.check(idx), Fraction(0))

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        self._peer(other)
        return Vec(self.system, self.side,
                   list(self.coeffs.items()) + list(other.coeffs.items()))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Vec(self.system, self.side, [(i, -c) for i, c in self.coeffs.items()])

    def scale(self, c):
        return Vec(self.system, self.side, [(i, _coeff(c) * x) for i, x in self.coeffs.items()])

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return (self.system == other.system and self.side == other.side
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.side, tuple(sorted(self.coeffs.items(),
                                             key=lambda kv: self.system.domain.key(kv[0])))))

    def _peer(self, other):
        if not isinstance(other, Vec) or other.system != self.system or other.side != self.side:
            raise LinearError("vectors on different sides or systems")

    def __repr__(self):
        from .scalars import format_scalar
        sym = "v" if self.side == "V" else "w"
        if not self.coeffs:
            return "0"
        parts = ["(%s)%s_%s" % (format_scalar(c), sym, i) for i, c in
                 sorted(self.coeffs.items(), key=lambda kv: self.system.domain.key(kv[0]))]
        return " + ".join(parts)


def _coeff(c):
    if isinstance(c, bool) or isinstance(c, float):
        raise LinearError("coefficients must be exact scalars: %r" % (c,))
    if isinstance(c, int):
        return Fraction(c)
    return c


def pair(v, w):
    """beta(v, w); for hermitian forms the second slot is conjugated."""
    if not isinstance(v, Vec) or not isinstance(w, Vec):
        raise LinearError("pair takes two vectors")
    if v.system != w.system:
        raise LinearError("vectors from different systems")
    if v.side != "V" or w.side != "W":
        raise LinearError("pair takes (V side, W side)")
    sys = v.system
    sesqui = sys.is_sesquilinear()
    acc = Fraction(0)
    for i, a in v.coeffs.items():
        for j, b in w.coeffs.items():
            s = sys.beta(i, j)
            if s != 0:
                bb = scalar_conj(b) if sesqui else b
                acc = acc + a * bb * s
    return acc


class FinOp:
    """Finite-rank operator in canonical elementary form."""

    __slots__ = ("system", "terms")

    def __init__(self, system, elementary=()):
        terms = {}
        for a, b, c in elementary:
            a, b = system.domain.check(a), system.domain.check(b)
            c = _coeff(c)
            if c == 0:
                continue
            key = (a, b)
            cur = terms.get(key, Fraction(0)) + c
            if cur == 0:
                terms.pop(key, None)
            else:
                terms[key] = cur
        key_fn = lambda kv: (system.domain.key(kv[0][0]), system.domain.key(kv[0][1]))
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "terms", tuple(sorted(terms.items(), key=key_fn)))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @staticmethod
    def rank_one(v, w):
        """v (x) w as an operator; expands to elementary terms."""
        if v.side != "V" or w.side != "W":
            raise LinearError("rank_one takes (V side, W side)")
        if v.system != w.system:
            raise LinearError("vectors from different systems")
        elem = []
        for a, ca in v.coeffs.items():
            for b, cb in w.coeffs.items():
                elem.append((a, b, ca * cb))
        return FinOp(v.system, elem)

    def is_zero(self):
        return not self.terms

    def v_support(self):
        return sorted({a for (a, _), _ in self.terms}, key=self.system.domain.key)

    def w_support(self):
        return sorted({b for (_, b), _ in self.terms}, key=self.system.domain.key)

    def coefficient(self, a, b):
        a, b = self.system.domain.check(a), self.system.domain.check(b)
        for (x, y), c in self.terms:
            if (x, y) == (a, b):
                return c
        return Fraction(0)

    def __add__(self, other):
        self._peer(other)
        return FinOp(self.system, [(a, b, c) for (a, b), c in self.terms]
                     + [(a, b, c) for (a, b), c in other.terms])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FinOp(self.system, [(a, b, -c) for (a, b), c in self.terms])

    def scale(self, k):
        k = _coeff(k)
        return FinOp(self.system, [(a, b, k * c) for (a, b), c in self.terms])

    def __rmul__(self, k):
        return self.scale(k)

    def __eq__(self, other):
        if not isinstance(other, FinOp):
            return NotImplemented
        return self.system == other.system and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def _peer(self, other):
        if not isinstance(other, FinOp) or other.system != self.system:
            raise LinearError("operators from different systems")

    def __repr__(self):
        from .scalars import format_scalar
        if not self.terms:
            return "FinOp[0]"
        parts = ["(%s)v_%s(x)w_%s" % (format_scalar(c), a, b) for (a, b), c in self.terms]
        return "FinOp[%s]" % " + ".join(parts)


def apply_op(op, x):
    """op(x) for x in V: sum of beta(x, w_b) c v_a over elementary terms."""
    if not isinstance(x, Vec) or x.side != "V":
        raise LinearError("apply_op acts on V-side vectors")
    if x.system != op.system:
        raise LinearError("operator and vector from different systems")
    sys = op.system
    sesqui = sys.is_sesquilinear()
    items = []
    for (a, b), c in op.terms:
        acc = Fraction(0)
        for q, xq in x.coeffs.items():
            s = sys.beta(q, b)
            if s != 0:
                acc = acc + xq * s
        if sesqui:
            acc = scalar_conj(acc)
        if acc != 0:
            items.append((a, c * acc))
    return Vec(sys, "V", items)


def coapply_op(op, y):
    """Transpose action on W: y |-> sum of beta(v_a, y) c w_b."""
    if not isinstance(y, Vec) or y.side != "W":
        raise LinearError("coapply_op acts on W-side vectors")
    if y.system != op.system:
        raise LinearError("operator and vector from different systems")
    sys = op.system
    sesqui = sys.is_sesquilinear()
    items = []
    for (a, b), c in op.terms:
        acc = Fraction(0)
        for r, yr in y.coeffs.items():
            s = sys.beta(a, r)
            if s != 0:
                acc = acc + (scalar_conj(yr) if sesqui else yr) * s
        if acc != 0:
            items.append((b, c * acc))
    return Vec(sys, "W", items)


def compose(op1, op2):
    """op1 after op2 on rank-1 terms: needs beta(v_c, w_b) glue."""
    op1._peer(op2)
    sys = op1.system
    elem = []
    for (a, b), c1 in op1.terms:
        for (cc, d), c2 in op2.terms:
            s = sys.beta(cc, b)
            if s != 0:
                elem.append((a, d, c1 * (s * c2)))
    return FinOp(sys, elem)


def bracket(op1, op2):
    return compose(op1, op2) - compose(op2, op1)


def trace(op):
    """trace(v (x) w) = beta(v, w); quaternionic input uses the realization."""
    sys = op.system
    quaternionic = any(isinstance(c, RationalQuaternion) for _, c in op.terms)
    acc = Fraction(0)
    for (a, b), c in op.terms:
        s = sys.beta(a, b)
        if s == 0:
            continue
        if quaternionic:
            cq = c if isinstance(c, RationalQuaternion) else RationalQuaternion(c, 0, 0, 0)
            acc = acc + 2 * cq.a * s
        else:
            acc = acc + c * s
    return acc


def skew(v, vp):
    """v (x) v' - v' (x) v in a symmetric-form system (lands in so)."""
    sys = v.system
    if sys.kernel != FORM or sys.form.kind != SYMMETRIC:
        raise UnsupportedKernel("skew needs a symmetric form")
    return _pair_op(v, vp) - _pair_op(vp, v)


def symm(v, vp):
    """v (x) v' + v' (x) v in an alternating-form system (lands in sp)."""
    sys = v.system
    if sys.kernel != FORM or sys.form.kind != ALTERNATING:
        raise UnsupportedKernel("symm needs an alternating form")
    return _pair_op(v, vp) + _pair_op(vp, v)


def _pair_op(v, vp):
    if v.side != "V" or vp.side != "V" or v.system != vp.system:
        raise LinearError("form operators take two V-side vectors of one system")
    w = Vec(v.system, "W", list(vp.coeffs.items()))
    return FinOp.rank_one(v, w)


class SubspaceDesc:
    """Basis-aligned subspace: a side plus a CutSet of basis indices."""

    __slots__ = ("system", "side", "indices")

    def __init__(self, system, side, indices):
        if side not in ("V", "W"):
            raise LinearError("side must be 'V' or 'W'")
        if not isinstance(indices, CutSet) or indices.domain is not system.domain:
            raise LinearError("indices must be a CutSet over the system domain")
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "indices", indices)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        if not isinstance(other, SubspaceDesc):
            return NotImplemented
        return (self.system == other.system and self.side == other.side
                and self.indices == other.indices)

    def __hash__(self):
        return hash((self.side, self.indices))

    def __repr__(self):
        return "SubspaceDesc(%s, %s)" % (self.side, self.indices.dump())

    def contains_vec(self, x):
        if x.side != self.side or x.system != self.system:
            raise LinearError("vector from another side or system")
        return all(self.indices.contains(i) for i in x.coeffs)

    def dim(self):
        return self.indices.cardinality()

    def subspace_of(self, other):
        if other.side != self.side:
            raise LinearError("sides differ")
        return self.indices.subset_of(other.indices)


def annihilator(s):
    """Aligned annihilator on the other side; exact per-kernel rules."""
    sys = s.system
    cs = s.indices
    if sys.kernel == DELTA:
        other = "W" if s.side == "V" else "V"
        return SubspaceDesc(sys, other, cs.complement())
    if sys.kernel == FORM:
        # both flags live in V = W; the annihilator is the complement of the
        # partner image, independent of signs
        other = "W" if s.side == "V" else "V"
        return SubspaceDesc(sys, other, sys.form.partner_cutset(cs).complement())
    # orderstep: exact only on the monotone lattice
    if s.side == "V":
        if not cs.is_down_closed():
            raise UnsupportedKernel(
                "orderstep annihilator of a V-side set needs a down-closed set")
        if cs.is_empty():
            return SubspaceDesc(sys, "W", CutSet.full(sys.domain))
        if cs.is_full():
            return SubspaceDesc(sys, "W", CutSet.empty(sys.domain))
        t, _ = cs.down_bound()
        return SubspaceDesc(sys, "W", CutSet.ray(sys.domain, "ge", t))
    if not cs.is_up_closed():
        raise UnsupportedKernel(
            "orderstep annihilator of a W-side set needs an up-closed set")
    if cs.is_empty():
        return SubspaceDesc(sys, "V", CutSet.full(sys.domain))
    if cs.is_full():
        m = sys.domain.min_index()
        if m is None:
            return SubspaceDesc(sys, "V", CutSet.empty(sys.domain))
        # degenerate pairing: the least vector pairs to zero with everything
        return SubspaceDesc(sys, "V", CutSet.finite(sys.domain, [m]))
    t, _ = cs.up_bound()
    return SubspaceDesc(sys, "V", CutSet.ray(sys.domain, "le", t))


def closure(s):
    """Mackey closure: annihilator twice.  Idempotent and extensive."""
    cl = annihilator(annihilator(s))
    if not s.indices.subset_of(cl.indices):
        raise ArithmeticError("closure lost vectors; kernel rule broken")
    return cl


def truncate_op(op, window):
    """Exact matrix of the operator on the window basis.

    Every index in the operator's support must lie in the window; out-of-window
    support is an error, never silently dropped.
    """
    sys = op.system
    win = [sys.domain.check(i) for i in window]
    pos = {idx: k for k, idx in enumerate(win)}
    for (a, b), _ in op.terms:
        if a not in pos:
            raise LinearError("operator V-support %r outside the window" % (a,))
        if b not in pos:
            raise LinearError("operator W-support %r outside the window" % (b,))
    n = len(win)
    if n == 0:
        raise LinearError("cannot truncate to an empty window")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), c in op.terms:
        i = pos[a]
        for j, q in enumerate(win):
            s = sys.beta(q, b)
            if s != 0:
                rows[i][j] = rows[i][j] + c * s
    return Matrix(rows)


def truncate_subspace(s, window):
    """Indices of the window lying in the subspace, in window order."""
    return [i for i in window if s.indices.contains(i)]


def op_from_matrix(sys, window, mat):
    """Inverse of truncate_op on delta systems (matrix entries to terms)."""
    if sys.kernel != DELTA:
        raise UnsupportedKernel("matrix lift is canonical only for the delta kernel")
    win = [sys.domain.check(i) for i in window]
    if mat.nrows != len(win) or mat.ncols != len(win):
        raise LinearError("matrix shape does not match the window")
    elem = []
    for i, a in enumerate(win):
        for j, b in enumerate(win):
            c = mat.rows[i][j]
            if c != 0:
                elem.append((a, b, c))
    return FinOp(sys, elem)
