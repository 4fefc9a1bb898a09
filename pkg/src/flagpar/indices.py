"""Index domains, windows, and the decidable cut-set algebra.

Three index domains:

  NAT      positive integers 1, 2, 3, ... in the usual order
  RAT      rationals in the usual order (dense, unbounded both ways)
  COLPAIR  pairs (i1, a) of positive integers, ordered by a then i1
           (column-major; order type omega^2, so (1, a) for a >= 2 is a
           limit point with no predecessor)

A CutSet is a decidable subset of a domain generated by finite sets and the
four rays {i < c}, {i <= c}, {i > c}, {i >= c}, closed under finite union,
intersection, and complement.  Internally every cut set is a canonical sorted
tuple of disjoint, non-mergeable intervals, which makes membership, inclusion,
equality, disjointness, and cardinality (finite value or None for infinite)
all decidable by direct structural computation.

Serialization grammar (s-expressions):

  set      := (empty) | (full) | (fin idx ...) | (ray OP idx)
            | (union set ...) | (inter set ...) | (compl set)
  OP       := lt | le | gt | ge
  idx      := positive integer          for NAT
            | integer or n/d fraction   for RAT
            | (i1 a)                    for COLPAIR

The printer emits a canonical combination of fin/ray/inter/union; parsing the
printed form reproduces the cut set exactly, and printing is stable.
"""

from fractions import Fraction

from . import sexpr


class DomainError(ValueError):
    pass


class _Domain:
    """One of the three index domains; singletons NAT, RAT, COLPAIR."""

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    # -- index handling ------------------------------------------------------

    def check(self, idx):
        if self.name == "NAT":
            if isinstance(idx, int) and not isinstance(idx, bool) and idx >= 1:
                return idx
            raise DomainError("NAT index must be a positive int: %r" % (idx,))
        if self.name == "RAT":
            if isinstance(idx, (int, Fraction)) and not isinstance(idx, bool):
                return Fraction(idx)
            raise DomainError("RAT index must be rational: %r" % (idx,))
        if self.name == "COLPAIR":
            if (
                isinstance(idx, tuple)
                and len(idx) == 2
                and all(isinstance(t, int) and not isinstance(t, bool) and t >= 1 for t in idx)
            ):
                return idx
            raise DomainError("COLPAIR index must be a pair of positive ints: %r" % (idx,))
        raise DomainError("unknown domain")

    def key(self, idx):
        """Sort key realizing the domain order."""
        if self.name == "COLPAIR":
            return (idx[1], idx[0])
        return idx

    def succ(self, idx):
        """Immediate successor, or None in a dense domain."""
        if self.name == "NAT":
            return idx + 1
        if self.name == "COLPAIR":
            return (idx[0] + 1, idx[1])
        return None

    def pred(self, idx):
        """Immediate predecessor, or None where there is none."""
        if self.name == "NAT":
            return idx - 1 if idx >= 2 else None
        if self.name == "COLPAIR":
            return (idx[0] - 1, idx[1]) if idx[0] >= 2 else None
        return None

    def min_index(self):
        if self.name == "NAT":
            return 1
        if self.name == "COLPAIR":
            return (1, 1)
        return None

    def is_discrete(self):
        return self.name != "RAT"

    # -- serialization of single indices --------------------------------------

    def index_to_sexpr(self, idx):
        if self.name == "COLPAIR":
            return [idx[0], idx[1]]
        return idx

    def index_from_sexpr(self, val):
        if self.name == "COLPAIR":
            if not (isinstance(val, list) and len(val) == 2):
                raise DomainError("COLPAIR index must be (i1 a): %r" % (val,))
            return self.check((val[0], val[1]))
        return self.check(val)


NAT = _Domain("NAT")
RAT = _Domain("RAT")
COLPAIR = _Domain("COLPAIR")

DOMAINS = {"NAT": NAT, "RAT": RAT, "COLPAIR": COLPAIR}


def compare(domain, x, y):
    """-1, 0, or 1; e.g. COLPAIR (7,1) sorts before (1,2)."""
    kx, ky = domain.key(domain.check(x)), domain.key(domain.check(y))
    return -1 if kx < ky else (0 if kx == ky else 1)


def window(domain, n, extra=()):
    """Finite, sorted window of the domain.

    NAT: first n indices plus extras.  COLPAIR: the n-by-n block
    {(i1, a) : i1, a <= n} plus extras, in domain order.  RAT: the integer
    points 1..n plus extras (any finite set works; this is the canonical pick).
    """
    if domain is NAT:
        base = set(range(1, n + 1))
    elif domain is COLPAIR:
        base = {(i1, a) for a in range(1, n + 1) for i1 in range(1, n + 1)}
    elif domain is RAT:
        base = {Fraction(k) for k in range(1, n + 1)}
    else:
        raise DomainError("unknown domain")
    base.update(domain.check(e) for e in extra)
    return sorted(base, key=domain.key)


# -- intervals ----------------------------------------------------------------
#
# Interval = (lo, hi); each bound is None (unbounded) or (index, closed).
# Canonical form per domain:
#   NAT:      lo = (a, True) with a >= 1;  hi = (b, True) or None
#   COLPAIR:  lo = (x, True);  hi = (y, True), ((1, a), False) limit, or None
#   RAT:      lo = None or (q, True/False);  hi likewise
# plus: nonempty, sorted, pairwise non-mergeable.

_NEG = (-1,)
_POS = (3,)


def _lo_key(domain, lo):
    if lo is None:
        return _NEG
    v, closed = lo
    return (0, domain.key(v), 0 if closed else 1)


def _hi_key(domain, hi):
    if hi is None:
        return _POS
    v, closed = hi
    return (0, domain.key(v), 1 if closed else 0)


def _norm_interval(domain, lo, hi):
    """Normalize one raw interval; returns canonical interval or None if empty."""
    m = domain.min_index()
    if lo is None and m is not None:
        lo = (m, True)
    if lo is not None:
        v, closed = lo
        v = domain.check(v)
        if not closed and domain.is_discrete():
            s = domain.succ(v)
            lo = (s, True)
        else:
            lo = (v, closed)
        if m is not None and domain.key(lo[0]) < domain.key(m):
            lo = (m, True)
    if hi is not None:
        v, closed = hi
        v = domain.check(v)
        if not closed and domain.is_discrete():
            p = domain.pred(v)
            if p is not None:
                hi = (p, True)
            elif m is not None and domain.key(v) == domain.key(m):
                return None  # {x < min} is empty
            else:
                hi = (v, False)  # COLPAIR limit point (1, a)
        else:
            hi = (v, closed)
    # emptiness
    if lo is not None and hi is not None:
        kl, kh = domain.key(lo[0]), domain.key(hi[0])
        if kl > kh:
            return None
        if kl == kh and not (lo[1] and hi[1]):
            return None
    return (lo, hi)


def _touches(domain, hi1, lo2):
    """True when [.., hi1] and [lo2, ..] overlap or are adjacent."""
    if hi1 is None or lo2 is None:
        return True
    v1, c1 = hi1
    v2, c2 = lo2
    k1, k2 = domain.key(v1), domain.key(v2)
    if k2 < k1:
        return True
    if k2 == k1:
        return c1 or c2
    if domain.is_discrete() and c1 and c2 and domain.succ(v1) == v2:
        return True
    return False


def _merge_sorted(domain, intervals):
    out = []
    for iv in sorted(intervals, key=lambda iv: (_lo_key(domain, iv[0]), _hi_key(domain, iv[1]))):
        if out and _touches(domain, out[-1][1], iv[0]):
            lo, hi = out[-1]
            if _hi_key(domain, iv[1]) > _hi_key(domain, hi):
                hi = iv[1]
            out[-1] = (lo, hi)
        else:
            out.append(iv)
    return tuple(out)


class CutSet:
    """Canonical decidable subset of an index domain."""

    __slots__ = ("domain", "intervals")

    def __init__(self, domain, intervals):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "intervals", tuple(intervals))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def empty(domain):
        return CutSet(domain, ())

    @staticmethod
    def full(domain):
        iv = _norm_interval(domain, None, None)
        return CutSet(domain, (iv,))

    @staticmethod
    def finite(domain, indices):
        ivs = []
        for i in indices:
            i = domain.check(i)
            iv = _norm_interval(domain, (i, True), (i, True))
            if iv:
                ivs.append(iv)
        return CutSet(domain, _merge_sorted(domain, ivs))

    @staticmethod
    def ray(domain, op, c):
        c = domain.check(c)
        if op == "lt":
            iv = _norm_interval(domain, None, (c, False))
        elif op == "le":
            iv = _norm_interval(domain, None, (c, True))
        elif op == "gt":
            iv = _norm_interval(domain, (c, False), None)
        elif op == "ge":
            iv = _norm_interval(domain, (c, True), None)
        else:
            raise DomainError("ray op must be lt/le/gt/ge: %r" % (op,))
        return CutSet(domain, (iv,) if iv else ())

    @staticmethod
    def interval(domain, lo, hi):
        """Half-open/closed interval from raw bounds (index, closed) or None."""
        iv = _norm_interval(domain, lo, hi)
        return CutSet(domain, (iv,) if iv else ())

    # -- algebra ---------------------------------------------------------------

    def _check_peer(self, other):
        if not isinstance(other, CutSet) or other.domain is not self.domain:
            raise DomainError("cut sets over different domains")

    def union(self, other):
        self._check_peer(other)
        return CutSet(self.domain, _merge_sorted(self.domain, self.intervals + other.intervals))

    def intersect(self, other):
        self._check_peer(other)
        d = self.domain
        out = []
        for lo1, hi1 in self.intervals:
            for lo2, hi2 in other.intervals:
                lo = lo1 if _lo_key(d, lo1) >= _lo_key(d, lo2) else lo2
                hi = hi1 if _hi_key(d, hi1) <= _hi_key(d, hi2) else hi2
                # bounds are already canonical; only emptiness can change
                if lo is not None and hi is not None:
                    kl, kh = d.key(lo[0]), d.key(hi[0])
                    if kl > kh or (kl == kh and not (lo[1] and hi[1])):
                        continue
                out.append((lo, hi))
        return CutSet(d, _merge_sorted(d, out))

    def complement(self):
        d = self.domain
        pieces = []
        cur_lo = None
        for lo, hi in self.intervals:
            if lo is not None:
                v, closed = lo
                piece = _norm_interval(d, cur_lo, (v, not closed))
                if piece:
                    pieces.append(piece)
            cur_lo = None if hi is None else (hi[0], not hi[1])
            if hi is None:
                return CutSet(d, _merge_sorted(d, pieces))
        piece = _norm_interval(d, cur_lo, None)
        if piece:
            pieces.append(piece)
        return CutSet(d, _merge_sorted(d, pieces))

    def difference(self, other):
        return self.intersect(other.complement())

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def __invert__(self):
        return self.complement()

    # -- predicates ------------------------------------------------------------

    def contains(self, idx):
        d = self.domain
        idx = d.check(idx)
        k = d.key(idx)
        for lo, hi in self.intervals:
            if lo is not None:
                kl = d.key(lo[0])
                if k < kl or (k == kl and not lo[1]):
                    continue
            if hi is not None:
                kh = d.key(hi[0])
                if k > kh or (k == kh and not hi[1]):
                    continue
            return True
        return False

    __contains__ = contains

    def is_empty(self):
        return not self.intervals

    def is_full(self):
        return self == CutSet.full(self.domain)

    def __eq__(self, other):
        if not isinstance(other, CutSet):
            return NotImplemented
        return self.domain is other.domain and self.intervals == other.intervals

    def __hash__(self):
        return hash((self.domain.name, self.intervals))

    def subset_of(self, other):
        self._check_peer(other)
        return self.difference(other).is_empty()

    def proper_subset_of(self, other):
        return self.subset_of(other) and self != other

    def disjoint_from(self, other):
        return self.intersect(other).is_empty()

    def cardinality(self):
        """Number of indices, or None when infinite."""
        d = self.domain
        total = 0
        for lo, hi in self.intervals:
            if lo is None or hi is None:
                return None
            (a, ca), (b, cb) = lo, hi
            if d is NAT:
                total += b - a + 1
            elif d is RAT:
                if a == b:
                    total += 1
                else:
                    return None
            else:  # COLPAIR
                if not cb:
                    return None  # limit-open upper end spans a whole column tail
                if a[1] != b[1]:
                    return None
                total += b[0] - a[0] + 1
        return total

    def elements(self):
        """Sorted list of indices; error when infinite."""
        if self.cardinality() is None:
            raise DomainError("cannot enumerate an infinite cut set")
        d = self.domain
        out = []
        for lo, hi in self.intervals:
            cur = lo[0]
            while True:
                out.append(cur)
                if d.key(cur) >= d.key(hi[0]):
                    break
                cur = d.succ(cur)
        return out

    def min_elt(self):
        """Smallest index, or None if empty or unbounded below (RAT rays)."""
        if not self.intervals:
            return None
        lo = self.intervals[0][0]
        if lo is None or not lo[1]:
            return None
        return lo[0]

    def is_down_closed(self):
        """True when the set is an initial segment of the domain order."""
        if not self.intervals:
            return True
        if len(self.intervals) != 1:
            return False
        lo, _ = self.intervals[0]
        if lo is None:
            return True
        m = self.domain.min_index()
        return m is not None and lo == (m, True)

    def is_up_closed(self):
        return self.complement().is_down_closed()

    def down_bound(self):
        """For a down-closed set: the upper bound as (index, attained)."""
        if not self.is_down_closed() or self.is_empty() or self.is_full():
            raise DomainError("down_bound needs a proper nonempty down-closed set")
        _, hi = self.intervals[0]
        return hi  # (index, closed)

    def up_bound(self):
        """For an up-closed set: the lower bound as (index, attained)."""
        if not self.is_up_closed() or self.is_empty() or self.is_full():
            raise DomainError("up_bound needs a proper nonempty up-closed set")
        lo, _ = self.intervals[0]
        return lo

    def members_in(self, window_list):
        return [i for i in window_list if self.contains(i)]

    # -- serialization ----------------------------------------------------------

    def to_sexpr(self):
        d = self.domain
        if not self.intervals:
            return ["empty"]
        if self.is_full():
            return ["full"]
        parts = []
        for lo, hi in self.intervals:
            parts.append(_interval_sexpr(d, lo, hi))
        if len(parts) == 1:
            return parts[0]
        return ["union"] + parts

    def dump(self):
        return sexpr.dump(self.to_sexpr())

    @staticmethod
    def from_sexpr(domain, node):
        return _cutset_from_sexpr(domain, node)

    @staticmethod
    def parse(domain, text):
        return _cutset_from_sexpr(domain, sexpr.parse(text))

    def __repr__(self):
        return "CutSet(%s, %s)" % (self.domain.name, self.dump())


def _interval_sexpr(d, lo, hi):
    m = d.min_index()
    lo_trivial = lo is None or (m is not None and lo == (m, True))
    if hi is None:
        if lo_trivial:
            return ["full"]
        return ["ray", "ge" if lo[1] else "gt", d.index_to_sexpr(lo[0])]
    if lo_trivial:
        return ["ray", "le" if hi[1] else "lt", d.index_to_sexpr(hi[0])]
    if lo[1] and hi[1] and d.key(lo[0]) == d.key(hi[0]):
        return ["fin", d.index_to_sexpr(lo[0])]
    left = ["ray", "ge" if lo[1] else "gt", d.index_to_sexpr(lo[0])]
    right = ["ray", "le" if hi[1] else "lt", d.index_to_sexpr(hi[0])]
    return ["inter", left, right]


def _cutset_from_sexpr(domain, node):
    if not isinstance(node, list) or not node:
        raise DomainError("bad cut-set expression: %r" % (node,))
    head = node[0]
    if head == "empty":
        if len(node) != 1:
            raise DomainError("(empty) takes no arguments")
        return CutSet.empty(domain)
    if head == "full":
        if len(node) != 1:
            raise DomainError("(full) takes no arguments")
        return CutSet.full(domain)
    if head == "fin":
        return CutSet.finite(domain, [domain.index_from_sexpr(v) for v in node[1:]])
    if head == "ray":
        if len(node) != 3:
            raise DomainError("(ray OP idx) malformed: %r" % (node,))
        return CutSet.ray(domain, node[1], domain.index_from_sexpr(node[2]))
    if head == "union":
        out = CutSet.empty(domain)
        for sub in node[1:]:
            out = out.union(_cutset_from_sexpr(domain, sub))
        return out
    if head == "inter":
        out = CutSet.full(domain)
        for sub in node[1:]:
            out = out.intersect(_cutset_from_sexpr(domain, sub))
        return out
    if head == "compl":
        if len(node) != 2:
            raise DomainError("(compl set) malformed")
        return _cutset_from_sexpr(domain, node[1]).complement()
    raise DomainError("unknown cut-set form: %r" % (head,))
