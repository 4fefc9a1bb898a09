"""Generalized flags as anchor chains with schematic gap families.

A GenFlag on one side of a dual system is a finite chain of anchor index sets

    empty = anchors[0] < anchors[1] < ... < anchors[-1] = full

with one gap descriptor per consecutive pair (A, B).  The gap owns the index
set D = B - A and contributes members to the flag:

  block          members A and B themselves; one immediate pair (A, B)
  units  up      members A + (D intersect {<= c}) and A + (D intersect {< c})
                 for c in D: single-index steps increasing with the order
  units  down    mirrored: A + (D intersect {>= c}) / {> c}
  columns up     COLPAIR only: full-column cuts A + (D intersect columns < a),
                 increasing with a; needs D spanning infinitely many columns
  columns down   mirrored column cuts from above

Anchors are not automatically members; a gap contributes its endpoints only
when the family reaches them (block always; units when D attains its extreme;
columns on the closed end).  Every member of every family has an immediate
predecessor or successor inside the flag, and each index x lies in exactly one
immediate-pair difference, so validity reduces to chain strictness plus the
junction bookkeeping below.

The key query is minmember(x), the smallest member containing index x, and
member_floor(region), the intersection of minmember over a region; both are
exact CutSet computations and power the stabilizer and tautness decisions.
"""

from .indices import COLPAIR, CutSet
from .linear import DELTA, FORM, LinearError, SubspaceDesc, closure

BLOCK = "block"
UNITS = "units"
COLUMNS = "columns"
UP = "up"
DOWN = "down"


class FlagError(ValueError):
    pass


def _cols_lt(a):
    return CutSet.ray(COLPAIR, "lt", (1, a))


def _cols_ge(a):
    return CutSet.ray(COLPAIR, "ge", (1, a))


class GenFlag:
    __slots__ = ("system", "side", "anchors", "gaps")

    def __init__(self, system, side, anchors, gaps):
        if side not in ("V", "W"):
            raise FlagError("side must be 'V' or 'W'")
        anchors = tuple(anchors)
        gaps = tuple((mode, direction) for mode, direction in gaps)
        if len(anchors) < 2 or len(gaps) != len(anchors) - 1:
            raise FlagError("need n anchors and n-1 gaps, n >= 2")
        if not anchors[0].is_empty() or not anchors[-1].is_full():
            raise FlagError("anchor chain must run from the zero set to the full set")
        for k in range(len(anchors) - 1):
            if not anchors[k].subset_of(anchors[k + 1]):
                wit = anchors[k].difference(anchors[k + 1])
                raise FlagError("anchors not increasing; witness %s" % wit.dump())
            if anchors[k] == anchors[k + 1]:
                raise FlagError("duplicate anchor at position %d" % k)
        for (mode, direction), k in zip(gaps, range(len(gaps))):
            if mode not in (BLOCK, UNITS, COLUMNS):
                raise FlagError("unknown gap mode: %r" % (mode,))
            if mode == BLOCK and direction is not None:
                raise FlagError("block gaps take no direction")
            if mode != BLOCK and direction not in (UP, DOWN):
                raise FlagError("units/columns gaps need direction 'up' or 'down'")
            if mode == COLUMNS:
                if system.domain is not COLPAIR:
                    raise FlagError("columns gaps need the column-pair domain")
                D = anchors[k + 1].difference(anchors[k])
                if D.intervals[-1][1] is not None:
                    raise FlagError("columns gap must span infinitely many columns")
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "gaps", gaps)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        if not isinstance(other, GenFlag):
            return NotImplemented
        return (self.system == other.system and self.side == other.side
                and self.anchors == other.anchors and self.gaps == other.gaps)

    def __hash__(self):
        return hash((self.side, self.anchors, self.gaps))

    def __repr__(self):
        parts = []
        for k, (mode, direction) in enumerate(self.gaps):
            parts.append(self.anchors[k].dump())
            parts.append("-%s%s-" % (mode, "" if direction is None else " " + direction))
        parts.append(self.anchors[-1].dump())
        return "GenFlag(%s: %s)" % (self.side, " ".join(parts))

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def finite_chain(system, side, cutsets):
        """Explicit chain; zero and full are members, all gaps block."""
        dom = system.domain
        chain = [CutSet.empty(dom)]
        for cs in cutsets:
            if cs.is_empty() or cs.is_full():
                continue
            chain.append(cs)
        chain.append(CutSet.full(dom))
        return GenFlag(system, side, chain, [(BLOCK, None)] * (len(chain) - 1))

    @staticmethod
    def unit_flag(system, side, direction=UP):
        """One units gap over the whole domain: all single-index cuts."""
        dom = system.domain
        return GenFlag(system, side, [CutSet.empty(dom), CutSet.full(dom)],
                       [(UNITS, direction)])

    @staticmethod
    def column_schema(system, side, direction=UP):
        dom = system.domain
        return GenFlag(system, side, [CutSet.empty(dom), CutSet.full(dom)],
                       [(COLUMNS, direction)])

    # -- gap structure ----------------------------------------------------------

    def gap_count(self):
        return len(self.gaps)

    def gap_d(self, k):
        return self.anchors[k + 1].difference(self.anchors[k])

    def gap_of_index(self, x):
        x = self.system.domain.check(x)
        for k in range(len(self.gaps)):
            if self.anchors[k + 1].contains(x) and not self.anchors[k].contains(x):
                return k
        raise FlagError("index %r not covered by the anchor chain" % (x,))

    def minmember(self, x):
        """Smallest flag member containing index x (always exists)."""
        k = self.gap_of_index(x)
        mode, direction = self.gaps[k]
        A = self.anchors[k]
        D = self.gap_d(k)
        dom = self.system.domain
        if mode == BLOCK:
            return self.anchors[k + 1]
        if mode == UNITS:
            ray = CutSet.ray(dom, "le" if direction == UP else "ge", x)
            return A.union(D.intersect(ray))
        col = x[1]
        ray = _cols_lt(col + 1) if direction == UP else _cols_ge(col)
        return A.union(D.intersect(ray))

    def member_floor(self, region):
        """Intersection of minmember(x) over all x in the region CutSet."""
        dom = self.system.domain
        for k in range(len(self.gaps)):
            T = self.gap_d(k).intersect(region)
            if T.is_empty():
                continue
            mode, direction = self.gaps[k]
            A = self.anchors[k]
            D = self.gap_d(k)
            if mode == BLOCK:
                return self.anchors[k + 1]
            lo, hi = T.intervals[0][0], T.intervals[-1][1]
            if mode == UNITS:
                if direction == UP:
                    if lo is None:
                        return A
                    return A.union(D.intersect(CutSet.ray(dom, "le", lo[0])))
                if hi is None:
                    return A
                return A.union(D.intersect(CutSet.ray(dom, "ge", hi[0])))
            # columns
            if direction == UP:
                c = lo[0][1]
                return A.union(D.intersect(_cols_lt(c + 1)))
            if hi is None:
                return A
            v, closed = hi
            c = v[1] if closed else v[1] - 1
            return A.union(D.intersect(_cols_ge(c)))
        return CutSet.full(dom)

    def floor_above(self, x):
        """member_floor of the open ray above x."""
        return self.member_floor(CutSet.ray(self.system.domain, "gt", x))

    def floor_below(self, x):
        return self.member_floor(CutSet.ray(self.system.domain, "lt", x))

    # -- membership ----------------------------------------------------------------

    def _gap_end_members(self, k):
        """(lower anchor in family, upper anchor in family) for gap k."""
        mode, direction = self.gaps[k]
        D = self.gap_d(k)
        if mode == BLOCK:
            return True, True
        if mode == COLUMNS:
            return direction == UP, direction == DOWN
        lo, hi = D.intervals[0][0], D.intervals[-1][1]
        has_min = lo is not None and lo[1]
        has_max = hi is not None and hi[1]
        if direction == UP:
            return has_min, has_max
        return has_max, has_min

    def anchor_is_member(self, k):
        """Whether anchors[k] belongs to the flag."""
        via_below = k > 0 and self._gap_end_members(k - 1)[1]
        via_above = k < len(self.gaps) and self._gap_end_members(k)[0]
        return via_below or via_above

    def is_member(self, cs):
        for k, a in enumerate(self.anchors):
            if cs == a:
                return self.anchor_is_member(k)
        for k in range(len(self.gaps)):
            A, B = self.anchors[k], self.anchors[k + 1]
            if not (A.subset_of(cs) and cs.subset_of(B)):
                continue
            if cs == A or cs == B:
                continue
            mode, direction = self.gaps[k]
            if mode == BLOCK:
                return False
            T = cs.difference(A)
            D = self.gap_d(k)
            if not T.subset_of(D):
                return False
            dom = self.system.domain
            if mode == UNITS:
                if direction == UP:
                    hi = T.intervals[-1][1]
                    if hi is None:
                        return False
                    v, closed = hi
                    if closed and T == D.intersect(CutSet.ray(dom, "le", v)):
                        return True
                    # strict cut: the cut point must be witnessed inside D
                    if T == D.intersect(CutSet.ray(dom, "lt", v)):
                        if D.contains(v):
                            return True
                        rest = D.intersect(CutSet.ray(dom, "ge", v))
                        m = rest.min_elt()
                        return m is not None and T == D.intersect(CutSet.ray(dom, "lt", m))
                    return False
                lo = T.intervals[0][0]
                if lo is None:
                    return False
                v, closed = lo
                if closed and T == D.intersect(CutSet.ray(dom, "ge", v)):
                    return True
                if T == D.intersect(CutSet.ray(dom, "gt", v)):
                    if D.contains(v):
                        return True
                    rest = D.intersect(CutSet.ray(dom, "le", v))
                    if rest.is_empty():
                        return False
                    hi = rest.intervals[-1][1]
                    # a strict upper cut needs its cut point inside D just below
                    if hi is not None and hi[1]:
                        return T == D.intersect(CutSet.ray(dom, "gt", hi[0]))
                    return False
                return False
            # columns
            if direction == UP:
                hi = T.intervals[-1][1]
                if hi is None:
                    return False
                v, closed = hi
                c = v[1] + 1 if closed else v[1]
                return T == D.intersect(_cols_lt(c))
            lo = T.intervals[0][0]
            if lo is None:
                return False
            return T == D.intersect(_cols_ge(lo[0][1]))
        return False

    # -- window views -----------------------------------------------------------------

    def members_for_window(self, window):
        """Representative members meeting the window, in chain order.

        Returns a list of (member CutSet, trace tuple); one representative per
        distinct (trace, kind) so downstream window solves see every distinct
        intersection pattern.
        """
        dom = self.system.domain
        cands = []
        for k, a in enumerate(self.anchors):
            if self.anchor_is_member(k):
                cands.append(a)
        for k in range(len(self.gaps)):
            mode, direction = self.gaps[k]
            if mode == BLOCK:
                continue
            A = self.anchors[k]
            D = self.gap_d(k)
            for x in window:
                if not D.contains(x):
                    continue
                if mode == UNITS:
                    ops = ("le", "lt") if direction == UP else ("ge", "gt")
                    for op in ops:
                        cands.append(A.union(D.intersect(CutSet.ray(dom, op, x))))
                else:
                    col = x[1]
                    if direction == UP:
                        for c in (col, col + 1):
                            cands.append(A.union(D.intersect(_cols_lt(c))))
                    else:
                        for c in (col, col + 1):
                            cands.append(A.union(D.intersect(_cols_ge(c))))
        seen = set()
        out = []
        for cs in cands:
            trace = tuple(i for i in window if cs.contains(i))
            key = (trace, cs)
            if key in seen:
                continue
            seen.add(key)
            out.append((cs, trace))
        out.sort(key=lambda ct: (len(ct[1]), [dom.key(i) for i in ct[1]]))
        return out

    def validate(self, window):
        """Chain/junction/coverage report at a window; raises on a broken chain."""
        report = {"member_count_hint": len(self.members_for_window(window))}
        # junction conditions: every anchor that is a member needs an
        # immediate neighbor through one of its gaps
        for k in range(len(self.anchors)):
            if not self.anchor_is_member(k):
                continue
            pred_ok = k > 0 and self._has_edge_step(k - 1, "top")
            succ_ok = k < len(self.gaps) and self._has_edge_step(k, "bottom")
            if not (pred_ok or succ_ok):
                raise FlagError(
                    "anchor %d is a member with no immediate neighbor" % k)
        # window coverage: each window index in exactly one immediate pair
        pairs = []
        for x in window:
            mm = self.minmember(x)
            if not mm.contains(x):
                raise FlagError("minmember misses %r" % (x,))
            pairs.append((x, tuple(i for i in window if mm.contains(i))))
        report["window_pairs"] = pairs
        return report

    def _has_edge_step(self, k, end):
        """Immediate step at the bottom/top edge of gap k."""
        mode, direction = self.gaps[k]
        D = self.gap_d(k)
        if mode == BLOCK:
            return True
        if mode == COLUMNS:
            # bottom edge: lowest column cut is one whole-column step above A;
            # top edge mirrored for the down direction
            return (end == "bottom") == (direction == UP)
        lo, hi = D.intervals[0][0], D.intervals[-1][1]
        has_min = lo is not None and lo[1]
        has_max = hi is not None and hi[1]
        if end == "bottom":
            return has_min if direction == UP else has_max
        return has_max if direction == UP else has_min

    # -- closure interplay ---------------------------------------------------------------

    def member_subspace(self, cs):
        return SubspaceDesc(self.system, self.side, cs)

    def is_semiclosed(self, window):
        """Every member closed, or paired with its closure as immediate successor.

        Checked symbolically per family; the window only picks the unit-cut
        representatives examined.  Returns (verdict, witness CutSet or None).
        """
        sys = self.system
        if sys.kernel in (DELTA, FORM):
            return True, None  # aligned members are closed under these kernels
        for cs, _ in self.members_for_window(window):
            try:
                cl = closure(self.member_subspace(cs)).indices
            except LinearError:
                return False, cs
            if cl == cs:
                continue
            if not self.is_member(cl):
                return False, cs
            # cl must be the immediate successor: closure adds exactly one
            # limit point here, so nothing can sit strictly between
            if cl.difference(cs).cardinality() != 1:
                return False, cs
        return True, None


class TautCouple:
    """A flag in V and a flag in W, checked jointly for tautness by level."""

    __slots__ = ("flag_v", "flag_w")

    def __init__(self, flag_v, flag_w):
        if flag_v.side != "V" or flag_w.side != "W":
            raise FlagError("couple needs a V-side and a W-side flag")
        if flag_v.system != flag_w.system:
            raise FlagError("flags from different systems")
        object.__setattr__(self, "flag_v", flag_v)
        object.__setattr__(self, "flag_w", flag_w)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        if not isinstance(other, TautCouple):
            return NotImplemented
        return self.flag_v == other.flag_v and self.flag_w == other.flag_w

    def __hash__(self):
        return hash((self.flag_v, self.flag_w))

    @property
    def system(self):
        return self.flag_v.system


class SelfTautFlag:
    """A flag in a form-equipped system, self-paired through the form."""

    __slots__ = ("flag",)

    def __init__(self, flag):
        if flag.system.kernel != FORM:
            raise FlagError("self-taut flags need a form-equipped system")
        if flag.side != "V":
            raise FlagError("self-taut flags live on the V side")
        object.__setattr__(self, "flag", flag)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        if not isinstance(other, SelfTautFlag):
            return NotImplemented
        return self.flag == other.flag

    def __hash__(self):
        return hash(self.flag)

    @property
    def system(self):
        return self.flag.system

    def classify_members(self, window):
        """Per-member isotropic/coisotropic labels; None marks a failure."""
        form = self.system.form
        out = []
        for cs, trace in self.flag.members_for_window(window):
            partner_img = form.partner_cutset(cs)
            iso = partner_img.intersect(cs).is_empty()
            coiso = partner_img.complement().subset_of(cs)
            label = "isotropic" if iso else ("coisotropic" if coiso else None)
            if iso and coiso:
                label = "both"
            out.append((cs, trace, label))
        return out

def column_couple(system):
    """The column-cut flag in V with its mirrored W-side family."""
    fv = GenFlag.column_schema(system, "V", UP)
    fw = GenFlag.column_schema(system, "W", DOWN)
    return TautCouple(fv, fw)


def rational_cut_couple(system):
    """All rational cut spans in V, with the reverse cut family in W."""
    fv = GenFlag.unit_flag(system, "V", UP)
    fw = GenFlag.unit_flag(system, "W", DOWN)
    return TautCouple(fv, fw)


def dual_delta_flag(flag):
    """Annihilator image of a delta-kernel flag, as a flag on the other side."""
    sys = flag.system
    if sys.kernel != DELTA:
        raise FlagError("dual flag construction here is for the delta kernel")
    other = "W" if flag.side == "V" else "V"
    rev_anch = [a.complement() for a in reversed(flag.anchors)]
    gaps = []
    for mode, direction in reversed(flag.gaps):
        if mode == BLOCK:
            gaps.append((BLOCK, None))
        else:
            gaps.append((mode, DOWN if direction == UP else UP))
    return GenFlag(sys, other, rev_anch, gaps)
