"""Stabilizer algebras of generalized flags, exactly and by window.

Membership of a finite-support operator in the stabilizer of a flag (or flag
couple) is decided exactly from the gap schemas:

  delta kernel    per elementary term (a, b): a must lie in the smallest
                  member containing b, and mirrored through the W-side flag
  form kernel     per term (a, b): a must lie in the smallest member
                  containing partner(b); the coapply direction collapses to
                  the same condition through the form
  order kernel    terms interact through the step kernel, so the test works
                  region by region: between consecutive support values the
                  image coefficients are constant and must land inside the
                  intersection of all smallest members over the region

Window truncations of stabilizers are spans of matrices.  For delta and form
kernels the matrices are actions on the window coordinates (every window
matrix lifts to a window-supported operator and back, so the truncation has
no artifacts).  For the order kernel the action map on a window is singular,
so truncations are spans of coefficient matrices of window-supported
operators, with the same exactness guarantee in those coordinates.
"""

from fractions import Fraction

from .indices import CutSet, window
from .lie import MatSpace, Span
from .linear import (
    ALTERNATING, DELTA, FORM, ORDERSTEP, SYMMETRIC, FinOp,
    annihilator, coapply_op, trace, truncate_op,
)
from .flags import SelfTautFlag, TautCouple
from .matrices import Matrix


class ParabolicError(ValueError):
    pass


class AmbiguityUnsupported(ParabolicError):
    """The aligned family cannot host the isotropic-member ambiguity."""


def _flags_of(base):
    if isinstance(base, TautCouple):
        return base.flag_v, base.flag_w
    if isinstance(base, SelfTautFlag):
        return base.flag, None
    raise ParabolicError("expected a TautCouple or SelfTautFlag")


class BlockFunctional:
    """tr(op restricted to the span of a block of indices).

    Evaluates as the sum of c * beta(a, b) over terms with a in the block;
    finite for every finite-support operator even on infinite blocks.  On a
    block that is a union of whole stabilizer diagonal blocks this vanishes
    on commutators, so it is a Lie character of the stabilizer.
    """

    __slots__ = ("system", "block")

    def __init__(self, system, block):
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "block", block)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __eq__(self, other):
        if not isinstance(other, BlockFunctional):
            return NotImplemented
        return self.system == other.system and self.block == other.block

    def __hash__(self):
        return hash(self.block)

    def evaluate(self, op):
        total = Fraction(0)
        for (a, b), c in op.terms:
            if self.block.contains(a):
                total = total + c * self.system.beta(a, b)
        return total

    def window_weights(self, win):
        """Diagonal weights so that sum_i w_i * M[i][i] evaluates the
        functional on the action matrix of a window-supported operator."""
        return [Fraction(1) if self.block.contains(x) else Fraction(0)
                for x in win]


class ParabolicDesc:
    """A stabilizer algebra cut out by flags, ambient rules and trace rows.

    ambient: "gl" (no condition), "sl" (total trace zero), or "form"
    (skewness for the system's bilinear form).  trace_rows is a tuple of
    rows; each row is a tuple of (coefficient, block CutSet) pairs and
    asserts that the weighted sum of block traces vanishes.
    """

    __slots__ = ("base", "ambient", "trace_rows")

    def __init__(self, base, ambient="gl", trace_rows=()):
        fv, fw = _flags_of(base)
        if ambient not in ("gl", "sl", "form"):
            raise ParabolicError("ambient must be gl, sl or form")
        if ambient == "form" and fv.system.kernel != FORM:
            raise ParabolicError("form ambient needs a form-equipped system")
        if fv.system.ring == "H":
            raise ParabolicError("realize quaternionic systems before stabilizer work")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "trace_rows", tuple(tuple(r) for r in trace_rows))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @property
    def system(self):
        return _flags_of(self.base)[0].system

    @property
    def flag_v(self):
        return _flags_of(self.base)[0]

    @property
    def flag_w(self):
        return _flags_of(self.base)[1]


def is_form_skew(op):
    """Whether an operator is skew for its system's bilinear form.

    Rule per ordered pair of indices: c[u,w] * s(u) = -c[w,u] * s(partner(u)),
    which specializes to antisymmetric coefficients for symmetric forms and
    symmetric coefficients for alternating ones.
    """
    sys = op.system
    if sys.kernel != FORM or sys.form.kind not in (SYMMETRIC, ALTERNATING):
        raise ParabolicError("skewness here covers symmetric/alternating forms")
    form = sys.form
    coeff = dict(op.terms)
    keys = set(coeff)
    for (u, w) in keys | {(w, u) for (u, w) in keys}:
        c_uw = coeff.get((u, w), Fraction(0))
        c_wu = coeff.get((w, u), Fraction(0))
        if c_uw * form.sign(u) != -(c_wu * form.sign(form.partner(u))):
            return False
    return True


def _delta_term_check(flag_v, flag_w, op):
    by_col = {}
    by_row = {}
    for (a, b), c in op.terms:
        by_col.setdefault(b, []).append(a)
        by_row.setdefault(a, []).append(b)
    for b, rows in by_col.items():
        mm = flag_v.minmember(b)
        for a in rows:
            if not mm.contains(a):
                return False
    for a, cols in by_row.items():
        mm = flag_w.minmember(a)
        for b in cols:
            if not mm.contains(b):
                return False
    return True


def _form_term_check(flag, op):
    form = flag.system.form
    for (a, b), c in op.terms:
        if not flag.minmember(form.partner(b)).contains(a):
            return False
    return True


def _orderstep_regions_v(values, dom):
    """Regions (v_k, v_{k+1}] and (v_last, infinity) over sorted values."""
    out = []
    for k, v in enumerate(values):
        if k + 1 < len(values):
            region = CutSet.interval(dom, (v, False), (values[k + 1], True))
        else:
            region = CutSet.ray(dom, "gt", v)
        out.append((k, region))
    return out


def _orderstep_regions_w(values, dom):
    """Regions (-infinity, v_1) and [v_k, v_{k+1}) over sorted values."""
    out = [(-1, CutSet.ray(dom, "lt", values[0]))]
    for k in range(len(values) - 1):
        out.append((k, CutSet.interval(dom, (values[k], True),
                                       (values[k + 1], False))))
    return out


def _orderstep_op_check(flag_v, flag_w, op):
    sys = op.system
    dom = sys.domain
    coeff = dict(op.terms)
    a_vals = sorted({a for (a, b) in coeff}, key=dom.key)
    b_vals = sorted({b for (a, b) in coeff}, key=dom.key)
    if not coeff:
        return True
    for k, region in _orderstep_regions_v(b_vals, dom):
        if region.is_empty():
            continue
        floor = flag_v.member_floor(region)
        gamma = {}
        for (a, b), c in coeff.items():
            if dom.key(b) <= dom.key(b_vals[k]):
                gamma[a] = gamma.get(a, 0) + c
        for a, g in gamma.items():
            if g != 0 and not floor.contains(a):
                return False
    for k, region in _orderstep_regions_w(a_vals, dom):
        if region.is_empty():
            continue
        floor = flag_w.member_floor(region)
        keep = set(a_vals[k + 1:])  # k = -1 keeps every row value
        delta = {}
        for (a, b), c in coeff.items():
            if a in keep:
                delta[b] = delta.get(b, 0) + c
        for b, d in delta.items():
            if d != 0 and not floor.contains(b):
                return False
    return True


def stabilizer_contains(p, op):
    """Exact membership of a finite-support operator in the parabolic."""
    sys = p.system
    if op.system != sys:
        raise ParabolicError("operator from a different system")
    fv, fw = _flags_of(p.base)
    if sys.kernel == DELTA:
        ok = _delta_term_check(fv, fw, op)
    elif sys.kernel == FORM:
        ok = _form_term_check(fv, op)
    else:
        ok = _orderstep_op_check(fv, fw, op)
    if not ok:
        return False
    if p.ambient == "sl" and trace(op) != 0:
        return False
    if p.ambient == "form" and not is_form_skew(op):
        return False
    for row in p.trace_rows:
        total = Fraction(0)
        for coeff, block in row:
            total = total + coeff * BlockFunctional(sys, block).evaluate(op)
        if total != 0:
            return False
    return True


# -- window truncations ---------------------------------------------------------------


def window_representation(system):
    """Which matrix coordinates window truncations use for this kernel."""
    return "coeff" if system.kernel == ORDERSTEP else "action"


def coeff_op_of_matrix(system, win, M):
    """Window matrix of coefficients -> finite-support operator."""
    elem = []
    for i in range(M.nrows):
        for j in range(M.ncols):
            if M[i, j] != 0:
                elem.append((win[i], win[j], M[i, j]))
    return FinOp(system, elem)


def op_of_window_matrix(system, win, M):
    """Action matrix on a window -> the window-supported operator acting so.

    For the delta kernel the coefficients are the action entries; for a form
    the action matrix is coeff * G^T on the (matched) window, inverted here.
    The order kernel has no faithful action coordinates, use coefficients.
    """
    if system.kernel == DELTA:
        return coeff_op_of_matrix(system, win, M)
    if system.kernel == FORM:
        g = system.gram_matrix(win)
        return coeff_op_of_matrix(system, win, M * g.transpose().inverse())
    raise ParabolicError("order-kernel windows carry coefficient matrices")


def _window_space(system, n):
    base = "Qi" if system.ring == "Qi" else "Q"
    return MatSpace(n, base=base)


def _pattern_span(space, allowed):
    mats = []
    for i in range(space.n):
        for j in range(space.n):
            if allowed(i, j):
                mats.append(Matrix.from_fn(space.n, space.n,
                                           lambda r, c, i=i, j=j:
                                           Fraction(1) if (r, c) == (i, j) else Fraction(0)))
    return Span(space, mats)


def truncate_flag_stabilizer(flag, win):
    """Span of window matrices of window-supported operators fixing the flag.

    One-sided: only this flag's conditions apply.  Delta and form flags give
    action-coordinate pattern spans; order flags give coefficient spans cut
    out by region rows.
    """
    sys = flag.system
    n = len(win)
    space = _window_space(sys, n)
    if sys.kernel == DELTA:
        if flag.side == "V":
            mm = [flag.minmember(x) for x in win]
            return _pattern_span(space, lambda i, j: mm[j].contains(win[i]))
        mm = [flag.minmember(x) for x in win]
        return _pattern_span(space, lambda i, j: mm[i].contains(win[j]))
    if sys.kernel == FORM:
        if flag.side != "V":
            raise ParabolicError("form flags live on the V side")
        mm = [flag.minmember(x) for x in win]
        return _pattern_span(space, lambda i, j: mm[j].contains(win[i]))
    # order kernel: linear rows on coefficient matrices
    dom = sys.domain
    conds = []
    if flag.side == "V":
        for k, region in _orderstep_regions_v(list(win), dom):
            if region.is_empty():
                continue
            floor = flag.member_floor(region)
            bad = [i for i, x in enumerate(win) if not floor.contains(x)]
            if not bad:
                continue
            def cond(M, k=k, bad=bad):
                return [sum((M[i, j] for j in range(k + 1)), Fraction(0)) for i in bad]
            conds.append(cond)
    else:
        for k, region in _orderstep_regions_w(list(win), dom):
            if region.is_empty():
                continue
            floor = flag.member_floor(region)
            bad = [j for j, x in enumerate(win) if not floor.contains(x)]
            if not bad:
                continue
            lo = 0 if k < 0 else k + 1
            def cond(M, lo=lo, bad=bad):
                return [sum((M[i, j] for i in range(lo, len(win))), Fraction(0))
                        for j in bad]
            conds.append(cond)
    return Span.full(space).where(conds) if conds else Span.full(space)


def stabilizer_truncation(p, level, win=None):
    """Exact window truncation of the parabolic as a matrix span."""
    sys = p.system
    if win is None:
        win = window(sys.domain, level)
        if sys.kernel == FORM:
            win = sys.form.close_window(win)
    fv, fw = _flags_of(p.base)
    span = truncate_flag_stabilizer(fv, win)
    if fw is not None:
        span = span.intersect(truncate_flag_stabilizer(fw, win))
    conds = []
    n = len(win)

    def trace_cond(block):
        # beta-weighted trace of the window operator, in whichever matrix
        # coordinates this kernel's truncations use
        if window_representation(sys) == "action":
            w = BlockFunctional(sys, block).window_weights(win)
            return lambda M: sum((w[i] * M[i, i] for i in range(n)), Fraction(0))
        cells = [(i, j) for i in range(n) for j in range(n)
                 if block.contains(win[i]) and sys.beta(win[i], win[j]) != 0]
        return lambda M: sum((M[i, j] for i, j in cells), Fraction(0))

    if p.ambient == "sl":
        conds.append(trace_cond(CutSet.full(sys.domain)))
    if p.ambient == "form":
        g = sys.gram_matrix(win)
        conds.append(lambda M: M.transpose() * g + g * M)
    for row in p.trace_rows:
        parts = [(coeff, trace_cond(block)) for coeff, block in row]
        def cond(M, parts=parts):
            total = Fraction(0)
            for coeff, f in parts:
                total = total + coeff * f(M)
            return total
        conds.append(cond)
    if conds:
        span = span.where(conds)
    return span


def window_action_pair(system, win, M):
    """(V-action, W-action) matrices of the operator a window matrix encodes."""
    rep = window_representation(system)
    op = coeff_op_of_matrix(system, win, M) if rep == "coeff" \
        else op_of_window_matrix(system, win, M)
    act_v = truncate_op(op, win)
    n = len(win)
    cols = []
    for y in win:
        img = coapply_op(op, system.vec("W", {y: Fraction(1)}))
        cols.append([img.coeffs.get(x, Fraction(0)) for x in win])
    act_w = Matrix.from_fn(n, n, lambda i, j: cols[j][i])
    return act_v, act_w


def padded_window(system, win):
    """Window plus one extra index strictly above it.

    A window-supported orderstep operator kills the lowest window vector, so
    its action on the window alone is not faithful; adding one index above
    the window restores faithfulness, and operator composition becomes plain
    matrix multiplication of the padded action matrices.
    """
    top = win[-1]
    extra = (1, top[1] + 1) if isinstance(top, tuple) else top + 1
    return list(win) + [system.domain.check(extra)]


def faithful_action_span(system, win, span):
    """(window', span') in coordinates where matrix products mean composition.

    Action-coordinate kernels pass through unchanged; coefficient-coordinate
    spans are re-expressed as action matrices on the padded window.
    """
    if window_representation(system) == "action":
        return list(win), span
    pw = padded_window(system, win)
    space = _window_space(system, len(pw))
    mats = [truncate_op(coeff_op_of_matrix(system, win, M), pw)
            for M in span.basis]
    return pw, Span(space, mats)


def coeff_from_padded_action(system, win, mat):
    """Invert faithful_action_span on one matrix: column differences."""
    n = len(win)
    if mat.nrows != n + 1 or mat.ncols != n + 1:
        raise ParabolicError("matrix is not over the padded window")
    return Matrix.from_fn(n, n, lambda i, k: mat[i, k + 1] - mat[i, k])


def _invariant_under(span, system, win, positions, side):
    """Check each basis action keeps the coordinate subspace invariant."""
    pos = set(positions)
    for M in span.basis:
        act_v, act_w = window_action_pair(system, win, M)
        act = act_v if side == "V" else act_w
        for j in pos:
            for i in range(len(win)):
                if i not in pos and act[i, j] != 0:
                    return (side, j, i)
    return None


def is_taut_couple(couple, level):
    """Window verdict: stabilizer of each flag preserves the other's
    member annihilators.  Returns (ok, report)."""
    sys = couple.system
    win = window(sys.domain, level)
    fv, fw = couple.flag_v, couple.flag_w
    stab_v = truncate_flag_stabilizer(fv, win)
    stab_w = truncate_flag_stabilizer(fw, win)
    failures = []
    for cs, _ in fw.members_for_window(win):
        ann = annihilator(fw.member_subspace(cs)).indices
        positions = [i for i, x in enumerate(win) if ann.contains(x)]
        hit = _invariant_under(stab_v, sys, win, positions, "V")
        if hit is not None:
            failures.append(("stab-V moves ann of W-member", cs, hit))
    for cs, _ in fv.members_for_window(win):
        ann = annihilator(fv.member_subspace(cs)).indices
        positions = [i for i, x in enumerate(win) if ann.contains(x)]
        hit = _invariant_under(stab_w, sys, win, positions, "W")
        if hit is not None:
            failures.append(("stab-W moves ann of V-member", cs, hit))
    report = {"level": level, "verdict": "holds-to-level-%d" % level
              if not failures else "fails-at-level-%d" % level,
              "failures": failures}
    return not failures, report


def is_selftaut(st, level):
    """Window verdict for a single form flag paired with itself.

    Checks (a) chain compatibility of member annihilators with the members,
    and (b) invariance of each annihilator under the skew window stabilizer.
    """
    sys = st.system
    win = window(sys.domain, level)
    win = sys.form.close_window(win)
    flag = st.flag
    members = flag.members_for_window(win)
    failures = []
    for cs, _ in members:
        ann = annihilator(flag.member_subspace(cs)).indices
        for cs2, _ in members:
            if not (ann.subset_of(cs2) or cs2.subset_of(ann)):
                failures.append(("ann incomparable with member", cs, cs2))
    if not failures:
        p = ParabolicDesc(st, ambient="form")
        stab = stabilizer_truncation(p, None, win=win)
        for cs, _ in members:
            ann = annihilator(flag.member_subspace(cs)).indices
            positions = [i for i, x in enumerate(win) if ann.contains(x)]
            hit = _invariant_under(stab, sys, win, positions, "W")
            if hit is not None:
                failures.append(("skew stabilizer moves annihilator", cs, hit))
    report = {"level": level, "verdict": "holds-to-level-%d" % level
              if not failures else "fails-at-level-%d" % level,
              "failures": failures}
    return not failures, report


def is_locally_solvable(p, levels):
    """Whether every listed window truncation is a solvable Lie algebra.

    Solvability is judged in composition-faithful coordinates, never on raw
    coefficient matrices (whose products do not model operator composition).
    """
    detail = []
    sys = p.system
    for n in levels:
        span = stabilizer_truncation(p, n)
        win = window(sys.domain, n)
        if sys.kernel == FORM:
            win = sys.form.close_window(win)
        _, act = faithful_action_span(sys, win, span)
        ok = act.is_solvable()
        detail.append((n, span.dim, ok))
        if not ok:
            return False, detail
    return True, detail


def infinite_trace_functionals(flag, bound):
    """Lie characters tr|_X of the stabilizer, one per diagonal block.

    Yields at most `bound` functionals, walking gaps in chain order: one per
    block gap, one per unit step (first elements in cut order), one per
    column for column gaps.
    """
    sys = flag.system
    dom = sys.domain
    out = []
    for k in range(flag.gap_count()):
        if len(out) >= bound:
            break
        mode, direction = flag.gaps[k]
        D = flag.gap_d(k)
        if mode == "block":
            out.append(BlockFunctional(sys, D))
        elif mode == "units":
            for x in _sample_elements(D, dom, bound - len(out)):
                out.append(BlockFunctional(sys, CutSet.finite(dom, [x])))
        else:
            lo = D.intervals[0][0]
            first_col = lo[0][1] if lo is not None else 1
            c = first_col
            while len(out) < bound:
                col = D.intersect(CutSet.interval(
                    dom, ((1, c), True), ((1, c + 1), False)))
                if not col.is_empty():
                    out.append(BlockFunctional(sys, col))
                c += 1
    return out


def _sample_elements(D, dom, k):
    """Up to k distinct elements of a cut set, window values first."""
    if k <= 0:
        return []
    if D.cardinality() is not None:
        return D.elements()[:k]
    out = []
    for x in window(dom, k):
        if D.contains(x) and x not in out:
            out.append(x)
            if len(out) == k:
                return out
    for lo, hi in D.intervals:
        if lo is not None and lo[1]:
            x = lo[0]
            while x is not None and D.contains(x) and len(out) < k:
                if x not in out:
                    out.append(x)
                if dom.is_discrete:
                    x = dom.succ(x)
                else:
                    x = x + 1 if hi is None else (x + hi[0]) / 2
                    if not D.contains(x):
                        break
        if len(out) == k:
            break
    return out


# -- the symmetric-form flag ambiguity ---------------------------------------------------


def _iso_pair_positions(form, win):
    """Window positions split into hyperbolic pairs, if any."""
    pairs = []
    seen = set()
    for i, x in enumerate(win):
        if x in seen:
            continue
        px = form.partner(x)
        if px != x and px in win:
            j = win.index(px)
            pairs.append((i, j))
            seen.add(x)
            seen.add(px)
    return pairs


def so_flag_ambiguity(st, level):
    """Detect the three-way stabilizer coincidence at a maximal isotropic.

    For a symmetric form on a matched window of hyperbolic pairs, a flag
    member that is maximal isotropic with tight neighbors (one unit below,
    its partner-extension above) shares its window stabilizer with exactly
    two siblings: the flag with the member's last unit swapped for the
    partner, and the flag with the member dropped.  Returns
    ("triple", [traces...]) or ("unique", [trace]).  Raises
    AmbiguityUnsupported when the window hosts no aligned isotropic pairs.
    """
    sys = st.system
    form = sys.form
    if form.kind != SYMMETRIC:
        raise AmbiguityUnsupported("ambiguity analysis needs a symmetric form")
    win = form.close_window(window(sys.domain, level))
    if not _iso_pair_positions(form, win):
        raise AmbiguityUnsupported(
            "no hyperbolic pairs meet the window: aligned members are "
            "anisotropic and the isotropic swap cannot arise")
    members = st.flag.members_for_window(win)
    traces = [tr for _, tr in members]
    half = len(win) // 2
    for idx, (cs, tr) in enumerate(members):
        if len(tr) != half:
            continue
        tset = set(tr)
        if any(form.partner(x) in tset for x in tr):
            continue  # not isotropic on the window
        below = traces[idx - 1] if idx > 0 else None
        above = traces[idx + 1] if idx + 1 < len(traces) else None
        if below is None or above is None:
            continue
        gained = tset - set(below)
        if len(gained) != 1:
            continue
        m = gained.pop()
        want_above = tuple(sorted(tset | {form.partner(m)},
                                  key=sys.domain.key))
        if tuple(above) != want_above:
            continue
        swapped = tuple(sorted((tset - {m}) | {form.partner(m)},
                               key=sys.domain.key))
        base_chain = [list(t) for t in traces]
        chain_swapped = [list(t) if i != idx else list(swapped)
                         for i, t in enumerate(traces)]
        chain_dropped = [list(t) for i, t in enumerate(traces) if i != idx]
        trio = [base_chain, chain_swapped, chain_dropped]
        spans = [form_chain_stabilizer(sys, win, ch) for ch in trio]
        if spans[0] == spans[1] == spans[2]:
            return "triple", trio
    return "unique", [[list(t) for t in traces]]


def form_chain_stabilizer(sys, win, chain):
    """Window stabilizer (inside the skew algebra) of a chain of traces."""
    n = len(win)
    space = _window_space(sys, n)
    g = sys.gram_matrix(win)
    pos = {x: i for i, x in enumerate(win)}
    conds = [lambda M: M.transpose() * g + g * M]
    for tr in chain:
        inside = {pos[x] for x in tr}
        outside = [i for i in range(n) if i not in inside]
        if not inside or not outside:
            continue
        def cond(M, inside=sorted(inside), outside=outside):
            return [M[i, j] for j in inside for i in outside]
        conds.append(cond)
    return Span.full(space).where(conds)
