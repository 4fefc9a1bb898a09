import random
from fractions import Fraction

import pytest

from flagpar.flags import (
    DOWN, UP, GenFlag, SelfTautFlag, TautCouple, column_couple,
    dual_delta_flag, rational_cut_couple,
)
from flagpar.indices import COLPAIR, NAT, RAT, CutSet, window
from flagpar.lie import MatSpace, Span
from flagpar.linear import (
    DualSystem, FormData, apply_op, bracket, coapply_op, trace, truncate_op,
)
from flagpar.matrices import Matrix
from flagpar.parabolic import (
    AmbiguityUnsupported, BlockFunctional, ParabolicDesc, ParabolicError,
    coeff_from_padded_action, coeff_op_of_matrix, faithful_action_span,
    form_chain_stabilizer, infinite_trace_functionals, is_form_skew,
    is_locally_solvable, is_selftaut, is_taut_couple, op_of_window_matrix,
    so_flag_ambiguity, stabilizer_contains, stabilizer_truncation,
    truncate_flag_stabilizer, window_action_pair,
)


def nat_delta():
    return DualSystem(NAT, "Qi", "delta")


def fin(dom, *xs):
    return CutSet.finite(dom, list(xs))


def random_chain(rng, n, depth):
    """Random strictly increasing chain of subsets of 1..n."""
    chain = []
    cur = set()
    for _ in range(depth):
        add = [i for i in range(1, n + 1) if i not in cur]
        if not add:
            break
        cur = cur | set(rng.sample(add, rng.randint(1, len(add))))
        if len(cur) < n:
            chain.append(fin(NAT, *sorted(cur)))
    return chain


def brute_stab_ok(sys, couple, op, win):
    """Independent route: apply/coapply on every member representative."""
    fv, fw = couple.flag_v, couple.flag_w
    for cs, _ in fv.members_for_window(win):
        for x in win:
            if not cs.contains(x):
                continue
            img = apply_op(op, sys.basis_vec("V", x))
            if any(not cs.contains(i) for i in img.support()):
                return False
    for cs, _ in fw.members_for_window(win):
        for y in win:
            if not cs.contains(y):
                continue
            img = coapply_op(op, sys.basis_vec("W", y))
            if any(not cs.contains(i) for i in img.support()):
                return False
    return True


def test_delta_membership_matches_apply_route():
    rng = random.Random(7)
    sys = nat_delta()
    win = window(NAT, 6)
    for _ in range(40):
        fv = GenFlag.finite_chain(sys, "V", random_chain(rng, 6, 2))
        fw = GenFlag.finite_chain(sys, "W", random_chain(rng, 6, 2))
        couple = TautCouple(fv, fw)
        p = ParabolicDesc(couple)
        elem = [(rng.randint(1, 6), rng.randint(1, 6), rng.randint(-2, 2))
                for _ in range(rng.randint(1, 3))]
        op = sys.op(elem)
        assert stabilizer_contains(p, op) == brute_stab_ok(sys, couple, op, win)


def invariance_oracle(n, v_traces, w_traces):
    """Stabilizer of coordinate subspaces via explicit invariance rows."""
    space = MatSpace(n, base="Qi")
    conds = []
    for tr in v_traces:
        inside = set(tr)
        rows = [(i, j) for j in range(n) for i in range(n)
                if (j + 1) in inside and (i + 1) not in inside]
        if rows:
            conds.append(lambda M, rows=rows: [M[i, j] for i, j in rows])
    for tr in w_traces:
        inside = set(tr)
        rows = [(i, j) for i in range(n) for j in range(n)
                if (i + 1) in inside and (j + 1) not in inside]
        if rows:
            conds.append(lambda M, rows=rows: [M[i, j] for i, j in rows])
    return Span.full(space).where(conds) if conds else Span.full(space)


def test_delta_truncation_matches_invariance_oracle():
    rng = random.Random(11)
    sys = nat_delta()
    n = 5
    win = window(NAT, n)
    for _ in range(25):
        chain_v = random_chain(rng, n, 2)
        chain_w = random_chain(rng, n, 2)
        fv = GenFlag.finite_chain(sys, "V", chain_v)
        fw = GenFlag.finite_chain(sys, "W", chain_w)
        p = ParabolicDesc(TautCouple(fv, fw))
        got = stabilizer_truncation(p, n)
        v_tr = [[x for x in win if cs.contains(x)] for cs in chain_v]
        w_tr = [[x for x in win if cs.contains(x)] for cs in chain_w]
        want = invariance_oracle(n, v_tr, w_tr)
        assert got == want


def test_nat_borel_truncation_is_upper_triangular():
    sys = nat_delta()
    fv = GenFlag.unit_flag(sys, "V", UP)
    fw = dual_delta_flag(fv)
    p = ParabolicDesc(TautCouple(fv, fw))
    n = 5
    span = stabilizer_truncation(p, n)
    assert span.dim == n * (n + 1) // 2
    for M in span.basis:
        for i in range(n):
            for j in range(n):
                if i > j:
                    assert M[i, j] == 0
    # strictly smaller with the traceless row
    p_sl = ParabolicDesc(TautCouple(fv, fw), ambient="sl")
    assert stabilizer_truncation(p_sl, n).dim == span.dim - 1


def test_rational_borel_truncation():
    sys = DualSystem(RAT, "Qi", "orderstep")
    p = ParabolicDesc(rational_cut_couple(sys))
    n = 5
    span = stabilizer_truncation(p, n)
    # coefficient coordinates: upper triangle incl. diagonal survives
    assert span.dim == n * (n + 1) // 2
    win = window(RAT, n)
    for M in span.basis:
        op = coeff_op_of_matrix(sys, win, M)
        # beta-weighted trace vanishes: coefficients sit at non-steps
        assert trace(op) == 0
    ok, detail = is_locally_solvable(p, [2, 3, 4, 5])
    assert ok


def test_orderstep_membership_beyond_term_rules():
    sys = DualSystem(NAT, "Qi", "orderstep")
    fv = GenFlag.finite_chain(sys, "V", [CutSet.ray(NAT, "le", 3)])
    fw = GenFlag.finite_chain(sys, "W", [])
    p = ParabolicDesc(TautCouple(fv, fw))
    # image of v_x is supported above the member only for x outside it
    op = sys.elementary(5, 3)
    assert stabilizer_contains(p, op)
    img = apply_op(op, sys.basis_vec("V", 4))
    assert img.support() == [5]
    # same term against the wider member does move member vectors
    fv4 = GenFlag.finite_chain(sys, "V", [CutSet.ray(NAT, "le", 4)])
    p4 = ParabolicDesc(TautCouple(fv4, fw))
    assert not stabilizer_contains(p4, op)
    # difference of two steps cancels exactly where it must not act
    op2 = sys.op([(5, 4, 1), (5, 5, -1)])
    assert stabilizer_contains(p4, op2)
    assert apply_op(op2, sys.basis_vec("V", 5)).support() == [5]
    assert apply_op(op2, sys.basis_vec("V", 6)).is_zero()


def test_taut_couple_verdicts():
    sys = nat_delta()
    fv = GenFlag.finite_chain(sys, "V", [fin(NAT, 1)])
    bad_fw = GenFlag.finite_chain(sys, "W", [fin(NAT, 2)])
    ok, report = is_taut_couple(TautCouple(fv, bad_fw), 4)
    assert not ok
    assert report["failures"]
    good_fw = dual_delta_flag(fv)
    ok, report = is_taut_couple(TautCouple(fv, good_fw), 4)
    assert ok
    assert report["verdict"] == "holds-to-level-4"


def test_column_couple_taut():
    sys = DualSystem(COLPAIR, "Qi", "delta")
    ok, report = is_taut_couple(column_couple(sys), 3)
    assert ok


def test_faithful_action_span_composition():
    # naive products of orderstep coefficient matrices are not composition:
    # the diagonal cells commute as matrices but not as operators
    sys = DualSystem(NAT, "Qi", "orderstep")
    win = window(NAT, 3)
    space = MatSpace(3, base="Qi")
    diag = Span(space, [Matrix.from_fn(3, 3, lambda r, c, k=k:
                                       Fraction(1) if r == c == k else Fraction(0))
                        for k in range(3)])
    assert diag.bracket(diag).dim == 0
    e11 = sys.op([(1, 1, 1)])
    e22 = sys.op([(2, 2, 1)])
    assert bracket(e11, e22) == sys.op([(1, 2, 1)])
    pw, act = faithful_action_span(sys, win, diag)
    assert pw == [1, 2, 3, 4]
    assert act.dim == 3
    assert act.bracket(act).dim > 0
    # round trip through the padded action coordinates
    for M in diag.basis:
        op = coeff_op_of_matrix(sys, win, M)
        back = coeff_from_padded_action(sys, win, truncate_op(op, pw))
        assert back == M


def test_rational_couple_taut():
    sys = DualSystem(RAT, "Qi", "orderstep")
    ok, report = is_taut_couple(rational_cut_couple(sys), 3)
    assert ok


def so4():
    return DualSystem(NAT, "Qi", "form",
                      FormData("symmetric", [("pairs", 2), ("plus", None)]))


def sp4():
    return DualSystem(NAT, "Qi", "form",
                      FormData("alternating", [("pairs", 2), ("pairs", None)]))


def test_form_skewness_rules():
    so = so4()
    # symmetric form: antisymmetric coefficients pass
    assert is_form_skew(so.op([(1, 3, 2), (3, 1, -2)]))
    assert not is_form_skew(so.op([(1, 3, 2), (3, 1, 2)]))
    assert not is_form_skew(so.op([(1, 1, 1)]))
    sp = sp4()
    # alternating form: symmetric coefficients pass
    assert is_form_skew(sp.op([(1, 3, 2), (3, 1, 2)]))
    assert is_form_skew(sp.op([(1, 1, 1)]))
    assert not is_form_skew(sp.op([(1, 3, 2), (3, 1, -2)]))


def test_form_stabilizer_matches_chain_oracle():
    sys = so4()
    iso = fin(NAT, 1, 3)
    flag = GenFlag.finite_chain(sys, "V", [fin(NAT, 1), iso])
    p = ParabolicDesc(SelfTautFlag(flag), ambient="form")
    win = window(NAT, 4)
    got = stabilizer_truncation(p, None, win=win)
    want = form_chain_stabilizer(sys, win, [[1], [1, 3]])
    assert got == want
    # membership agrees with the window span on window-supported ops
    for M in want.basis:
        assert stabilizer_contains(p, op_of_window_matrix(sys, win, M))
    bad = sys.op([(1, 2, 1)])  # moves v_2 = partner(1) onto v_1
    if is_form_skew(bad):
        assert not stabilizer_contains(p, bad)


def test_is_selftaut_verdicts():
    sys = so4()
    good = SelfTautFlag(GenFlag.finite_chain(sys, "V", [fin(NAT, 1, 3)]))
    ok, report = is_selftaut(good, 4)
    assert ok
    # a member containing a hyperbolic pair is incomparable with its
    # annihilator: not self-taut
    bad = SelfTautFlag(GenFlag.finite_chain(sys, "V", [fin(NAT, 1, 2)]))
    ok, report = is_selftaut(bad, 4)
    assert not ok
    assert any("incomparable" in f[0] for f in report["failures"])


def so6():
    return DualSystem(NAT, "Qi", "form",
                      FormData("symmetric", [("pairs", 3), ("plus", None)]))


def test_so_flag_ambiguity_triple():
    sys = so6()
    chain = [fin(NAT, 1), fin(NAT, 1, 3), fin(NAT, 1, 3, 5),
             fin(NAT, 1, 3, 5, 6), fin(NAT, 1, 3, 4, 5, 6)]
    st = SelfTautFlag(GenFlag.finite_chain(sys, "V", chain))
    kind, flags = so_flag_ambiguity(st, 6)
    assert kind == "triple"
    assert len(flags) == 3
    traces = [[tuple(t) for t in ch] for ch in flags]
    assert [t for t in traces[1] if len(t) == 3 and t != (1, 3)] == [(1, 3, 6)]
    assert all(len(t) != 3 or t == (1, 3) for t in traces[2])


def test_so_flag_ambiguity_unique_and_unsupported():
    sys = so6()
    st = SelfTautFlag(GenFlag.finite_chain(sys, "V", [fin(NAT, 1)]))
    kind, flags = so_flag_ambiguity(st, 6)
    assert kind == "unique"
    plus_only = DualSystem(NAT, "Qi", "form",
                           FormData("symmetric", [("plus", None)]))
    st2 = SelfTautFlag(GenFlag.finite_chain(plus_only, "V", []))
    with pytest.raises(AmbiguityUnsupported):
        so_flag_ambiguity(st2, 4)


def test_block_functional_is_character():
    sys = nat_delta()
    fv = GenFlag.finite_chain(sys, "V", [fin(NAT, 1, 2)])
    fw = dual_delta_flag(fv)
    p = ParabolicDesc(TautCouple(fv, fw))
    n = 4
    span = stabilizer_truncation(p, n)
    win = window(NAT, n)
    ops = [op_of_window_matrix(sys, win, M) for M in span.basis]
    f = BlockFunctional(sys, fin(NAT, 1, 2))
    assert any(f.evaluate(op) != 0 for op in ops)
    for a in ops:
        for b in ops:
            assert f.evaluate(bracket(a, b)) == 0


def test_infinite_trace_functionals_per_column():
    sys = DualSystem(COLPAIR, "Qi", "delta")
    flag = GenFlag.column_schema(sys, "V", UP)
    funcs = infinite_trace_functionals(flag, 4)
    assert len(funcs) == 4
    op = sys.elementary((2, 3), (2, 3), 7)
    vals = [f.evaluate(op) for f in funcs]
    assert vals == [0, 0, 7, 0]


def test_window_action_pair_consistency():
    sys = nat_delta()
    win = window(NAT, 3)
    M = Matrix([[Fraction(0), Fraction(2), Fraction(0)],
                [Fraction(0), Fraction(0), Fraction(0)],
                [Fraction(1), Fraction(0), Fraction(0)]])
    act_v, act_w = window_action_pair(sys, win, M)
    assert act_v == M
    assert act_w == M.transpose()
    osys = DualSystem(NAT, "Qi", "orderstep")
    E = Matrix.from_fn(3, 3, lambda i, j:
                       Fraction(1) if (i, j) == (0, 1) else Fraction(0))
    av, aw = window_action_pair(osys, win, E)
    # term (1, 2): v_x maps to [x > 2] v_1, so only the column of index 3
    assert av[0, 2] == 1 and av[0, 1] == 0 and av[0, 0] == 0
    # w_y maps to [1 > y] w_2: nothing inside the window moves
    assert all(aw[i, j] == 0 for i in range(3) for j in range(3))


def test_stabilizer_contains_trace_rows():
    sys = nat_delta()
    fv = GenFlag.finite_chain(sys, "V", [fin(NAT, 1, 2)])
    fw = dual_delta_flag(fv)
    row = ((Fraction(1), fin(NAT, 1, 2)),)
    p = ParabolicDesc(TautCouple(fv, fw), trace_rows=(row,))
    assert stabilizer_contains(p, sys.op([(1, 1, 1), (2, 2, -1)]))
    assert not stabilizer_contains(p, sys.op([(1, 1, 1)]))
    n = 4
    plain = ParabolicDesc(TautCouple(fv, fw))
    assert stabilizer_truncation(p, n).dim == stabilizer_truncation(plain, n).dim - 1


def test_sl_ambient_exact_membership():
    sys = nat_delta()
    fv = GenFlag.unit_flag(sys, "V", UP)
    fw = dual_delta_flag(fv)
    p = ParabolicDesc(TautCouple(fv, fw), ambient="sl")
    assert stabilizer_contains(p, sys.op([(1, 1, 1), (2, 2, -1)]))
    assert not stabilizer_contains(p, sys.op([(1, 1, 1)]))
    assert stabilizer_contains(p, sys.op([(1, 5, 3)]))
    assert not stabilizer_contains(p, sys.op([(5, 1, 3)]))
