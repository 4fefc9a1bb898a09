import random

import pytest

from flagpar.flags import (
    BLOCK, COLUMNS, DOWN, UNITS, UP, FlagError, GenFlag, SelfTautFlag,
    TautCouple, column_couple, dual_delta_flag, rational_cut_couple,
)
from flagpar.indices import COLPAIR, NAT, RAT, CutSet, window
from flagpar.linear import FormData, DualSystem, closure


def nat_delta():
    return DualSystem(NAT, "Qi", "delta")


def rat_orderstep():
    return DualSystem(RAT, "Qi", "orderstep")


def colpair_delta():
    return DualSystem(COLPAIR, "Qi", "delta")


def fin(dom, *xs):
    return CutSet.finite(dom, list(xs))


def test_finite_chain_members_and_validation():
    sys = nat_delta()
    f = GenFlag.finite_chain(sys, "V", [fin(NAT, 1)])
    assert f.is_member(CutSet.empty(NAT))
    assert f.is_member(fin(NAT, 1))
    assert f.is_member(CutSet.full(NAT))
    assert not f.is_member(fin(NAT, 2))
    f.validate(window(NAT, 4))
    assert f.minmember(1) == fin(NAT, 1)
    assert f.minmember(3) == CutSet.full(NAT)


def test_incomparable_chain_rejected_with_witness():
    sys = nat_delta()
    with pytest.raises(FlagError) as exc:
        GenFlag(sys, "V",
                [CutSet.empty(NAT), fin(NAT, 1), fin(NAT, 2, 3), CutSet.full(NAT)],
                [(BLOCK, None)] * 3)
    assert "witness" in str(exc.value)
    # the witness names an index in the earlier anchor missing from the later
    assert "1" in str(exc.value)


def test_unit_flag_on_nat():
    sys = nat_delta()
    f = GenFlag.unit_flag(sys, "V", UP)
    # members are exactly the initial segments, including the zero space
    assert f.is_member(CutSet.empty(NAT))
    assert f.is_member(CutSet.ray(NAT, "le", 5))
    assert not f.is_member(CutSet.full(NAT))
    assert not f.is_member(fin(NAT, 2))
    assert f.minmember(4) == CutSet.ray(NAT, "le", 4)
    f.validate(window(NAT, 5))


def test_column_schema_window_trace():
    sys = colpair_delta()
    f = GenFlag.column_schema(sys, "V", UP)
    # member at column cut a=2 meets the size-3 window in column 1 only
    m = f.minmember((1, 1))
    win = window(COLPAIR, 3)
    got = tuple(i for i in win if m.contains(i))
    assert got == ((1, 1), (2, 1), (3, 1))
    assert f.is_member(m)
    assert f.is_member(CutSet.empty(COLPAIR))
    assert not f.is_member(CutSet.full(COLPAIR))
    f.validate(window(COLPAIR, 4))
    # a column cut two columns up
    m3 = f.minmember((2, 2))
    assert m3 == CutSet.ray(COLPAIR, "lt", (1, 3))


def test_column_schema_down_direction():
    sys = colpair_delta()
    f = GenFlag.column_schema(sys, "W", DOWN)
    assert f.is_member(CutSet.full(COLPAIR))
    assert not f.is_member(CutSet.empty(COLPAIR))
    m = f.minmember((3, 2))
    assert m == CutSet.ray(COLPAIR, "ge", (1, 2))
    f.validate(window(COLPAIR, 3))


def test_rational_cut_schema():
    sys = rat_orderstep()
    f = GenFlag.unit_flag(sys, "V", UP)
    from fractions import Fraction as F
    half = F(1, 2)
    assert f.is_member(CutSet.ray(RAT, "le", half))
    assert f.is_member(CutSet.ray(RAT, "lt", half))
    assert not f.is_member(CutSet.empty(RAT))
    assert not f.is_member(CutSet.full(RAT))
    assert f.minmember(half) == CutSet.ray(RAT, "le", half)
    f.validate(window(RAT, 4))


def test_semiclosed_rational_examples():
    sys = rat_orderstep()
    cut_open = CutSet.ray(RAT, "lt", 0)
    cut_closed = CutSet.ray(RAT, "le", 0)
    bad = GenFlag.finite_chain(sys, "V", [cut_open])
    ok, witness = bad.is_semiclosed(window(RAT, 3))
    assert not ok and witness == cut_open
    good = GenFlag.finite_chain(sys, "V", [cut_open, cut_closed])
    ok, witness = good.is_semiclosed(window(RAT, 3))
    assert ok and witness is None
    # the full rational cut family is semiclosed: strict cuts pair with
    # their closures inside the family
    fam = GenFlag.unit_flag(sys, "V", UP)
    ok, witness = fam.is_semiclosed(window(RAT, 4))
    assert ok


def test_semiclosed_is_trivial_for_delta():
    f = GenFlag.finite_chain(nat_delta(), "V", [fin(NAT, 2, 5)])
    ok, witness = f.is_semiclosed(window(NAT, 4))
    assert ok and witness is None


def test_nat_orderstep_zero_member_needs_unit_step():
    sys = DualSystem(NAT, "Qi", "orderstep")
    # closure of the zero space is span{v_1}; a bare 0 < V chain fails
    bare = GenFlag.finite_chain(sys, "V", [])
    ok, witness = bare.is_semiclosed(window(NAT, 3))
    assert not ok and witness == CutSet.empty(NAT)
    fixed = GenFlag.finite_chain(sys, "V", [fin(NAT, 1)])
    ok, witness = fixed.is_semiclosed(window(NAT, 3))
    assert ok


def brute_minmember(flag, x, probes):
    best = None
    for cs in probes:
        if cs.contains(x) and (best is None or cs.subset_of(best)):
            best = cs
    return best


def test_minmember_against_member_enumeration():
    rng = random.Random(20260822)
    sys = nat_delta()
    for _ in range(25):
        k = rng.randint(1, 3)
        pool = list(range(1, 9))
        rng.shuffle(pool)
        sets = []
        acc = set()
        for i in range(k):
            acc |= set(pool[:rng.randint(1, 3)])
            pool = pool[3:] or list(range(1, 9))
            sets.append(fin(NAT, *sorted(acc)))
        chain = []
        seen = set()
        for cs in sets:
            if cs not in seen and all(p.subset_of(cs) for p in chain):
                chain.append(cs)
                seen.add(cs)
        f = GenFlag.finite_chain(sys, "V", chain)
        probes = [cs for cs, _ in f.members_for_window(window(NAT, 9))]
        for x in range(1, 9):
            assert f.minmember(x) == brute_minmember(f, x, probes)


def test_member_floor_matches_pointwise_intersection():
    sys = nat_delta()
    f = GenFlag.unit_flag(sys, "V", UP)
    # floor over {3,...,6} is minmember(3)
    region = CutSet.interval(NAT, (3, True), (6, True))
    assert f.member_floor(region) == CutSet.ray(NAT, "le", 3)
    # floor strictly above 4 is minmember(5) on a discrete domain
    assert f.floor_above(4) == CutSet.ray(NAT, "le", 5)
    # rational flags: floor above a point keeps the point (closed limit)
    g = GenFlag.unit_flag(rat_orderstep(), "V", UP)
    assert g.floor_above(0) == CutSet.ray(RAT, "le", 0)
    assert g.member_floor(CutSet.empty(RAT)) == CutSet.full(RAT)
    # down-direction family on the W side
    h = GenFlag.unit_flag(rat_orderstep(), "W", DOWN)
    assert h.minmember(0) == CutSet.ray(RAT, "ge", 0)
    assert h.floor_below(0) == CutSet.ray(RAT, "ge", 0)


def test_member_floor_mixed_chain():
    sys = nat_delta()
    # 0 < {1,2} (block) < full (units): floors cross the anchor correctly
    f = GenFlag(sys, "V",
                [CutSet.empty(NAT), fin(NAT, 1, 2), CutSet.full(NAT)],
                [(BLOCK, None), (UNITS, UP)])
    assert f.minmember(1) == fin(NAT, 1, 2)
    assert f.minmember(5) == CutSet.ray(NAT, "le", 5)
    assert f.member_floor(CutSet.ray(NAT, "ge", 1)) == fin(NAT, 1, 2)
    assert f.member_floor(CutSet.ray(NAT, "ge", 3)) == CutSet.ray(NAT, "le", 3)
    f.validate(window(NAT, 6))


def test_columns_member_floor():
    sys = colpair_delta()
    f = GenFlag.column_schema(sys, "V", UP)
    region = CutSet.ray(COLPAIR, "gt", (2, 1))
    assert f.member_floor(region) == CutSet.ray(COLPAIR, "lt", (1, 2))
    g = GenFlag.column_schema(sys, "W", DOWN)
    region = CutSet.ray(COLPAIR, "lt", (1, 3))
    assert g.member_floor(region) == CutSet.ray(COLPAIR, "ge", (1, 2))


def test_junction_neighbors_come_with_membership():
    sys = rat_orderstep()
    # an anchor is a member exactly when an adjacent cut family reaches it,
    # and that family edge then supplies the immediate neighbor, so every
    # flag built from this gap catalog passes the junction check
    lo = CutSet.ray(RAT, "le", 0)
    f = GenFlag(sys, "V", [CutSet.empty(RAT), lo, CutSet.full(RAT)],
                [(UNITS, UP), (UNITS, UP)])
    assert f.anchor_is_member(1)  # gap below attains its max at 0
    f.validate(window(RAT, 3))
    # open-cut anchor: the gap above starts closed at 0, so A = M_lt(0)
    lo_open = CutSet.ray(RAT, "lt", 0)
    g = GenFlag(sys, "V", [CutSet.empty(RAT), lo_open, CutSet.full(RAT)],
                [(UNITS, UP), (UNITS, UP)])
    assert g.anchor_is_member(1)
    g.validate(window(RAT, 3))
    # outer anchors of the full family are not members
    full_fam = GenFlag.unit_flag(sys, "V", UP)
    assert not full_fam.anchor_is_member(0)
    assert not full_fam.anchor_is_member(1)


def test_couple_constructors():
    cc = column_couple(colpair_delta())
    assert cc.flag_v.side == "V" and cc.flag_w.side == "W"
    assert cc.flag_v.gaps == ((COLUMNS, UP),)
    assert cc.flag_w.gaps == ((COLUMNS, DOWN),)
    rc = rational_cut_couple(rat_orderstep())
    assert rc.flag_v.gaps == ((UNITS, UP),)
    with pytest.raises(FlagError):
        TautCouple(rc.flag_v, rc.flag_v)


def test_dual_delta_flag():
    sys = nat_delta()
    f = GenFlag.finite_chain(sys, "V", [fin(NAT, 1, 3)])
    d = dual_delta_flag(f)
    assert d.side == "W"
    assert d.is_member(fin(NAT, 1, 3).complement())
    u = GenFlag.unit_flag(sys, "V", UP)
    du = dual_delta_flag(u)
    assert du.gaps == ((UNITS, DOWN),)
    assert du.minmember(4) == CutSet.ray(NAT, "ge", 4)


def test_selftaut_classification():
    form = FormData("symmetric", [("pairs", 2), ("plus", None)])
    sys = DualSystem(NAT, "Qi", "form", form)
    iso = fin(NAT, 1, 3)  # first elements of both pairs
    f = GenFlag.finite_chain(sys, "V", [iso])
    st = SelfTautFlag(f)
    labels = {tuple(tr): lab for _, tr, lab in st.classify_members(window(NAT, 5))}
    assert labels[(1, 3)] == "isotropic"
    assert labels[()] == "isotropic"
    full_tr = tuple(window(NAT, 5))
    assert labels[full_tr] == "coisotropic"


def test_selftaut_rejects_kernel_mismatch():
    with pytest.raises(FlagError):
        SelfTautFlag(GenFlag.finite_chain(nat_delta(), "V", [fin(NAT, 1)]))


def test_members_for_window_chain_order():
    sys = nat_delta()
    f = GenFlag.unit_flag(sys, "V", UP)
    mem = f.members_for_window(window(NAT, 4))
    traces = [tr for _, tr in mem]
    assert traces == sorted(traces, key=len)
    for a, b in zip(mem, mem[1:]):
        assert a[0].subset_of(b[0])


def test_closure_of_member_subspace():
    sys = rat_orderstep()
    f = GenFlag.unit_flag(sys, "V", UP)
    cut = CutSet.ray(RAT, "lt", 2)
    cl = closure(f.member_subspace(cut))
    assert cl.indices == CutSet.ray(RAT, "le", 2)
