import pytest
from hypothesis import given, settings

from imlkit.errors import NotPreorder, NotUpClosed, UnknownPredicate
from imlkit.structures import (IMPLICATIONS, PREDICATES, Frame, FrameClassSpec, Model,
                               all_properties, build_frame, check_property, compose,
                               disjoint_union, empty, from_pairs, generated_states,
                               generated_subframe, identity, implied_properties_check,
                               is_le_closed, parse_spec, rt_closure, to_pairs, transpose,
                               up_closure)
from imlkit.decide import enumerate_frames
from imlkit import transform

from strategies import frames

A, B, C, D, E, F = range(6)


def af_frame():
    return build_frame(3, [(A, 2)], [(A, B)], names="abc")


def loop():
    return build_frame(1, [], [(0, 0)])


def chain_frame():
    # states a..e, b≤c≤d, R = {(a,c), (b,e), (d,e)}
    return build_frame(5, [(1, 2), (2, 3)], [(0, 2), (1, 4), (3, 4)])


# ---------------------------------------------------------------- relation algebra

def test_compose_identity_and_empty():
    r = from_pairs(3, [(0, 1), (2, 2)])
    assert compose(identity(3), r) == r
    assert compose(empty(3), r) == empty(3)


def test_compose_ge_r():
    le = rt_closure(from_pairs(3, [(0, 2)]))
    r = from_pairs(3, [(0, 1)])
    assert sorted(to_pairs(compose(transpose(le), r))) == [(0, 1), (2, 1)]


def test_rt_closure():
    assert to_pairs(rt_closure(from_pairs(3, [(0, 1), (1, 2)]))) == [
        (0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def test_from_pairs_range():
    with pytest.raises(ValueError):
        from_pairs(2, [(0, 2)])


# ---------------------------------------------------------------- frames

def test_build_frame_examples():
    f = loop()
    assert f.n == 1 and f.r == (1,)
    f = af_frame()
    assert f.le == (0b101, 0b010, 0b100)
    assert f.r == (0b010, 0, 0)
    with pytest.raises(NotPreorder):
        build_frame(2, [(0, 1)], [], close=False)


def test_frame_rejects_non_preorder():
    with pytest.raises(NotPreorder):
        Frame(2, (0b01, 0b00), (0, 0))


def test_frame_names_default_and_equality():
    f = build_frame(2, [(0, 1)], [])
    assert f.names == ("a", "b")
    assert f == Frame(2, f.le, f.r, ("x", "y"))  # names do not count


def test_model_requires_up_closed_valuation():
    f = af_frame()
    with pytest.raises(NotUpClosed):
        Model(f, {"p": 0b001})
    assert Model(f, {"p": 0b101}).v("p") == 0b101
    assert Model(f, {}).v("zz") == 0


# ---------------------------------------------------------------- predicates

def test_nineteen_predicates():
    assert len(PREDICATES) == 19
    assert all(all_properties(loop()).values())


def test_af_frame_properties():
    props = all_properties(af_frame())
    assert (props["fc"], props["bc"], props["dc"], props["uc"]) == (False, True, True, True)


def test_ad_frame_not_dc():
    # W = {a,c,d}, a≤c, cRd
    f = build_frame(3, [(0, 1)], [(1, 2)], names="acd")
    assert not check_property(f, "dc")


def test_transitive_but_not_up_or_down():
    props = all_properties(chain_frame())
    assert props["tra"] and not props["utra"] and not props["dtra"]


def test_par_is_ref_sym_tra():
    for fr in enumerate_frames(2):
        want = all(check_property(fr, x) for x in ("ref", "sym", "tra"))
        assert check_property(fr, "par") == want


def test_unknown_predicate():
    with pytest.raises(UnknownPredicate):
        check_property(loop(), "foo")
    with pytest.raises(UnknownPredicate):
        parse_spec("fc+nope")


def test_reflexive_implies_up_and_down():
    f = build_frame(2, [(0, 1)], [(0, 0), (1, 1)])
    assert check_property(f, "ref") and check_property(f, "uref") and check_property(f, "dref")


def test_implications_on_small_frames():
    # every frame up to 3 states
    for fr in enumerate_frames(3):
        assert all(implied_properties_check(fr).values())


def test_symmetric_frames_confluences():
    for fr in enumerate_frames(3, "sym"):
        assert check_property(fr, "fc") == check_property(fr, "bc")
        assert check_property(fr, "dc") == check_property(fr, "uc")


def test_implications_list():
    assert ("fc", "qfc") in IMPLICATIONS and len(IMPLICATIONS) == 8


# ---------------------------------------------------------------- class specs

def test_parse_spec():
    assert parse_spec("fc").preds == ("fc",)
    assert parse_spec("fbdc").preds == ("fc", "bc", "dc")
    assert parse_spec("C_ref + tra").preds == ("ref", "tra")
    assert parse_spec("all").holds(af_frame())
    assert str(parse_spec("uref,dref")) == "uref+dref"
    with pytest.raises(ValueError):
        FrameClassSpec(())


# ---------------------------------------------------------------- up-sets and subframes

def test_is_le_closed():
    f = af_frame()
    assert is_le_closed(f, 0)
    assert is_le_closed(f, f.full)
    assert not is_le_closed(f, {0})
    assert up_closure(f, {0}) == 0b101


def test_generated_subframe_examples():
    g, old = generated_subframe(loop(), 0)
    assert g == loop() and old == (0,)
    chains = build_frame(6, [(0, 2), (1, 4), (3, 5)], [(0, 1), (2, 3), (4, 5)])
    # chains a≤c, b≤e, d≤f with aRb, cRd, eRf reach everything from a
    assert generated_states(chains, 0) == 0b111111
    u = disjoint_union(loop(), loop())
    g, old = generated_subframe(u, 0)
    assert g.n == 1 and old == (0,)


@settings(max_examples=200)
@given(frames(max_n=5))
def test_generated_subframe_idempotent(fr):
    for s in range(fr.n):
        g, old = generated_subframe(fr, s)
        g2, old2 = generated_subframe(g, old.index(s))
        assert g2 == g
        # every state of the generated set generates a subset of it
        gen = generated_states(fr, s)
        for t in old:
            assert generated_states(fr, t) & ~gen == 0


@settings(max_examples=200)
@given(frames(max_n=4))
def test_up_and_down_conditions_make_update_regular(fr):
    from imlkit.structures import Model
    upd = transform.intersectional_update(Model(fr, {})).frame
    if check_property(fr, "uref") and check_property(fr, "dref"):
        assert check_property(upd, "ref")
    if check_property(fr, "usym") and check_property(fr, "dsym"):
        assert check_property(upd, "sym")
    if check_property(fr, "utra") and check_property(fr, "dtra"):
        assert check_property(upd, "tra")
