import random

import pytest
from hypothesis import given, settings, strategies as st

from imlkit.errors import NotReflexive, PreconditionFailed
from imlkit.formula import Or, parse, subformulas
from imlkit.io import load_model
from imlkit.randgen import reflexive, symmetric
from imlkit.semantics import extension, extensions, sat
from imlkit.structures import Model, build_frame, check_property, to_pairs
from imlkit.transform import (double_reflexive, double_strict, intersectional_update,
                              partitionize, rooted_join)

from strategies import formulas, frames, models

loop = Model(build_frame(1, [], [(0, 0)]), {})
bare = Model(build_frame(1, [], []), {})


def agrees(new, old, origin, f):
    a, b = extensions(new, f), extensions(old, f)
    for g in subformulas(f):
        for i, t in enumerate(origin):
            if t is not None and bool(a[g] >> i & 1) != bool(b[g] >> t & 1):
                return False
    return True


# ---------------------------------------------------------------- examples

def test_intersectional_update_examples():
    assert intersectional_update(loop).frame == loop.frame
    m = intersectional_update(load_model("fixtures/prop16_1.json"))
    assert to_pairs(m.frame.r) == [(0, 1)]
    assert intersectional_update(bare).frame.r == (0,)


def test_double_strict_loop():
    m, smap = double_strict(loop)
    assert m.n == 2 and smap.labels == ((0, 0), (0, 1))
    assert to_pairs(m.frame.r) == [(0, 1)]
    assert check_property(m.frame, "tra")
    m, _ = double_strict(bare)
    assert m.frame.r == (0, 0)


def test_double_strict_claim_on_af_model():
    old = load_model("fixtures/prop16_1.json")
    m, smap = double_strict(old)
    assert agrees(m, old, smap.origin, parse("<>(p -> q) -> []p -> <>q"))


def test_double_reflexive():
    m, _ = double_reflexive(loop)
    assert m.n == 2 and check_property(m.frame, "ref") and check_property(m.frame, "tra")
    with pytest.raises(NotReflexive):
        double_reflexive(bare)


def test_partitionize():
    m, smap = partitionize(loop)
    assert m.n == 1 and smap.labels == ((0, frozenset({0})),)
    assert m.frame.names == ("a|a",)
    assert check_property(m.frame, "par")
    with pytest.raises(PreconditionFailed):
        partitionize(bare)


def test_rooted_join_two_points():
    m, root, smap = rooted_join(loop, 0, bare, 0)
    assert m.n == 3 and root == 0
    assert m.frame.le[0] == 0b111
    assert smap.origin == (None, 0, 0)
    # the disjunction fails at the root although each side holds a disjunct
    assert not sat(m, root, parse("[]F | <>T"))


def test_rooted_join_names_avoid_clash():
    named = Model(build_frame(1, [], [], names=["root"]), {})
    m, _, _ = rooted_join(named, 0, named, 0)
    assert m.frame.names[0] == "root'"


# ---------------------------------------------------------------- claims as properties

@settings(max_examples=200)
@given(models(max_n=5), formulas())
def test_intersectional_update_preserves_everything(m, f):
    assert extensions(intersectional_update(m), f) == extensions(m, f)


@settings(max_examples=150)
@given(models(max_n=5), formulas())
def test_double_strict_claim(m, f):
    new, smap = double_strict(m)
    assert check_property(new.frame, "tra")
    assert agrees(new, m, smap.origin, f)


@settings(max_examples=150)
@given(models(max_n=5, frame_strategy=frames(max_n=5).map(reflexive)), formulas())
def test_double_reflexive_claim(m, f):
    new, smap = double_reflexive(m)
    assert check_property(new.frame, "ref") and check_property(new.frame, "tra")
    assert agrees(new, m, smap.origin, f)


@settings(max_examples=150)
@given(models(max_n=4, frame_strategy=frames(max_n=4).map(lambda fr: symmetric(reflexive(fr)))),
       formulas())
def test_partitionize_claim(m, f):
    new, smap = partitionize(m)
    assert check_property(new.frame, "par")
    assert agrees(new, m, smap.origin, f)


@settings(max_examples=150)
@given(models(max_n=3), models(max_n=3), formulas(), formulas(), st.data())
def test_rooted_join_claims(m1, m2, a, b, data):
    s1 = data.draw(st.integers(0, m1.n - 1))
    s2 = data.draw(st.integers(0, m2.n - 1))
    m, root, smap = rooted_join(m1, s1, m2, s2)
    left = [i if side == 1 else None for i, side in
            zip(smap.origin, [None] + [1] * m1.n + [2] * m2.n)]
    right = [i if side == 2 else None for i, side in
             zip(smap.origin, [None] + [1] * m1.n + [2] * m2.n)]
    assert agrees(m, m1, left, a) and agrees(m, m2, right, a)
    if sat(m, root, Or(a, b)):
        assert (sat(m1, s1, a) and sat(m2, s2, a)) or (sat(m1, s1, b) and sat(m2, s2, b))
