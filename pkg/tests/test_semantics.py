import pytest
from hypothesis import given, settings, strategies as st

from imlkit.formula import Atom, parse, subformulas, BOT, TOP
from imlkit.io import load_model, load_frame
from imlkit.randgen import forward_confluent
from imlkit.semantics import (Program, countervaluation, evaluate, evaluate3, extension,
                              extensions, heredity_check, models_of, sat, search_valuations,
                              true_in_model, upsets, valid_in_frame, variant_name)
import imlkit.semantics as semantics
from imlkit.structures import Model, build_frame, check_property, generated_submodel

from strategies import formulas, frames, models

AF = parse("<>(p -> q) -> []p -> <>q")


def test_af_refuted_at_c():
    m = load_model("fixtures/prop16_1.json")
    assert not sat(m, "c", AF)


def test_top_bot():
    m = load_model("fixtures/prop16_1.json")
    for s in range(m.n):
        assert sat(m, s, TOP) and not sat(m, s, BOT)
    assert not true_in_model(m, BOT)


def test_wijesekera_distribution_failure():
    m = load_model("fixtures/prop14.json")
    f = parse("<>(p | q) -> <>p | <>q")
    assert not sat(m, "a", f, "wijesekera")
    assert sat(m, "a", f, "new")


def test_one_state_frames():
    loop = build_frame(1, [], [(0, 0)])
    bare = build_frame(1, [], [])
    assert true_in_model(Model(bare, {}), parse("[]F"))
    assert true_in_model(Model(loop, {}), parse("<>T"))
    assert not valid_in_frame(bare, parse("<>T"))
    assert not valid_in_frame(loop, parse("[]F"))


def test_a1_valid_everywhere_small():
    from imlkit.decide import enumerate_frames
    a1 = parse("[](p -> q) -> []p -> []q")
    assert all(valid_in_frame(fr, a1) for fr in enumerate_frames(2))


def test_af_frame_witness():
    fr = load_frame("fixtures/prop16_1.json")
    w = countervaluation(fr, AF)
    assert w.valuation() == {"p": 0, "q": 0}
    assert fr.names[w.state] == "c"


def test_fs_heredity_failure_fixture():
    m = load_model("fixtures/prop16_1_fs.json")
    dp = parse("<>p")
    assert sat(m, "a", dp, "fs") and not sat(m, "c", dp, "fs")
    assert not heredity_check(m, dp, "fischer_servi")
    assert heredity_check(m, dp, "new")


def test_variant_aliases():
    assert variant_name("fs") == "fischer_servi"
    assert variant_name("wij") == "wijesekera"
    with pytest.raises(ValueError):
        variant_name("kripke")


def test_unknown_atom_is_empty():
    m = load_model("fixtures/prop16_1.json")
    assert extension(m, Atom("zz")) == 0


def test_upsets_ascending():
    fr = build_frame(2, [(0, 1)], [])
    assert upsets(fr) == [0b00, 0b10, 0b11]


def test_models_of_count():
    fr = build_frame(2, [(0, 1)], [])
    assert len(list(models_of(fr, ["p", "q"]))) == 9


# ---------------------------------------------------------------- validity search

@settings(max_examples=150, deadline=None)
@given(frames(max_n=3), formulas(max_depth=3, names=("p", "q")))
def test_vector_and_dfs_search_agree(fr, f):
    fast = search_valuations(fr, f)
    old = semantics.VECTOR_LIMIT
    semantics.VECTOR_LIMIT = 0
    try:
        slow = search_valuations(fr, f)
    finally:
        semantics.VECTOR_LIMIT = old
    assert fast == slow


@settings(max_examples=100, deadline=None)
@given(frames(max_n=3), formulas(max_depth=3, names=("p", "q")))
def test_countervaluation_is_first_in_canonical_order(fr, f):
    # brute force over models_of, which runs in the same canonical order
    prog = Program([f])
    want = None
    for m in models_of(fr, sorted(prog.atom_names)):
        ext = evaluate(prog, fr, m.val)[prog.roots[0]]
        if ext != fr.full:
            bad = [s for s in range(fr.n) if not ext >> s & 1]
            top = [s for s in bad
                   if not any(fr.le[s] >> t & 1 and not fr.le[t] >> s & 1 for t in bad)]
            want = (tuple(sorted(m.val.items())), top[0])
            break
    w = countervaluation(fr, f)
    assert (None if w is None else (w.val, w.state)) == want


@settings(max_examples=100, deadline=None)
@given(frames(max_n=3), formulas(max_depth=3, names=("p", "q")),
       formulas(max_depth=2, names=("p", "q")))
def test_search_respects_premises(fr, goal, prem):
    w = search_valuations(fr, goal, [prem])
    if w is not None:
        m = w.model(fr)
        assert true_in_model(m, prem)
        assert not sat(m, w.state, goal)


@settings(max_examples=200)
@given(models(max_n=4), formulas(max_depth=3))
def test_three_valued_is_sound(m, f):
    # with a partial valuation, definite answers agree with the total one
    prog = Program([f])
    full = m.frame.full
    names = sorted(m.val)
    tval = {p: m.val[p] for p in names[:1]}
    fval = {p: full & ~m.val[p] for p in names[:1]}
    ts, fs = evaluate3(prog, m.frame, tval, fval)
    exact = evaluate(prog, m.frame, m.val)
    for t, fl, x in zip(ts, fs, exact):
        assert t & ~x == 0
        assert fl & x == 0


# ---------------------------------------------------------------- properties

@settings(max_examples=300)
@given(models(max_n=5), formulas())
def test_heredity_new(m, f):
    assert heredity_check(m, f)


@settings(max_examples=200)
@given(models(max_n=4, frame_strategy=frames(max_n=4).map(forward_confluent)), formulas())
def test_variants_agree_on_fc(m, f):
    assert check_property(m.frame, "fc")
    a = extensions(m, f, "new")
    assert a == extensions(m, f, "fischer_servi") == extensions(m, f, "wijesekera")


@settings(max_examples=200)
@given(models(max_n=5), formulas(), st.data())
def test_generated_submodel(m, f, data):
    s = data.draw(st.integers(0, m.n - 1))
    sub, old = generated_submodel(m, s)
    big = extensions(m, f)
    small = extensions(sub, f)
    for g in subformulas(f):
        for i, t in enumerate(old):
            assert bool(small[g] >> i & 1) == bool(big[g] >> t & 1)


def test_valid_on_all_implies_valid_on_fc():
    from imlkit.decide import enumerate_frames
    for text in ["[](p -> q) -> []p -> []q", "~<>F", "[]T"]:
        f = parse(text)
        if all(valid_in_frame(fr, f) for fr in enumerate_frames(2)):
            assert all(valid_in_frame(fr, f) for fr in enumerate_frames(2, "fc"))
