import pytest
from hypothesis import given, settings, strategies as st

from imlkit.errors import ScriptError, UnknownSchema
from imlkit.formula import parse
from imlkit.io import read_json
from imlkit.proofsys import (AXIOMS, LOGICS, RULES, SCHEMAS, Derivation, Step, bundled,
                             check_derivation, check_script, derivation_from_json,
                             derivation_to_json, derived_equivalence_check, instantiate_schema,
                             match, parse_by, parse_sigma, A5_FROM_A1, A6_FROM_R1)

FIXTURES = ["lemma12", "lemma13", "lemma14", "lemma22_box", "lemma22_diamond"]
CORRUPT = {"corrupt_r1": 5, "corrupt_ref": 2, "corrupt_ipl": 2, "corrupt_axiom": 1}


def load(name):
    return derivation_from_json(read_json("fixtures/%s.json" % name))


def test_instantiate():
    assert instantiate_schema("A4") == parse("<>F -> F")
    assert instantiate_schema("A1", {"p": parse("T"), "q": parse("T")}) == parse(
        "[](T -> T) -> []T -> []T")
    assert instantiate_schema("Af", {"p": parse("p"), "q": parse("q")}) == parse(
        "<>(p -> q) -> ([]p -> <>q)")
    with pytest.raises(UnknownSchema):
        instantiate_schema("A9")


def test_schema_table():
    assert len([k for k in SCHEMAS if not k.startswith("I")]) == 15
    assert len([k for k in SCHEMAS if k.startswith("I")]) == 10


def test_match():
    b = match(AXIOMS["A1"], parse("[](a & b -> c) -> [](a & b) -> []c"))
    assert b == {"p": parse("a & b"), "q": parse("c")}
    assert match(AXIOMS["A1"], parse("[](a -> c) -> []b -> []c")) is None


def test_parse_by():
    assert parse_by("hyp") == ("hyp", (), None, None)
    assert parse_by("MP 1 3") == ("MP", (1, 3), None, None)
    assert parse_by("IPL 1,3,4") == ("IPL", (1, 3, 4), None, None)
    rule, refs, ax, sigma = parse_by("axiom:A2 {p: p, q: ~p}")
    assert (rule, ax) == ("axiom", "A2") and dict(sigma)["q"] == parse("~p")
    with pytest.raises(ScriptError):
        parse_by("R7 1")
    with pytest.raises(ScriptError):
        parse_sigma("p: q")


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_scripts_check(name):
    rep = check_derivation(load(name))
    assert rep.ok, rep.reason


def test_nineteen_line_script_shape():
    d = load("lemma13")
    assert len(d.lines) == 19
    assert d.lines[-1].formula == parse(
        "<>(g & (b -> c) & h & i & (e -> j)) -> f | d | <>j")


def test_report_kinds():
    rep = check_derivation(load("lemma12"))
    assert rep.kind == "derivation from hypotheses" and rep.hypotheses == [1]
    assert check_derivation(bundled(A6_FROM_R1)).kind == "theorem"


@pytest.mark.parametrize("name, line", sorted(CORRUPT.items()))
def test_corrupt_scripts(name, line):
    rep = check_script(read_json("fixtures/%s.json" % name))
    assert not rep.ok and rep.failed_line == line


def test_r1_shape_message():
    rep = check_script(read_json("fixtures/corrupt_r1.json"))
    assert "shape mismatch" in rep.reason


def test_equivalence_bundle():
    out = derived_equivalence_check()
    assert len(out) == 4 and all(r.ok for r in out.values())


def test_restrictions_are_enforced():
    doc = dict(A5_FROM_A1)
    doc = {"logic": "min", "axioms": ["A2"], "rules": ["R1", "MP", "IPL"],
           "lines": [{"formula": f, "by": b} for f, b in A5_FROM_A1["lines"]]}
    rep = check_script(doc)
    assert not rep.ok and rep.failed_line == 3


def test_every_rule_rejects_garbage():
    for rule in ("R1 1", "R2 1", "R3 1", "R4 1", "L12 1", "MP 1 1"):
        rep = check_script([{"formula": "p", "by": "hyp"}, {"formula": "q", "by": rule}])
        assert not rep.ok and rep.failed_line == 2, rule


def test_json_roundtrip():
    for name in FIXTURES:
        d = load(name)
        back = derivation_from_json(derivation_to_json(d))
        assert back.lines == d.lines and back.logic == d.logic


def test_logics():
    assert LOGICS["fc"].spec == "fc" and "Af" in LOGICS["fc"].axioms
    assert "Af" not in LOGICS["min"].axioms
    assert set(RULES) >= {"R1", "R2", "R3", "R4", "MP", "IPL"}


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(FIXTURES + ["A5", "A1"]), st.data())
def test_prefix_monotone(name, data):
    from imlkit.proofsys import A1_FROM_A5_A6
    if name == "A5":
        d = bundled(A5_FROM_A1)
    elif name == "A1":
        d = bundled(A1_FROM_A5_A6)
    else:
        d = load(name)
    k = data.draw(st.integers(1, len(d.lines)))
    prefix = Derivation(d.lines[:k], d.logic, d.axioms, d.rules)
    assert check_derivation(prefix).ok
