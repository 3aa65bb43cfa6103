"""Every frame and model fixture against its own "expect" block."""

import glob
import os

import pytest

from imlkit.formula import parse
from imlkit.io import frame_from_json, model_from_json, read_json
from imlkit.semantics import heredity_check, sat, true_in_model, valid_in_frame
from imlkit.structures import check_property

HERE = os.path.dirname(__file__)
PATHS = sorted(glob.glob(os.path.join(HERE, "..", "fixtures", "*.json")))
STRUCTURES = [p for p in PATHS if isinstance(read_json(p), dict) and "expect" in read_json(p)]


def ids(paths):
    return [os.path.basename(p)[:-5] for p in paths]


def test_corpus_present():
    assert len(STRUCTURES) >= 17


@pytest.mark.parametrize("path", STRUCTURES, ids=ids(STRUCTURES))
def test_expectations(path):
    doc = read_json(path)
    exp = doc["expect"]
    fr = frame_from_json(doc)
    m = model_from_json(doc) if "val" in doc else None
    for case in exp.get("sat", []):
        got = sat(m, case["state"], parse(case["formula"]), case.get("variant", "new"))
        assert got == case["value"], case
    for text, want in exp.get("valid", {}).items():
        f = parse(text)
        got = true_in_model(m, f) if m is not None else valid_in_frame(fr, f)
        assert got == want, text
    for pred, want in exp.get("props", {}).items():
        assert check_property(fr, pred) == want, pred
    h = exp.get("heredity")
    if h:
        f = parse(h["formula"])
        for variant in ("new", "fischer_servi", "wijesekera"):
            if variant in h:
                assert heredity_check(m, f, variant) == h[variant], variant
