"""Hilbert-style proof scripts: axiom schemas, rules and a line-by-line checker."""

import re
from dataclasses import dataclass, field

from .errors import ScriptError, UnknownSchema
from .formula import (Atom, Impl, Or, And, Box, Dia, as_formula, children, parse, show,
                      substitute)
from .ipl import ipl_prove

SCHEMAS = {
    "A1": "[](p -> q) -> []p -> []q",
    "A2": "[](p | q) -> (<>p -> []q) -> []q",
    "A3": "<>(p | q) -> <>p | <>q",
    "A4": "~<>F",
    "A5": "[]p & []q -> [](p & q)",
    "A6": "[]T",
    "Af": "<>(p -> q) -> []p -> <>q",
    "Ab": "(<>p -> []q) -> [](p -> q)",
    "Ad": "[](p | q) -> <>p | []q",
    "Auref": "[]p -> p",
    "Adref": "p -> <>p",
    "Ausym": "<>[]p -> p",
    "Adsym": "p -> []<>p",
    "Autra": "[]p -> [][]p",
    "Adtra": "<><>p -> <>p",
    # a Hilbert basis for intuitionistic propositional logic (with MP)
    "I1": "p -> q -> p",
    "I2": "(p -> q -> r) -> (p -> q) -> p -> r",
    "I3": "p & q -> p",
    "I4": "p & q -> q",
    "I5": "p -> q -> p & q",
    "I6": "p -> p | q",
    "I7": "q -> p | q",
    "I8": "(p -> r) -> (q -> r) -> p | q -> r",
    "I9": "F -> p",
    "I10": "T",
}
AXIOMS = {name: parse(text) for name, text in SCHEMAS.items()}
IPL_SCHEMAS = tuple("I%d" % i for i in range(1, 11))
MIN_AXIOMS = ("A1", "A2", "A3", "A4", "A5", "A6")

RULES = ("hyp", "axiom", "R1", "R2", "R3", "R4", "L12", "MP", "IPL")


@dataclass(frozen=True)
class Logic:
    name: str
    axioms: frozenset
    spec: str


def _logic(name, extra, spec):
    return Logic(name, frozenset(MIN_AXIOMS + IPL_SCHEMAS + tuple(extra)), spec)


LOGICS = {
    "min": _logic("min", (), "all"),
    "fc": _logic("fc", ("Af",), "fc"),
    "bc": _logic("bc", ("Ab",), "bc"),
    "dc": _logic("dc", ("Ad",), "dc"),
    "fbc": _logic("fbc", ("Af", "Ab"), "fc+bc"),
    "fdc": _logic("fdc", ("Af", "Ad"), "fc+dc"),
    "bdc": _logic("bdc", ("Ab", "Ad"), "bc+dc"),
    "fbdc": _logic("fbdc", ("Af", "Ab", "Ad"), "fc+bc+dc"),
    "ref": _logic("ref", ("Auref", "Adref"), "ref"),
    "sym": _logic("sym", ("Ausym", "Adsym"), "sym"),
    "uref": _logic("uref", ("Auref",), "uref"),
    "dref": _logic("dref", ("Adref",), "dref"),
    "usym": _logic("usym", ("Ausym",), "usym"),
    "dsym": _logic("dsym", ("Adsym",), "dsym"),
    "utra": _logic("utra", ("Autra",), "utra"),
    "dtra": _logic("dtra", ("Adtra",), "dtra"),
}


def instantiate_schema(name, sigma=None):
    try:
        schema = AXIOMS[name]
    except KeyError:
        raise UnknownSchema("unknown axiom schema %r" % name) from None
    sigma = {k: as_formula(v) for k, v in (sigma or {}).items()}
    return substitute(schema, sigma)


def match(pattern, f, binding=None):
    """First-order match of a schema against f; atoms of the pattern are variables."""
    binding = dict(binding or {})
    stack = [(pattern, f)]
    while stack:
        p, g = stack.pop()
        if isinstance(p, Atom):
            seen = binding.get(p.name)
            if seen is None:
                binding[p.name] = g
            elif seen != g:
                return None
            continue
        if type(p) is not type(g):
            return None
        stack.extend(zip(children(p), children(g)))
    return binding


# ---------------------------------------------------------------- scripts

@dataclass(frozen=True)
class Step:
    formula: object
    rule: str
    refs: tuple = ()
    axiom: str = None
    sigma: tuple = None  # ((atom, Formula), ...) or None when the axiom is matched

    def describe(self):
        if self.rule == "axiom":
            s = "axiom:" + self.axiom
            if self.sigma is not None:
                s += " {" + ", ".join("%s: %s" % (k, show(v)) for k, v in self.sigma) + "}"
            return s
        if self.rule == "hyp":
            return "hyp"
        if self.rule == "MP":
            return "MP " + " ".join(map(str, self.refs))
        return (self.rule + " " + ",".join(map(str, self.refs))).strip()


@dataclass
class Derivation:
    lines: list
    logic: str = "min"
    axioms: frozenset = None  # restricts the logic's axioms when given
    rules: frozenset = None  # restricts the usable rules when given

    def allowed_axioms(self):
        base = LOGICS[self.logic].axioms
        return base if self.axioms is None else base & self.axioms

    def allowed_rules(self):
        base = frozenset(RULES)
        return base if self.rules is None else (self.rules | {"hyp", "axiom"}) & base


_REF = re.compile(r"\d+")


def _split_top(text):
    # split a substitution body on commas (formulas never contain commas)
    return [part for part in text.split(",") if part.strip()]


def parse_sigma(text):
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ScriptError("substitution must be written {p: A, q: B}")
    out = []
    for part in _split_top(text[1:-1]):
        if ":" not in part:
            raise ScriptError("bad substitution entry %r" % part.strip())
        k, v = part.split(":", 1)
        out.append((k.strip(), parse(v)))
    return tuple(out)


def parse_by(text):
    """Parse a justification string into (rule, refs, axiom, sigma)."""
    text = text.strip()
    low = text.lower()
    if low in ("hyp", "hypothesis"):
        return "hyp", (), None, None
    if low.startswith("axiom"):
        rest = text[5:].lstrip(": ").strip()
        m = re.match(r"([A-Za-z0-9]+)\s*(.*)$", rest)
        if not m:
            raise ScriptError("axiom justification needs a schema name")
        name, body = m.group(1), m.group(2).strip()
        return "axiom", (), name, (parse_sigma(body) if body else None)
    m = re.match(r"(R[1-4]|L12|MP|IPL)\b(.*)$", text)
    if not m:
        raise ScriptError("unknown justification %r" % text)
    rule, rest = m.group(1), m.group(2)
    if re.search(r"[^\d,\s]", rest):
        raise ScriptError("bad line references in %r" % text)
    refs = tuple(int(x) for x in _REF.findall(rest))
    return rule, refs, None, None


def step_from_json(item):
    if not isinstance(item, dict) or "formula" not in item or "by" not in item:
        raise ScriptError("each line needs 'formula' and 'by'")
    rule, refs, axiom, sigma = parse_by(item["by"])
    return Step(parse(item["formula"]), rule, refs, axiom, sigma)


def derivation_from_json(doc):
    """Either a bare list of lines or {"logic", "axioms", "rules", "lines"}."""
    if isinstance(doc, list):
        doc = {"lines": doc}
    if not isinstance(doc, dict) or not isinstance(doc.get("lines"), list):
        raise ScriptError("a proof script is a list of lines or an object with 'lines'")
    logic = doc.get("logic", "min")
    if logic not in LOGICS:
        raise ScriptError("unknown logic %r" % logic)
    axioms = doc.get("axioms")
    rules = doc.get("rules")
    return Derivation(
        [step_from_json(x) for x in doc["lines"]],
        logic,
        None if axioms is None else frozenset(axioms),
        None if rules is None else frozenset(rules),
    )


def derivation_to_json(d):
    doc = {"logic": d.logic}
    if d.axioms is not None:
        doc["axioms"] = sorted(d.axioms)
    if d.rules is not None:
        doc["rules"] = sorted(d.rules)
    doc["lines"] = [{"formula": show(s.formula), "by": s.describe()} for s in d.lines]
    return doc


# ---------------------------------------------------------------- checking

@dataclass
class Report:
    ok: bool
    failed_line: int = None
    reason: str = None
    hypotheses: list = field(default_factory=list)
    checked: int = 0

    @property
    def kind(self):
        return "derivation from hypotheses" if self.hypotheses else "theorem"

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "failed_line": self.failed_line, "reason": self.reason,
                "hypotheses": self.hypotheses, "kind": self.kind, "checked": self.checked}


class _Fail(Exception):
    pass


def _expect(cond, msg):
    if not cond:
        raise _Fail(msg)


def _check_step(i, step, lines, axioms, rules):
    f = step.formula
    _expect(step.rule in rules, "rule %s is not available here" % step.rule)
    for r in step.refs:
        _expect(1 <= r < i, "line reference %d out of range" % r)
    cited = [lines[r - 1].formula for r in step.refs]

    if step.rule == "hyp":
        return
    if step.rule == "axiom":
        _expect(step.axiom in AXIOMS, "unknown axiom schema %s" % step.axiom)
        _expect(step.axiom in axioms, "axiom %s is not available here" % step.axiom)
        if step.sigma is not None:
            _expect(instantiate_schema(step.axiom, dict(step.sigma)) == f,
                    "formula is not the stated instance of %s" % step.axiom)
        else:
            _expect(match(AXIOMS[step.axiom], f) is not None,
                    "formula is not an instance of %s" % step.axiom)
        return
    if step.rule == "IPL":
        _expect(ipl_prove(cited, f), "not an intuitionistic consequence of the cited lines")
        return
    if step.rule == "MP":
        _expect(len(cited) == 2, "MP cites exactly two lines")
        a, b = cited
        _expect(b == Impl(a, f) or a == Impl(b, f), "shape mismatch for MP")
        return

    _expect(len(cited) == 1, "%s cites exactly one line" % step.rule)
    (c,) = cited
    if step.rule == "R1":
        _expect(f == Box(c), "shape mismatch for R1")
    elif step.rule in ("R2", "R4"):
        _expect(isinstance(c, Impl), "shape mismatch for %s: cited line is not an implication"
                % step.rule)
        op = Dia if step.rule == "R2" else Box
        _expect(f == Impl(op(c.lhs), op(c.rhs)), "shape mismatch for %s" % step.rule)
    elif step.rule == "R3":
        # ◊A → B ∨ □(A → C)  /  ◊A → B ∨ ◊C
        ok = (isinstance(c, Impl) and isinstance(c.lhs, Dia) and isinstance(c.rhs, Or)
              and isinstance(c.rhs.rhs, Box) and isinstance(c.rhs.rhs.arg, Impl)
              and c.rhs.rhs.arg.lhs == c.lhs.arg)
        _expect(ok, "shape mismatch for R3: cited line is not of the form <>A -> B | [](A -> C)")
        a, b, cc = c.lhs.arg, c.rhs.lhs, c.rhs.rhs.arg.rhs
        _expect(f == Impl(Dia(a), Or(b, Dia(cc))), "shape mismatch for R3")
    elif step.rule == "L12":
        # ◊A → □B ∨ C  /  ◊A → ◊(B ∧ A) ∨ C
        ok = (isinstance(c, Impl) and isinstance(c.lhs, Dia) and isinstance(c.rhs, Or)
              and isinstance(c.rhs.lhs, Box))
        _expect(ok, "shape mismatch for L12: cited line is not of the form <>A -> []B | C")
        a, b, cc = c.lhs.arg, c.rhs.lhs.arg, c.rhs.rhs
        _expect(f == Impl(Dia(a), Or(Dia(And(b, a)), cc)), "shape mismatch for L12")
    else:
        raise _Fail("unknown rule %s" % step.rule)


def check_derivation(d):
    """Check every line; stop at the first failure (1-based line number)."""
    axioms = d.allowed_axioms()
    rules = d.allowed_rules()
    hyps = []
    for i, step in enumerate(d.lines, 1):
        try:
            _check_step(i, step, d.lines, axioms, rules)
        except _Fail as e:
            return Report(False, i, str(e), hyps, i - 1)
        if step.rule == "hyp":
            hyps.append(i)
    return Report(True, None, None, hyps, len(d.lines))


def check_script(doc):
    return check_derivation(derivation_from_json(doc))


# ---------------------------------------------------------------- bundled equivalence scripts

def _script(lines, **kw):
    return derivation_from_json(dict(kw, lines=[{"formula": f, "by": b} for f, b in lines]))


A5_FROM_A1 = dict(logic="min", axioms=["A1"], rules=["R1", "MP", "IPL"], lines=[
    ("p -> q -> p & q", "IPL"),
    ("[](p -> q -> p & q)", "R1 1"),
    ("[](p -> q -> p & q) -> []p -> [](q -> p & q)", "axiom:A1 {p: p, q: q -> p & q}"),
    ("[]p -> [](q -> p & q)", "MP 2 3"),
    ("[](q -> p & q) -> []q -> [](p & q)", "axiom:A1 {p: q, q: p & q}"),
    ("[]p & []q -> [](p & q)", "IPL 4,5"),
])

A6_FROM_R1 = dict(logic="min", axioms=[], rules=["R1", "IPL"], lines=[
    ("T", "IPL"),
    ("[]T", "R1 1"),
])

A1_FROM_A5_A6 = dict(logic="min", axioms=["A5", "A6"], rules=["R4", "MP", "IPL"], lines=[
    ("(p -> q) & p -> q", "IPL"),
    ("[]((p -> q) & p) -> []q", "R4 1"),
    ("[](p -> q) & []p -> []((p -> q) & p)", "axiom:A5 {p: p -> q, q: p}"),
    ("[](p -> q) -> []p -> []q", "IPL 2,3"),
])

R1_FROM_A6_R4 = dict(logic="min", axioms=["A6"], rules=["R4", "MP", "IPL"], lines=[
    ("p", "hyp"),
    ("T -> p", "IPL 1"),
    ("[]T -> []p", "R4 2"),
    ("[]T", "axiom:A6"),
    ("[]p", "MP 3 4"),
])


def derived_equivalence_check():
    """Both directions of swapping A1+R1 for A5+A6+R4."""
    out = {}
    for name, spec in [("A5 from A1,R1", A5_FROM_A1), ("A6 from R1", A6_FROM_R1),
                       ("A1 from A5,A6,R4", A1_FROM_A5_A6), ("R1 from A6,R4", R1_FROM_A6_R4)]:
        out[name] = check_derivation(_script(spec["lines"], **{k: v for k, v in spec.items()
                                                               if k != "lines"}))
    return out


def bundled(spec):
    return _script(spec["lines"], **{k: v for k, v in spec.items() if k != "lines"})
