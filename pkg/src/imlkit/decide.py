"""Bounded search over finite frames: countermodels, definability, rule preservation.

Frames with k states are enumerated in canonical order: by k, then by the
(le, r) bitmask pair, where a relation is encoded with bit i*k + j for i rel j.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .formula import (Atom, Impl, Or, And, Box, Dia, TOP, as_formula, atoms, length, parse,
                      show)
from .ipl import freeze
from .proofsys import AXIOMS, LOGICS, check_derivation
from .semantics import (Program, evaluate, extension, models_of, search_valuations, upsets,
                        variant_name, witness_state)
from .structures import Frame, FrameClassSpec, Model, parse_spec


# ---------------------------------------------------------------- frame enumeration

def encode(rel, k):
    return sum(1 << (i * k + j) for i, row in enumerate(rel) for j in range(k) if row >> j & 1)


def decode(mask, k):
    row = (1 << k) - 1
    return tuple((mask >> (i * k)) & row for i in range(k))


@lru_cache(maxsize=None)
def preorders(k):
    """Masks of all preorders on k labelled states, ascending."""
    diag = sum(1 << (i * k + i) for i in range(k))
    off = [i * k + j for i in range(k) for j in range(k) if i != j]
    out = []
    for sub in range(1 << len(off)):
        mask = diag
        for b, pos in enumerate(off):
            if sub >> b & 1:
                mask |= 1 << pos
        rel = decode(mask, k)
        if all(rel[j] & ~rel[i] == 0 for i in range(k) for j in range(k) if rel[i] >> j & 1):
            out.append(mask)
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def _perm_tables(k):
    """For each non-identity permutation, byte-chunk lookup tables permuting a relation mask."""
    nbits = k * k
    chunks = (nbits + 7) // 8
    tables = []
    for perm in permutations(range(k)):
        if perm == tuple(range(k)):
            continue
        target = [perm[b // k] * k + perm[b % k] for b in range(nbits)]
        per_chunk = []
        for c in range(chunks):
            t = []
            for v in range(256):
                out = 0
                for b in range(8):
                    pos = 8 * c + b
                    if v >> b & 1 and pos < nbits:
                        out |= 1 << target[pos]
                t.append(out)
            per_chunk.append(t)
        tables.append(per_chunk)
    return tables


def _permute(mask, tables):
    out = 0
    c = 0
    while mask:
        out |= tables[c][mask & 255]
        mask >>= 8
        c += 1
    return out


def is_canonical(k, le_mask, r_mask):
    """Whether (le, r) is the least member of its isomorphism class in canonical order."""
    for tables in _perm_tables(k):
        le2 = _permute(le_mask, tables)
        if le2 < le_mask:
            return False
        if le2 == le_mask and _permute(r_mask, tables) < r_mask:
            return False
    return True


def canonical_form(k, le_mask, r_mask):
    best = (le_mask, r_mask)
    for tables in _perm_tables(k):
        best = min(best, (_permute(le_mask, tables), _permute(r_mask, tables)))
    return best


def _frame(k, le_mask, r_mask):
    # trusted constructor: le is a preorder by construction
    f = object.__new__(Frame)
    object.__setattr__(f, "n", k)
    object.__setattr__(f, "le", decode(le_mask, k))
    object.__setattr__(f, "r", decode(r_mask, k))
    object.__setattr__(f, "names", tuple(chr(ord("a") + i) if k <= 26 else "s%d" % i
                                         for i in range(k)))
    return f


def frame_code(f):
    return (f.n, encode(f.le, f.n), encode(f.r, f.n))


def _frames_for(k, le_mask, spec, dedup):
    for r_mask in range(1 << (k * k)):
        if dedup and not is_canonical(k, le_mask, r_mask):
            continue
        f = _frame(k, le_mask, r_mask)
        if spec.holds(f):
            yield f


def enumerate_frames(n, spec="all", dedup=False, min_states=1):
    """Every frame with min_states ≤ k ≤ n states satisfying spec, in canonical order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    spec = parse_spec(spec)
    for k in range(min_states, n + 1):
        for le_mask in preorders(k):
            yield from _frames_for(k, le_mask, spec, dedup)


def count_frames(n, spec="all", dedup=False):
    return sum(1 for _ in enumerate_frames(n, spec, dedup))


# ---------------------------------------------------------------- countermodel search

@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 4
    dedup_isomorphic: bool = False
    max_frames: int = None
    time_limit: float = None
    threads: int = None  # None: IMLKIT_THREADS or 1

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be at least 1")


@dataclass
class SearchOutcome:
    formula: object
    spec: FrameClassSpec
    model: object = None  # Model of the countermodel, if any
    state: int = None
    frames_examined: int = 0
    complete: bool = False  # budget reaches the finite-frame bound 2^length
    exhausted: bool = True  # every frame up to max_states was examined
    variant: str = "new"

    @property
    def found(self):
        return self.model is not None

    def recheck(self):
        """Witness state refutes the formula and the frame is in the class."""
        if self.model is None:
            return True
        prog = Program([self.formula])
        ext = evaluate(prog, self.model.frame, self.model.val, self.variant)[prog.roots[0]]
        return not ext >> self.state & 1 and self.spec.holds(self.model.frame)

    @property
    def verdict(self):
        if self.found:
            return "countermodel"
        if self.exhausted and self.complete:
            return "valid"
        return "none up to budget"

    def as_dict(self):
        from .io import model_to_json
        doc = {"formula": show(self.formula), "class": str(self.spec),
               "verdict": self.verdict, "frames_examined": self.frames_examined,
               "complete": self.complete, "exhausted": self.exhausted}
        if self.found:
            doc["countermodel"] = model_to_json(self.model)
            doc["state"] = self.model.frame.names[self.state]
        return doc


def _threads(budget):
    if budget.threads is not None:
        return max(1, budget.threads)
    try:
        return max(1, int(os.environ.get("IMLKIT_THREADS", "1")))
    except ValueError:
        return 1


def _scan_block(text, spec_text, variant, k, le_mask, dedup):
    """Worker: first witness among frames sharing (k, le). Returns (count, code, witness)."""
    f = parse(text)
    spec = parse_spec(spec_text)
    count = 0
    for fr in _frames_for(k, le_mask, spec, dedup):
        count += 1
        w = search_valuations(fr, f, (), variant)
        if w is not None:
            return count, (k, le_mask, encode(fr.r, k)), w
    return count, None, None


def countermodel_search(f, spec="all", budget=None, variant="new", progress=None):
    """First (frame, valuation, state) in canonical order with the state refuting f."""
    f = as_formula(f)
    spec = parse_spec(spec)
    budget = budget or SearchBudget()
    variant = variant_name(variant)
    complete = length(f) < 63 and budget.max_states >= 2 ** length(f)
    out = SearchOutcome(f, spec, complete=complete, variant=variant)
    start = time.monotonic()
    blocks = [(k, le) for k in range(1, budget.max_states + 1) for le in preorders(k)]

    def over_budget():
        if budget.max_frames is not None and out.frames_examined >= budget.max_frames:
            return True
        return budget.time_limit is not None and time.monotonic() - start > budget.time_limit

    workers = _threads(budget)
    if workers > 1 and budget.max_frames is None and budget.time_limit is None:
        return _parallel_search(f, spec, budget, variant, out, blocks, workers, progress)

    for k, le_mask in blocks:
        for fr in _frames_for(k, le_mask, spec, budget.dedup_isomorphic):
            if over_budget():
                out.exhausted = False
                return out
            out.frames_examined += 1
            w = search_valuations(fr, f, (), variant)
            if w is not None:
                out.model, out.state = w.model(fr), w.state
                return out
        if progress:
            progress(k, out.frames_examined)
    return out


def _parallel_search(f, spec, budget, variant, out, blocks, workers, progress):
    text, spec_text = show(f), str(spec)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_scan_block, text, spec_text, variant, k, le,
                               budget.dedup_isomorphic) for k, le in blocks]
        # blocks are in canonical order, so the first hit in submission order is the minimum
        for fut in futures:
            count, code, w = fut.result()
            out.frames_examined += count
            if code is not None:
                for other in futures:
                    other.cancel()
                k, le_mask, r_mask = code
                fr = _frame(k, le_mask, r_mask)
                out.model, out.state = w.model(fr), w.state
                return out
            if progress:
                progress(None, out.frames_examined)
    return out


# ---------------------------------------------------------------- definability

@dataclass
class Definability:
    formula: object
    predicate: str
    n: int
    frames: int = 0
    refuted_in_class: list = field(default_factory=list)  # [(frame, Witness)]
    valid_outside: list = field(default_factory=list)  # [frame]

    @property
    def holds(self):
        return not self.refuted_in_class and not self.valid_outside

    def as_dict(self):
        from .io import frame_to_json, model_to_json
        doc = {"formula": show(self.formula), "predicate": self.predicate, "n": self.n,
               "frames": self.frames, "holds": self.holds}
        if self.refuted_in_class:
            fr, w = self.refuted_in_class[0]
            doc["refuted_in_class"] = dict(model_to_json(w.model(fr)),
                                           state=fr.names[w.state])
        if self.valid_outside:
            doc["valid_outside"] = frame_to_json(self.valid_outside[0])
        return doc


def definability_check(f, predicate, n, collect=False, dedup=False, variant="new"):
    """Check "frame in class iff frame validates f" over every frame with ≤ n states.

    Keeps the first witness of each kind in canonical order, or all of them
    with collect=True.
    """
    f = as_formula(f)
    spec = parse_spec(predicate)
    out = Definability(f, str(spec), n)
    for fr in enumerate_frames(n, "all", dedup):
        out.frames += 1
        inside = spec.holds(fr)
        if not collect and (out.refuted_in_class if inside else out.valid_outside):
            continue
        w = search_valuations(fr, f, (), variant)
        if inside and w is not None:
            out.refuted_in_class.append((fr, w))
        elif not inside and w is None:
            out.valid_outside.append(fr)
    return out


# ---------------------------------------------------------------- rule preservation

def _rule_instances(pool):
    pool = [as_formula(x) for x in pool]
    out = []
    for a in pool:
        out.append(("R1", a, [a], Box(a)))
        for b in pool:
            out.append(("R2", a, [Impl(a, b)], Impl(Dia(a), Dia(b))))
            out.append(("R4", a, [Impl(a, b)], Impl(Box(a), Box(b))))
            for c in pool:
                out.append(("R3", a, [Impl(Dia(a), Or(b, Box(Impl(a, c))))],
                            Impl(Dia(a), Or(b, Dia(c)))))
    return out


@dataclass
class RulePreservation:
    n: int
    pool: tuple
    entries: dict  # (rule, A) -> {"instances", "applicable", "violations"}
    frames: int = 0
    first_violation: tuple = None

    @property
    def preserved(self):
        return {rule: all(e["violations"] == 0 for (r, _), e in self.entries.items() if r == rule)
                for rule in ("R1", "R2", "R3", "R4")}

    @property
    def ok(self):
        return all(self.preserved.values())

    def as_dict(self):
        return {"n": self.n, "pool": [show(p) for p in self.pool], "frames": self.frames,
                "preserved": self.preserved,
                "entries": [dict(rule=r, A=show(a), **e) for (r, a), e in self.entries.items()]}


def rule_preservation_check(n, pool=("p", "q", "r"), dedup=True, variant="new"):
    """On every frame with ≤ n states: premise valid ⇒ conclusion valid, for R1-R4.

    One entry per (rule, A) with A from the pool; B and C range over the pool.
    Validity is invariant under isomorphism, so dedup only skips repeats.
    """
    pool = tuple(as_formula(x) for x in pool)
    inst = _rule_instances(pool)
    entries = {}
    for rule in ("R1", "R2", "R3", "R4"):
        for a in pool:
            entries[(rule, a)] = {"instances": 0, "applicable": 0, "violations": 0}
    out = RulePreservation(n, pool, entries)
    for fr in enumerate_frames(n, "all", dedup):
        out.frames += 1
        ups = upsets(fr)
        cache = {}

        def valid(g):
            v = cache.get(g)
            if v is None:
                v = cache[g] = search_valuations(fr, g, (), variant, ups) is None
            return v

        for rule, a, prem, concl in inst:
            e = entries[(rule, a)]
            e["instances"] += 1
            if all(valid(p) for p in prem):
                e["applicable"] += 1
                if not valid(concl):
                    e["violations"] += 1
                    if out.first_violation is None:
                        out.first_violation = (rule, prem, concl, fr)
    return out


# ---------------------------------------------------------------- inclusion probes

@dataclass
class InclusionProbe:
    formula: object
    spec1: str
    spec2: str
    n: int
    valid_side: bool = None  # f valid on all spec2 frames ≤ n (None: not asked)
    valid_side_counter: object = None
    refutation: object = None  # (Model, state) on a spec1 frame
    refutation_source: str = None  # "candidate" or "enumeration"

    @property
    def strict(self):
        return self.refutation is not None and self.valid_side is not False

    def as_dict(self):
        from .io import model_to_json
        doc = {"formula": show(self.formula), "spec1": self.spec1, "spec2": self.spec2,
               "n": self.n, "valid_side": self.valid_side, "refuted": self.refutation is not None,
               "refutation_source": self.refutation_source}
        if self.refutation is not None:
            m, s = self.refutation
            doc["refutation"] = dict(model_to_json(m), state=m.frame.names[s])
        return doc


def logic_inclusion_probe(f, spec1, spec2=None, n=3, candidates=(), dedup=True):
    """Evidence that f separates two classes: valid on every spec2 frame with ≤ n
    states, refuted on some spec1 frame.

    Candidate frames (or models) in spec1 are tried before enumeration, which
    matters when n is too large to enumerate.
    """
    f = as_formula(f)
    s1 = parse_spec(spec1)
    out = InclusionProbe(f, str(s1), None if spec2 is None else str(parse_spec(spec2)), n)
    if spec2 is not None:
        res = countermodel_search(f, spec2, SearchBudget(n, dedup_isomorphic=dedup))
        out.valid_side = not res.found
        if res.found:
            out.valid_side_counter = (res.model, res.state)
    for c in candidates:
        fr = getattr(c, "frame", c)
        if fr.n > n or not s1.holds(fr):
            continue
        if hasattr(c, "frame"):
            prog = Program([f])
            ext = evaluate(prog, fr, c.val)[prog.roots[0]]
            bad = fr.full & ~ext
            if bad:
                out.refutation = (c, witness_state(fr, bad))
                out.refutation_source = "candidate"
                return out
        else:
            w = search_valuations(fr, f)
            if w is not None:
                out.refutation = (w.model(fr), w.state)
                out.refutation_source = "candidate"
                return out
    res = countermodel_search(f, s1, SearchBudget(n, dedup_isomorphic=dedup))
    if res.found:
        out.refutation = (res.model, res.state)
        out.refutation_source = "enumeration"
    return out


# ---------------------------------------------------------------- proof scripts vs frames

_P, _Q, _R = Atom("p"), Atom("q"), Atom("r")
_RULE_SCHEMAS = {
    "R1": ([_P], Box(_P)),
    "R2": ([Impl(_P, _Q)], Impl(Dia(_P), Dia(_Q))),
    "R4": ([Impl(_P, _Q)], Impl(Box(_P), Box(_Q))),
    "R3": ([Impl(Dia(_P), Or(_Q, Box(Impl(_P, _R))))], Impl(Dia(_P), Or(_Q, Dia(_R)))),
    "L12": ([Impl(Dia(_P), Or(Box(_Q), _R))], Impl(Dia(_P), Or(Dia(And(_Q, _P)), _R))),
    "MP": ([_P, Impl(_P, _Q)], _Q),
}


def step_obligation(step, cited):
    """A consequence (premises, goal) whose truth on a frame makes the step sound there.

    Rule steps reduce to their schema over fresh atoms, axioms to the schema
    itself; both cover every instance by substitution. IPL steps become the
    propositional consequence with modal subformulas frozen to atoms.
    """
    if step.rule == "hyp":
        return None
    if step.rule == "axiom":
        return [], AXIOMS[step.axiom]
    if step.rule == "IPL":
        *prem, goal = freeze(list(cited) + [step.formula])
        return prem, goal
    return _RULE_SCHEMAS[step.rule]


@dataclass
class SoundnessReport:
    ok: bool
    logic: str
    n: int
    frames: int = 0
    steps_checked: int = 0
    direct_lines: list = field(default_factory=list)  # lines also checked against hypotheses
    failure: tuple = None  # (line, frame, Witness)

    def as_dict(self):
        doc = {"ok": self.ok, "logic": self.logic, "n": self.n, "frames": self.frames,
               "steps_checked": self.steps_checked, "direct_lines": self.direct_lines}
        if self.failure is not None:
            doc["failed_line"] = self.failure[0]
        return doc


def derivation_soundness(d, n=3, direct_atoms=3, dedup=True, spec=None):
    """Validate every non-hypothesis line on all frames ≤ n of the logic's class.

    Each step's obligation is checked as a consequence over whole models (true
    everywhere ⇒ true everywhere) on every frame; by induction every line then
    holds in every model on such a frame where the hypotheses hold. Lines with
    few enough atoms are additionally checked directly against the hypotheses.
    spec overrides the logic's frame class.
    """
    rep = check_derivation(d)
    if not rep.ok:
        raise ValueError("derivation does not check: line %d: %s" % (rep.failed_line, rep.reason))
    logic = LOGICS[d.logic]
    frames = list(enumerate_frames(n, spec or logic.spec, dedup))
    out = SoundnessReport(True, d.logic, n, len(frames))
    hyps = [s.formula for s in d.lines if s.rule == "hyp"]
    hyp_atoms = set().union(*(atoms(h) for h in hyps)) if hyps else set()
    seen = {}
    for i, step in enumerate(d.lines, 1):
        ob = step_obligation(step, [d.lines[r - 1].formula for r in step.refs])
        if ob is None:
            continue
        out.steps_checked += 1
        prem, goal = ob
        key = (tuple(prem), goal)
        direct = len(hyp_atoms | atoms(step.formula)) <= direct_atoms
        if direct:
            out.direct_lines.append(i)
        if key in seen and not direct:
            continue
        seen[key] = True
        modal = any(isinstance(x, (Box, Dia)) for g in [*prem, goal] for x in _nodes(g))
        for fr in frames:
            if not modal and any(fr.r):
                continue  # R is irrelevant to a propositional obligation
            ups = upsets(fr)
            w = search_valuations(fr, goal, prem, "new", ups)
            if w is None and direct:
                w = search_valuations(fr, step.formula, hyps, "new", ups)
            if w is not None:
                out.ok = False
                out.failure = (i, fr, w)
                return out
    return out


def _nodes(f):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        for attr in ("lhs", "rhs", "arg"):
            c = getattr(g, attr, None)
            if c is not None:
                stack.append(c)


# ---------------------------------------------------------------- bounded equivalence

@dataclass
class Agreement:
    agree: bool
    valuations: int = 0
    classes: int = 0  # largest number of extension classes met
    formula: object = None  # a formula telling the frames apart
    valuation: dict = None


def bounded_agreement(fr1, fr2, depth=3, names=("p", "q"), variant="new"):
    """Do two frames on the same states give every formula of depth ≤ depth the
    same extension under every shared valuation?

    Formulas are grouped by their pair of extensions, and each round combines
    one representative per group, so depth 3 stays cheap.
    """
    if fr1.n != fr2.n:
        raise ValueError("frames must have the same states")
    from .formula import BOT
    variant = variant_name(variant)
    ups2 = set(upsets(fr2))
    out = Agreement(True)
    for m1 in models_of(fr1, names):
        if any(x not in ups2 for x in m1.val.values()):
            continue
        m2 = Model(fr2, dict(m1.val))
        out.valuations += 1
        reps = {}

        def add(g):
            key = (extension(m1, g, variant), extension(m2, g, variant))
            if key not in reps:
                reps[key] = g

        for g in [Atom(x) for x in names] + [BOT, TOP]:
            add(g)
        for _ in range(depth):
            cur = list(reps.values())
            for a in cur:
                add(Box(a))
                add(Dia(a))
                for b in cur:
                    add(Impl(a, b))
                    add(And(a, b))
                    add(Or(a, b))
        out.classes = max(out.classes, len(reps))
        for (x1, x2), g in reps.items():
            if x1 != x2:
                out.agree = False
                out.formula, out.valuation = g, dict(m1.val)
                return out
    return out
