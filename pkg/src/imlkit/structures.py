"""Finite birelational frames and models.

A relation on n states is a tuple of n ints; bit j of row i is set iff i rel j.
"""

import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import NotPreorder, NotUpClosed, UnknownPredicate


# ---------------------------------------------------------------- relation algebra

def bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def identity(n):
    return tuple(1 << i for i in range(n))


def empty(n):
    return (0,) * n


def from_pairs(n, pairs):
    rows = [0] * n
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError("pair (%d, %d) out of range for %d states" % (i, j, n))
        rows[i] |= 1 << j
    return tuple(rows)


def to_pairs(rel):
    return [(i, j) for i, row in enumerate(rel) for j in bits(row)]


def compose(rel1, rel2):
    """s (rel1∘rel2) t iff s rel1 u and u rel2 t for some u."""
    out = []
    for row in rel1:
        acc = 0
        for u in bits(row):
            acc |= rel2[u]
        out.append(acc)
    return tuple(out)


def transpose(rel):
    n = len(rel)
    out = [0] * n
    for i, row in enumerate(rel):
        for j in bits(row):
            out[j] |= 1 << i
    return tuple(out)


def meet(rel1, rel2):
    return tuple(a & b for a, b in zip(rel1, rel2))


def join(rel1, rel2):
    return tuple(a | b for a, b in zip(rel1, rel2))


def included(rel1, rel2):
    return all(a & ~b == 0 for a, b in zip(rel1, rel2))


def is_reflexive(rel):
    return all(row >> i & 1 for i, row in enumerate(rel))


def is_transitive(rel):
    return included(compose(rel, rel), rel)


def rt_closure(rel):
    rows = [row | 1 << i for i, row in enumerate(rel)]
    changed = True
    while changed:
        changed = False
        for i in range(len(rows)):
            acc = rows[i]
            for u in bits(rows[i]):
                acc |= rows[u]
            if acc != rows[i]:
                rows[i] = acc
                changed = True
    return tuple(rows)


def image(rel, x):
    acc = 0
    for u in bits(x):
        acc |= rel[u]
    return acc


# ---------------------------------------------------------------- frames

def default_names(n):
    if n <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:n])
    return tuple("s%d" % i for i in range(n))


@dataclass(frozen=True)
class Frame:
    """States 0..n-1, a preorder `le` and an accessibility relation `r`."""

    n: int
    le: tuple
    r: tuple
    names: tuple = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a frame needs at least one state")
        if len(self.le) != self.n or len(self.r) != self.n:
            raise ValueError("relation size does not match state count")
        if not (is_reflexive(self.le) and is_transitive(self.le)):
            raise NotPreorder("le is not reflexive and transitive")
        if self.names is None:
            object.__setattr__(self, "names", default_names(self.n))
        elif len(self.names) != self.n or len(set(self.names)) != self.n:
            raise ValueError("state names must be distinct, one per state")

    @property
    def full(self):
        return (1 << self.n) - 1

    @cached_property
    def ge(self):
        return transpose(self.le)

    @cached_property
    def le_r(self):
        return compose(self.le, self.r)

    @cached_property
    def ge_r(self):
        return compose(self.ge, self.r)

    @cached_property
    def r_le(self):
        return compose(self.r, self.le)

    @cached_property
    def r_ge(self):
        return compose(self.r, self.ge)

    @cached_property
    def le_r_le(self):
        return compose(self.le_r, self.le)

    @cached_property
    def ge_r_ge(self):
        return compose(self.ge_r, self.ge)

    @cached_property
    def quasi(self):
        """(≤∘R∘≤) ∩ (≥∘R∘≥)."""
        return meet(self.le_r_le, self.ge_r_ge)

    def index(self, name):
        if isinstance(name, int):
            return name
        return self.names.index(name)

    def with_r(self, r):
        return Frame(self.n, self.le, tuple(r), self.names)

    def key(self):
        return (self.n, self.le, self.r)


def build_frame(n, le_gen=(), r=(), close=True, names=None):
    le = from_pairs(n, le_gen)
    if close:
        le = rt_closure(le)
    elif not (is_reflexive(le) and is_transitive(le)):
        raise NotPreorder("le is not a preorder; pass close=True to take its closure")
    return Frame(n, le, from_pairs(n, r), tuple(names) if names else None)


def is_le_closed(f, x):
    """Upward closure of the state set x (a bitmask or an iterable of states)."""
    x = _mask(x)
    return image(f.le, x) == x


def up_closure(f, x):
    return image(f.le, _mask(x))


def _mask(x):
    if isinstance(x, int):
        return x
    m = 0
    for s in x:
        m |= 1 << s
    return m


def mask_states(x):
    return list(bits(x))


# ---------------------------------------------------------------- models

@dataclass(frozen=True, eq=True)
class Model:
    """A frame plus a ≤-closed valuation atom -> bitmask. Missing atoms are empty."""

    frame: Frame
    val: dict = field(default_factory=dict)

    __hash__ = None

    def __post_init__(self):
        val = {p: _mask(x) for p, x in self.val.items()}
        for p, x in val.items():
            if x >> self.frame.n:
                raise ValueError("valuation of %s mentions unknown states" % p)
            if not is_le_closed(self.frame, x):
                raise NotUpClosed("V(%s) is not upward closed" % p)
        object.__setattr__(self, "val", val)

    def v(self, p):
        return self.val.get(p, 0)

    @property
    def n(self):
        return self.frame.n


# ---------------------------------------------------------------- frame conditions

def _fc(f):
    return included(f.ge_r, f.r_ge)


def _bc(f):
    return included(f.r_le, f.le_r)


def _dc(f):
    return included(f.le_r, f.r_le)


def _uc(f):
    return included(f.r_ge, f.ge_r)


def _qfc(f):
    return included(f.ge_r, compose(f.quasi, f.ge))


def _qbc(f):
    return included(f.r_le, compose(f.le, f.quasi))


def _qdc(f):
    return included(f.le_r, compose(f.quasi, f.le))


def _quc(f):
    return included(f.r_ge, compose(f.ge, f.quasi))


def _ref(f):
    return is_reflexive(f.r)


def _sym(f):
    return included(f.r, transpose(f.r))


def _tra(f):
    return is_transitive(f.r)


def _par(f):
    return _ref(f) and _sym(f) and _tra(f)


def _uref(f):
    return is_reflexive(f.le_r_le)


def _dref(f):
    return is_reflexive(f.ge_r_ge)


def _usym(f):
    return included(f.r, transpose(f.le_r_le))


def _dsym(f):
    return included(f.r, transpose(f.ge_r_ge))


def _utra(f):
    return included(compose(compose(f.r, f.le), f.r), f.le_r_le)


def _dtra(f):
    return included(compose(compose(f.r, f.ge), f.r), f.ge_r_ge)


PREDICATES = {
    "all": lambda f: True,
    "fc": _fc, "bc": _bc, "dc": _dc, "uc": _uc,
    "qfc": _qfc, "qbc": _qbc, "qdc": _qdc, "quc": _quc,
    "ref": _ref, "sym": _sym, "tra": _tra, "par": _par,
    "uref": _uref, "dref": _dref, "usym": _usym, "dsym": _dsym,
    "utra": _utra, "dtra": _dtra,
}


def check_property(f, name):
    try:
        pred = PREDICATES[name]
    except KeyError:
        raise UnknownPredicate("unknown frame predicate %r" % name) from None
    return pred(f)


def all_properties(f):
    return {name: pred(f) for name, pred in PREDICATES.items()}


IMPLICATIONS = [
    ("fc", "qfc"), ("bc", "qbc"), ("dc", "qdc"), ("uc", "quc"),
    ("ref", "uref"), ("ref", "dref"), ("sym", "usym"), ("sym", "dsym"),
]


def implied_properties_check(f):
    """Maps 'x=>y' to whether the implication holds on f."""
    return {"%s=>%s" % (a, b): (not check_property(f, a)) or check_property(f, b)
            for a, b in IMPLICATIONS}


@dataclass(frozen=True)
class FrameClassSpec:
    """Conjunction of frame predicates."""

    preds: tuple = ("all",)

    def __post_init__(self):
        if not self.preds:
            raise ValueError("empty frame class spec")
        for p in self.preds:
            if p not in PREDICATES:
                raise UnknownPredicate("unknown frame predicate %r" % p)

    def holds(self, f):
        return all(PREDICATES[p](f) for p in self.preds)

    def __str__(self):
        return "+".join(self.preds)


_CONFLUENCE = re.compile(r"^[fbdu]{2,4}c$")


def parse_spec(text):
    """'fc', 'ref+tra', 'uref,dref' or the compound confluence names ('fbdc' = fc∧bc∧dc)."""
    if isinstance(text, FrameClassSpec):
        return text
    preds = []
    for part in re.split(r"[+,&\s]+", text.strip()):
        if not part:
            continue
        if part.startswith("C_"):
            part = part[2:]
        if part in PREDICATES:
            preds.append(part)
        elif _CONFLUENCE.match(part) and len(set(part[:-1])) == len(part) - 1:
            preds.extend(c + "c" for c in part[:-1])
        else:
            raise UnknownPredicate("unknown frame predicate %r" % part)
    if len(preds) > 1:
        preds = [p for p in preds if p != "all"] or ["all"]
    return FrameClassSpec(tuple(dict.fromkeys(preds)))


# ---------------------------------------------------------------- subframes

def generated_states(f, s):
    """Least state set containing s closed under ≤, ≥ and R successors (bitmask)."""
    seen = 1 << s
    todo = [s]
    while todo:
        u = todo.pop()
        nxt = (f.le[u] | f.ge[u] | f.r[u]) & ~seen
        seen |= nxt
        todo.extend(bits(nxt))
    return seen


def restrict(f, states):
    """Subframe on the given states (sorted ids); returns (frame, old ids)."""
    old = sorted(states)
    pos = {s: i for i, s in enumerate(old)}

    def sub(rel):
        rows = []
        for s in old:
            rows.append(sum(1 << pos[t] for t in bits(rel[s]) if t in pos))
        return tuple(rows)

    names = tuple(f.names[s] for s in old)
    return Frame(len(old), sub(f.le), sub(f.r), names), tuple(old)


def generated_subframe(f, s):
    """The generated subframe containing s, with the new->old state map."""
    return restrict(f, list(bits(generated_states(f, f.index(s)))))


def restrict_model(m, states):
    fr, old = restrict(m.frame, states)
    val = {}
    for p, x in m.val.items():
        val[p] = sum(1 << i for i, s in enumerate(old) if x >> s & 1)
    return Model(fr, val), old


def generated_submodel(m, s):
    return restrict_model(m, list(bits(generated_states(m.frame, m.frame.index(s)))))


def disjoint_union(f1, f2):
    n1 = f1.n
    le = f1.le + tuple(row << n1 for row in f2.le)
    r = f1.r + tuple(row << n1 for row in f2.r)
    return Frame(n1 + f2.n, le, r)
