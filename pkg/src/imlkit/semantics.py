"""Satisfaction, truth and validity on finite models.

Extensions are bitmasks over states. Every query compiles its formulas into a
post-order op list once and then evaluates all subformulas together.
"""

from dataclasses import dataclass

from .formula import Atom, Top, Bot, Impl, Or, And, Box, Dia, as_formula, atoms, children
from .structures import Model, bits

VARIANTS = ("new", "fischer_servi", "wijesekera")
_ALIASES = {"fs": "fischer_servi", "wij": "wijesekera", "w": "wijesekera"}


def variant_name(v):
    v = _ALIASES.get(v, v)
    if v not in VARIANTS:
        raise ValueError("unknown semantics variant %r" % v)
    return v


_ATOM, _TOP, _BOT, _IMPL, _OR, _AND, _BOX, _DIA = range(8)
_CODES = {Atom: _ATOM, Top: _TOP, Bot: _BOT, Impl: _IMPL, Or: _OR, And: _AND, Box: _BOX, Dia: _DIA}


class Program:
    """Subformulas of some root formulas in post-order."""

    def __init__(self, roots):
        self.index = {}
        self.ops = []
        self.nodes = []
        self.roots = [self._add(as_formula(r)) for r in roots]

    def _add(self, f):
        i = self.index.get(f)
        if i is not None:
            return i
        args = tuple(self._add(c) for c in children(f))
        i = len(self.ops)
        self.index[f] = i
        self.nodes.append(f)
        self.ops.append((_CODES[type(f)], f.name if isinstance(f, Atom) else args))
        return i

    @property
    def atom_names(self):
        return sorted({a for op, a in self.ops if op == _ATOM})


def _succ_rows(frame, variant):
    if variant == "new":
        return frame.ge_r
    return frame.r


def evaluate(prog, frame, val, variant="new"):
    """Extension masks of every node of prog; val maps atom -> mask."""
    n = frame.n
    full = (1 << n) - 1
    le, box_rows = frame.le, frame.le_r
    dia_rows = _succ_rows(frame, variant)
    wij = variant == "wijesekera"
    out = []
    for op, a in prog.ops:
        if op == _ATOM:
            x = val.get(a, 0)
        elif op == _AND:
            x = out[a[0]] & out[a[1]]
        elif op == _OR:
            x = out[a[0]] | out[a[1]]
        elif op == _IMPL:
            bad = out[a[0]] & ~out[a[1]]
            x = 0
            for s in range(n):
                if not le[s] & bad:
                    x |= 1 << s
        elif op == _BOX:
            bad = full & ~out[a[0]]
            x = 0
            for s in range(n):
                if not box_rows[s] & bad:
                    x |= 1 << s
        elif op == _DIA:
            y = out[a[0]]
            x = 0
            for s in range(n):
                if dia_rows[s] & y:
                    x |= 1 << s
            if wij:
                bad = full & ~x
                x = 0
                for s in range(n):
                    if not le[s] & bad:
                        x |= 1 << s
        elif op == _TOP:
            x = full
        else:
            x = 0
        out.append(x)
    return out


def evaluate3(prog, frame, tval, fval, variant="new"):
    """Three-valued extensions: pairs (definitely true, definitely false).

    Atoms missing from tval/fval are unknown everywhere. Sound for any
    completion of the partial valuation.
    """
    n = frame.n
    full = (1 << n) - 1
    le, box_rows = frame.le, frame.le_r
    dia_rows = _succ_rows(frame, variant)
    wij = variant == "wijesekera"
    ts, fs = [], []
    for op, a in prog.ops:
        if op == _ATOM:
            t, f = tval.get(a, 0), fval.get(a, 0)
        elif op == _AND:
            t = ts[a[0]] & ts[a[1]]
            f = fs[a[0]] | fs[a[1]]
        elif op == _OR:
            t = ts[a[0]] | ts[a[1]]
            f = fs[a[0]] & fs[a[1]]
        elif op == _IMPL:
            ok = fs[a[0]] | ts[a[1]]
            bad = ts[a[0]] & fs[a[1]]
            t = f = 0
            for s in range(n):
                if le[s] & ~ok & full == 0:
                    t |= 1 << s
                elif le[s] & bad:
                    f |= 1 << s
        elif op == _BOX:
            ta, fa = ts[a[0]], fs[a[0]]
            t = f = 0
            for s in range(n):
                if box_rows[s] & ~ta & full == 0:
                    t |= 1 << s
                elif box_rows[s] & fa:
                    f |= 1 << s
        elif op == _DIA:
            ta, fa = ts[a[0]], fs[a[0]]
            t = f = 0
            for s in range(n):
                if dia_rows[s] & ta:
                    t |= 1 << s
                elif dia_rows[s] & ~fa & full == 0:
                    f |= 1 << s
            if wij:
                t2 = f2 = 0
                for s in range(n):
                    if le[s] & ~t & full == 0:
                        t2 |= 1 << s
                    elif le[s] & f:
                        f2 |= 1 << s
                t, f = t2, f2
        elif op == _TOP:
            t, f = full, 0
        else:
            t, f = 0, full
        ts.append(t)
        fs.append(f)
    return ts, fs


# ---------------------------------------------------------------- model queries

def extensions(m, f, variant="new"):
    """Map every subformula of f to the set of states (bitmask) satisfying it."""
    prog = Program([f])
    masks = evaluate(prog, m.frame, m.val, variant_name(variant))
    return dict(zip(prog.nodes, masks))


def extension(m, f, variant="new"):
    prog = Program([f])
    return evaluate(prog, m.frame, m.val, variant_name(variant))[prog.roots[0]]


def sat(m, s, f, variant="new"):
    s = m.frame.index(s)
    return bool(extension(m, f, variant) >> s & 1)


def true_in_model(m, f, variant="new"):
    return extension(m, f, variant) == m.frame.full


def heredity_check(m, f, variant="new"):
    """Every subformula's extension is upward closed."""
    le = m.frame.le
    for x in extensions(m, f, variant).values():
        for s in bits(x):
            if le[s] & ~x:
                return False
    return True


# ---------------------------------------------------------------- validity

def upsets(frame):
    """All ≤-closed state sets as ascending bitmasks."""
    le = frame.le
    out = []
    for x in range(1 << frame.n):
        if all(le[s] & ~x == 0 for s in bits(x)):
            out.append(x)
    return out


@dataclass(frozen=True)
class Witness:
    """A valuation (atom -> bitmask) and a state where the goal fails."""

    val: tuple
    state: int

    def valuation(self):
        return dict(self.val)

    def model(self, frame):
        return Model(frame, dict(self.val))


def witness_state(frame, bad):
    """Lowest failing state with no failing state strictly above it.

    By heredity a failure propagates downward, so this is where it originates.
    """
    ge = frame.ge
    for s in bits(bad):
        if frame.le[s] & bad & ~ge[s] == 0:
            return s
    raise ValueError("no failing state")


def _repeat(pattern, width, times):
    """pattern (width bits) repeated `times` times."""
    if times == 1:
        return pattern
    return pattern * (((1 << (width * times)) - 1) // ((1 << width) - 1))


def _atom_blocks(frame, ups, k, m):
    """Per-state bit-vectors of atom k (of m) over all valuation indices.

    Valuation index i encodes the up-set choices in base len(ups), first atom
    most significant, so lower indices come first in canonical order.
    """
    u = len(ups)
    stride = u ** (m - 1 - k)
    period = stride * u
    ones = (1 << stride) - 1
    blocks = []
    for s in range(frame.n):
        pat = 0
        for j, x in enumerate(ups):
            if x >> s & 1:
                pat |= ones << (j * stride)
        blocks.append(_repeat(pat, period, u ** k))
    return blocks


def evaluate_all(prog, frame, names, ups, variant="new"):
    """Extensions for every valuation at once: node -> list of per-state bit-vectors."""
    n = frame.n
    m = len(names)
    total = len(ups) ** m
    allv = (1 << total) - 1
    atom_blocks = {p: _atom_blocks(frame, ups, k, m) for k, p in enumerate(names)}
    le, box_rows = frame.le, frame.le_r
    dia_rows = _succ_rows(frame, variant)
    wij = variant == "wijesekera"
    out = []
    for op, a in prog.ops:
        if op == _ATOM:
            x = atom_blocks[a]
        elif op == _AND:
            x = [p & q for p, q in zip(out[a[0]], out[a[1]])]
        elif op == _OR:
            x = [p | q for p, q in zip(out[a[0]], out[a[1]])]
        elif op == _IMPL:
            bad = [p & ~q for p, q in zip(out[a[0]], out[a[1]])]
            x = []
            for s in range(n):
                acc = 0
                for t in bits(le[s]):
                    acc |= bad[t]
                x.append(allv & ~acc)
        elif op == _BOX:
            y = out[a[0]]
            x = []
            for s in range(n):
                acc = allv
                for t in bits(box_rows[s]):
                    acc &= y[t]
                x.append(acc)
        elif op == _DIA:
            y = out[a[0]]
            x = []
            for s in range(n):
                acc = 0
                for t in bits(dia_rows[s]):
                    acc |= y[t]
                x.append(acc)
            if wij:
                z = x
                x = []
                for s in range(n):
                    acc = allv
                    for t in bits(le[s]):
                        acc &= z[t]
                    x.append(acc)
        elif op == _TOP:
            x = [allv] * n
        else:
            x = [0] * n
        out.append(x)
    return out, allv


# bit-vectors above this many valuations fall back to depth-first search
VECTOR_LIMIT = 1 << 20


def search_valuations(frame, goal, premises=(), variant="new", ups=None):
    """First valuation (canonical order) making every premise true throughout the
    model and goal false somewhere.

    Canonical order is lexicographic over the tuple of up-set masks of the
    atoms sorted by name; the state is chosen by witness_state. Returns a
    Witness or None.
    """
    variant = variant_name(variant)
    prog = Program([goal, *premises])
    names = prog.atom_names
    if ups is None:
        ups = upsets(frame)
    if len(ups) ** len(names) <= VECTOR_LIMIT:
        return _vector_search(prog, frame, names, ups, variant)
    return _dfs_search(prog, frame, names, ups, variant)


def _vector_search(prog, frame, names, ups, variant):
    out, allv = evaluate_all(prog, frame, names, ups, variant)
    g, prem = prog.roots[0], prog.roots[1:]
    good = allv
    for i in prem:
        for block in out[i]:
            good &= block
    bad = 0
    for block in out[g]:
        bad |= allv & ~block
    hit = good & bad
    if not hit:
        return None
    idx = (hit & -hit).bit_length() - 1
    state = witness_state(frame, sum(1 << s for s in range(frame.n) if not out[g][s] >> idx & 1))
    u, m = len(ups), len(names)
    val = []
    for k, p in enumerate(names):
        j = idx // u ** (m - 1 - k) % u
        val.append((p, ups[j]))
    return Witness(tuple(val), state)


def _dfs_search(prog, frame, names, ups, variant):
    g, prem = prog.roots[0], prog.roots[1:]
    full = frame.full
    n_atoms = len(names)
    tval, fval = {}, {}

    def leaf():
        masks = evaluate(prog, frame, tval, variant)
        if any(masks[i] != full for i in prem):
            return None
        bad = full & ~masks[g]
        if bad:
            return Witness(tuple((p, tval[p]) for p in names), witness_state(frame, bad))
        return None

    def dead():
        ts, fs = evaluate3(prog, frame, tval, fval, variant)
        if ts[g] == full:
            return True
        return any(fs[i] for i in prem)

    def go(k):
        if k == n_atoms:
            return leaf()
        p = names[k]
        for x in ups:
            tval[p] = x
            fval[p] = full & ~x
            if k + 1 < n_atoms and dead():
                continue
            w = go(k + 1)
            if w is not None:
                return w
        del tval[p], fval[p]
        return None

    if n_atoms and dead():
        return None
    return go(0)


def countervaluation(fr, f, variant="new"):
    """First (valuation, state) in canonical order refuting f on fr, or None."""
    return search_valuations(fr, as_formula(f), (), variant)


def valid_in_frame(fr, f, variant="new"):
    return countervaluation(fr, f, variant) is None


def models_of(frame, names):
    """Every model on frame over the given atoms, in canonical order."""
    ups = upsets(frame)
    names = sorted(names)

    def go(k, val):
        if k == len(names):
            yield Model(frame, dict(val))
            return
        for x in ups:
            val[names[k]] = x
            yield from go(k + 1, val)
        val.pop(names[k], None)

    yield from go(0, {})


def atoms_of(fs):
    out = set()
    for f in fs:
        out |= atoms(f)
    return out
