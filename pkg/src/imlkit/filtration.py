"""Filtrations of finite models through a closed set of formulas."""

from dataclasses import dataclass

from .errors import SigmaNotClosed, WrongCarrier
from .formula import Atom, Impl, Box, Dia, as_formula, canonical_order, closure, is_closed
from .semantics import Program, evaluate
from .structures import Frame, Model, bits, compose


@dataclass(frozen=True)
class EquivalenceSetting:
    model: Model
    sigma: tuple  # canonical order
    ext: dict  # formula -> extension in the original model
    signature: tuple  # per state, bitmask over sigma
    classes: tuple  # tuple of state bitmasks, numbered by lowest member
    class_of: tuple  # state -> class index

    @property
    def size(self):
        return len(self.classes)


def _sigma(sigma):
    if not isinstance(sigma, (set, frozenset, list, tuple)):
        sigma = closure(as_formula(sigma))
    sigma = frozenset(as_formula(f) for f in sigma)
    if not is_closed(sigma):
        raise SigmaNotClosed("sigma is not closed under subformulas")
    return tuple(canonical_order(sigma))


def equiv_classes(m, sigma):
    """Group states that agree on every member of sigma (a closed set, or a formula
    whose closure is used)."""
    sig = _sigma(sigma)
    prog = Program(sig)
    masks = evaluate(prog, m.frame, m.val)
    ext = {f: masks[prog.index[f]] for f in sig}
    signature = tuple(sum(1 << k for k, f in enumerate(sig) if ext[f] >> s & 1)
                      for s in range(m.n))
    first = {}
    class_of = []
    for s in range(m.n):
        class_of.append(first.setdefault(signature[s], len(first)))
    classes = [0] * len(first)
    for s, c in enumerate(class_of):
        classes[c] |= 1 << s
    return EquivalenceSetting(m, sig, ext, signature, tuple(classes), tuple(class_of))


def _quotient_le(es):
    k = es.size
    sigs = [es.signature[(c & -c).bit_length() - 1] for c in es.classes]
    return tuple(sum(1 << j for j in range(k) if sigs[i] & ~sigs[j] == 0) for i in range(k))


def _quotient_val(es):
    val = {}
    for f in es.sigma:
        if isinstance(f, Atom):
            x = es.ext[f]
            val[f.name] = sum(1 << c for c, members in enumerate(es.classes) if members & x)
    return val


def _names(es):
    nm = es.model.frame.names
    return tuple("[%s]" % nm[(c & -c).bit_length() - 1] for c in es.classes)


def _build(es, r):
    fr = Frame(es.size, _quotient_le(es), tuple(r), _names(es))
    return Model(fr, _quotient_val(es)), es.class_of


def smallest_filtration(m, sigma):
    """[s] R′ [t] iff s ≃∘R∘≃ t. Returns (model, class map state -> class)."""
    es = sigma if isinstance(sigma, EquivalenceSetting) else equiv_classes(m, sigma)
    r = [0] * es.size
    for s in range(m.n):
        for t in bits(m.frame.r[s]):
            r[es.class_of[s]] |= 1 << es.class_of[t]
    return _build(es, r)


def largest_filtration(m, sigma):
    """[s] R′ [t] iff boxes in sigma true at s hold at t and diamonds in sigma whose
    argument holds at t are true at s."""
    es = sigma if isinstance(sigma, EquivalenceSetting) else equiv_classes(m, sigma)
    reps = [(c & -c).bit_length() - 1 for c in es.classes]
    boxes = [f for f in es.sigma if isinstance(f, Box)]
    dias = [f for f in es.sigma if isinstance(f, Dia)]
    ext = es.ext
    r = []
    for s in reps:
        row = 0
        for j, t in enumerate(reps):
            ok = all(not ext[b] >> s & 1 or ext[b.arg] >> t & 1 for b in boxes)
            ok = ok and all(not ext[d.arg] >> t & 1 or ext[d] >> s & 1 for d in dias)
            if ok:
                row |= 1 << j
        r.append(row)
    return _build(es, r)


FILTRATION_CONDITIONS = (
    "carrier", "le", "impl", "le_r", "box", "ge_r", "dia", "val",
)


def is_filtration(candidate, original, sigma, class_map):
    """Check the eight defining conditions; returns {condition: bool}."""
    es = equiv_classes(original, sigma)
    n = original.n
    k = candidate.n
    class_map = tuple(class_map)
    if len(class_map) != n or any(not (0 <= c < k) for c in class_map):
        raise WrongCarrier("class map does not send the original states onto the candidate")
    if k != es.size or set(class_map) != set(range(k)):
        raise WrongCarrier("candidate states are not the classes of the equivalence")
    out = {}
    out["carrier"] = all((class_map[s] == class_map[t]) == (es.class_of[s] == es.class_of[t])
                         for s in range(n) for t in range(n))

    f, cf = original.frame, candidate.frame
    ext = es.ext
    cm = class_map

    def rel(rows, s, t):
        return bool(rows[cm[s]] >> cm[t] & 1)

    pairs = [(s, t) for s in range(n) for t in range(n)]
    out["le"] = all(rel(cf.le, s, t) for s, t in pairs if f.le[s] >> t & 1)

    ok = True
    for g in es.sigma:
        if isinstance(g, Impl):
            e, a, b = ext[g], ext[g.lhs], ext[g.rhs]
            ok = ok and all(b >> t & 1 for s, t in pairs
                            if e >> s & 1 and rel(cf.le, s, t) and a >> t & 1)
    out["impl"] = ok

    le_r_le = compose(cf.le_r, cf.le)
    out["le_r"] = all(rel(le_r_le, s, t) for s, t in pairs if f.le_r[s] >> t & 1)

    ok = True
    for g in es.sigma:
        if isinstance(g, Box):
            e, a = ext[g], ext[g.arg]
            ok = ok and all(a >> t & 1 for s, t in pairs if e >> s & 1 and rel(cf.le_r, s, t))
    out["box"] = ok

    ge_r_ge = compose(cf.ge_r, cf.ge)
    out["ge_r"] = all(rel(ge_r_ge, s, t) for s, t in pairs if f.ge_r[s] >> t & 1)

    ok = True
    for g in es.sigma:
        if isinstance(g, Dia):
            e, a = ext[g], ext[g.arg]
            ok = ok and all(e >> s & 1 for s, t in pairs if a >> t & 1 and rel(cf.ge_r, s, t))
    out["dia"] = ok

    ok = True
    for g in es.sigma:
        if isinstance(g, Atom):
            want = 0
            for s in bits(ext[g]):
                want |= 1 << cm[s]
            ok = ok and candidate.v(g.name) == want
    out["val"] = ok
    return out


def filtration_lemma_check(candidate, original, sigma, class_map):
    """[s] ⊨ A iff s ⊨ A for every A in sigma and every state s."""
    es = equiv_classes(original, sigma)
    if not es.sigma:
        return True
    prog = Program(es.sigma)
    masks = evaluate(prog, candidate.frame, candidate.val)
    for g in es.sigma:
        cx = masks[prog.index[g]]
        x = es.ext[g]
        for s in range(original.n):
            if bool(cx >> class_map[s] & 1) != bool(x >> s & 1):
                return False
    return True


def class_names(m, class_map, candidate):
    return {m.frame.names[s]: candidate.frame.names[c] for s, c in enumerate(class_map)}

