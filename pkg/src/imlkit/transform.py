"""Model constructions that preserve satisfaction, each returning a state map."""

from dataclasses import dataclass

from .errors import NotReflexive, NotUpClosed, PreconditionFailed
from .structures import Frame, Model, bits, check_property, image, rt_closure


@dataclass(frozen=True)
class StateMap:
    """labels[i] describes new state i; origin[i] is the old state it copies (None for a fresh root)."""

    labels: tuple
    origin: tuple

    def __len__(self):
        return len(self.labels)


def _val_by_origin(m, origin):
    val = {}
    for p, x in m.val.items():
        val[p] = sum(1 << i for i, s in enumerate(origin) if s is not None and x >> s & 1)
    return val


def intersectional_update(m):
    """Same model with R replaced by (≤∘R∘≤) ∩ (≥∘R∘≥)."""
    f = m.frame
    return Model(Frame(f.n, f.le, f.quasi, f.names), dict(m.val))


def _double(m, reflexive):
    f = m.frame
    n = f.n
    # state (t, j) gets id 2t + j
    labels = tuple((t, j) for t in range(n) for j in (0, 1))
    origin = tuple(t for t, _ in labels)
    le, r = [], []
    for t, j in labels:
        row = 0
        for u in bits(f.le[t]):
            row |= 3 << (2 * u)
        le.append(row)
        row = 0
        if j == 0:
            for u in bits(f.r[t]):
                row |= 1 << (2 * u + 1)
        if reflexive:
            row |= 1 << (2 * t + j)
        r.append(row)
    names = tuple("%s.%d" % (f.names[t], j) for t, j in labels)
    fr = Frame(2 * n, tuple(le), tuple(r), names)
    return Model(fr, _val_by_origin(m, origin)), StateMap(labels, origin)


def double_strict(m):
    """W×{0,1}; (t,j) ≤′ (u,k) iff t ≤ u; (t,0) R′ (u,1) iff t R u. Always transitive."""
    return _double(m, False)


def double_reflexive(m):
    """Like double_strict with the identity added to R′; needs a reflexive input."""
    if not check_property(m.frame, "ref"):
        raise NotReflexive("double_reflexive needs a reflexive frame")
    return _double(m, True)


def partitionize(m):
    """States (t, {t,u}) for t R u; R′ links states with the same pair. Needs ref and sym."""
    f = m.frame
    if not (check_property(f, "ref") and check_property(f, "sym")):
        raise PreconditionFailed("partitionize needs a reflexive and symmetric frame")
    labels = []
    for t in range(f.n):
        for u in bits(f.r[t]):
            labels.append((t, frozenset((t, u))))
    labels.sort(key=lambda x: (x[0], sorted(x[1])))
    labels = list(dict.fromkeys(labels))
    origin = tuple(t for t, _ in labels)
    le, r = [], []
    for t, pair in labels:
        row_le = row_r = 0
        for i, (v, pair2) in enumerate(labels):
            if f.le[t] >> v & 1:
                row_le |= 1 << i
            if f.r[t] >> v & 1 and pair == pair2:
                row_r |= 1 << i
        le.append(row_le)
        r.append(row_r)
    names = tuple("%s|%s" % (f.names[t], ",".join(f.names[x] for x in sorted(pair)))
                  for t, pair in labels)
    fr = Frame(len(labels), tuple(le), tuple(r), names)
    return Model(fr, _val_by_origin(m, origin)), StateMap(tuple(labels), origin)


def rooted_join(m1, s1, m2, s2):
    """Disjoint union of m1 and m2 under a fresh root below the up-sets of s1 and s2.

    New state 0 is the root, then m1's states, then m2's. Returns (model, root, map);
    map labels are ("root",), (1, t) and (2, t).
    """
    f1, f2 = m1.frame, m2.frame
    s1, s2 = f1.index(s1), f2.index(s2)
    n1, n2 = f1.n, f2.n
    n = 1 + n1 + n2
    root_row = 1 | f1.le[s1] << 1 | f2.le[s2] << (1 + n1)
    le = [root_row]
    le += [row << 1 for row in f1.le]
    le += [row << (1 + n1) for row in f2.le]
    r = [0]
    r += [row << 1 for row in f1.r]
    r += [row << (1 + n1) for row in f2.r]
    le = rt_closure(tuple(le))

    root = "root"
    used = set(f1.names) | set(f2.names)
    while root in used:
        root += "'"
    names = (root,) + tuple("1." + x for x in f1.names) + tuple("2." + x for x in f2.names)
    fr = Frame(n, le, tuple(r), names)

    val = {}
    for p in set(m1.val) | set(m2.val):
        x = m1.v(p) << 1 | m2.v(p) << (1 + n1)
        if image(fr.le, x) != x:
            raise NotUpClosed("joined valuation of %s is not upward closed" % p)
        val[p] = x
    labels = (("root",),) + tuple((1, t) for t in range(n1)) + tuple((2, t) for t in range(n2))
    origin = (None,) + tuple(range(n1)) + tuple(range(n2))
    return Model(fr, val), 0, StateMap(labels, origin)
