"""Hypothesis strategies for formulas, frames and models."""

from hypothesis import strategies as st

from imlkit.formula import Atom, Top, Bot, Impl, Or, And, Box, Dia
from imlkit.structures import Frame, Model, image, rt_closure

ATOMS = ("p", "q", "r")


def formulas(max_depth=4, names=ATOMS):
    leaves = st.one_of(st.sampled_from(names).map(Atom), st.just(Top()), st.just(Bot()))

    def extend(inner):
        return st.one_of(
            st.builds(Impl, inner, inner), st.builds(Or, inner, inner), st.builds(And, inner, inner),
            st.builds(Box, inner), st.builds(Dia, inner))

    # recursive() bounds leaves, not depth; max_leaves ~ 2^depth keeps depth small
    return st.recursive(leaves, extend, max_leaves=2 ** max_depth).filter(
        lambda f: _depth(f) <= max_depth)


def _depth(f):
    from imlkit.formula import depth
    return depth(f)


@st.composite
def relations(draw, n):
    return tuple(draw(st.integers(0, (1 << n) - 1)) for _ in range(n))


@st.composite
def frames(draw, min_n=1, max_n=4):
    n = draw(st.integers(min_n, max_n))
    le = rt_closure(draw(relations(n)))
    return Frame(n, le, draw(relations(n)))


@st.composite
def models(draw, min_n=1, max_n=4, names=ATOMS, frame_strategy=None):
    fr = draw(frame_strategy if frame_strategy is not None else frames(min_n, max_n))
    val = {p: image(fr.le, draw(st.integers(0, (1 << fr.n) - 1))) for p in names}
    return Model(fr, val)
