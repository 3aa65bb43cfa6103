"""Seeded random formulas, frames and models for test campaigns."""

import random

from .formula import Atom, Top, Bot, Impl, Or, And, Box, Dia
from .structures import Frame, Model, image, rt_closure, transpose

_BINARY = (Impl, Or, And)


def random_formula(rng, depth=4, names=("p", "q", "r")):
    if depth == 0 or rng.random() < 0.2:
        k = rng.random()
        if k < 0.08:
            return Top()
        if k < 0.16:
            return Bot()
        return Atom(rng.choice(names))
    k = rng.randrange(5)
    if k < 3:
        return _BINARY[k](random_formula(rng, depth - 1, names), random_formula(rng, depth - 1, names))
    op = Box if k == 3 else Dia
    return op(random_formula(rng, depth - 1, names))


def _rel(rng, n, density):
    return tuple(sum(1 << j for j in range(n) if rng.random() < density) for _ in range(n))


def random_frame(rng, n=None, max_n=5, le_density=0.3, r_density=0.3):
    n = n or rng.randint(1, max_n)
    le = rt_closure(_rel(rng, n, le_density))
    return Frame(n, le, _rel(rng, n, r_density))


def random_valuation(rng, frame, names=("p", "q", "r")):
    return {p: image(frame.le, rng.getrandbits(frame.n)) for p in names}


def random_model(rng, n=None, max_n=5, names=("p", "q", "r"), frame=None):
    frame = frame or random_frame(rng, n, max_n)
    return Model(frame, random_valuation(rng, frame, names))


def forward_confluent(frame):
    """Replace R by ≥∘R, which is always forward confluent."""
    return Frame(frame.n, frame.le, frame.ge_r, frame.names)


def reflexive(frame):
    return Frame(frame.n, frame.le, tuple(row | 1 << i for i, row in enumerate(frame.r)), frame.names)


def symmetric(frame):
    t = transpose(frame.r)
    return Frame(frame.n, frame.le, tuple(a | b for a, b in zip(frame.r, t)), frame.names)


def rng(seed):
    return random.Random(seed)
