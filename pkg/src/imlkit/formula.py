"""Formulas of intuitionistic modal logic: AST, parser, printer, closed sets."""

from dataclasses import dataclass, field

from .errors import ImlError


class Formula:
    __slots__ = ()

    def __str__(self):
        return show(self)


def _node(cls):
    # frozen dataclass whose hash is computed once at construction
    cls = dataclass(frozen=True, eq=True, repr=False)(cls)
    cls.__hash__ = lambda self: self._h
    return cls


@_node
class Atom(Formula):
    name: str
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("atom", self.name)))

    def __repr__(self):
        return "Atom(%s)" % self.name


@_node
class Top(Formula):
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash("top"))

    def __repr__(self):
        return "Top"


@_node
class Bot(Formula):
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash("bot"))

    def __repr__(self):
        return "Bot"


@_node
class Impl(Formula):
    lhs: Formula
    rhs: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("->", self.lhs, self.rhs)))

    def __repr__(self):
        return "Impl(%r, %r)" % (self.lhs, self.rhs)


@_node
class Or(Formula):
    lhs: Formula
    rhs: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("|", self.lhs, self.rhs)))

    def __repr__(self):
        return "Or(%r, %r)" % (self.lhs, self.rhs)


@_node
class And(Formula):
    lhs: Formula
    rhs: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("&", self.lhs, self.rhs)))

    def __repr__(self):
        return "And(%r, %r)" % (self.lhs, self.rhs)


@_node
class Box(Formula):
    arg: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("[]", self.arg)))

    def __repr__(self):
        return "Box(%r)" % (self.arg,)


@_node
class Dia(Formula):
    arg: Formula
    _h: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("<>", self.arg)))

    def __repr__(self):
        return "Dia(%r)" % (self.arg,)


TOP = Top()
BOT = Bot()

BINARY = (Impl, Or, And)
UNARY = (Box, Dia)


def neg(a):
    return Impl(a, BOT)


def iff(a, b):
    return And(Impl(a, b), Impl(b, a))


def children(f):
    if isinstance(f, BINARY):
        return (f.lhs, f.rhs)
    if isinstance(f, UNARY):
        return (f.arg,)
    return ()


# ---------------------------------------------------------------- parsing

class ParseError(ImlError, ValueError):
    """Syntax error; `offset` is the byte offset (UTF-8) of the offending token."""

    def __init__(self, message, offset):
        super().__init__("%s at offset %d" % (message, offset))
        self.offset = offset


_UNICODE = {
    "⊤": "T", "⊥": "F", "¬": "~", "∧": "&", "∨": "|",
    "→": "->", "↔": "<->", "□": "[]", "◊": "<>", "◇": "<>",
}
_SYMBOLS = ("<->", "->", "[]", "<>", "~", "&", "|", "(", ")")


def _tokens(text):
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        pos = len(text[:i].encode("utf-8"))
        if c in _UNICODE:
            yield _UNICODE[c], None, pos
            i += 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                yield sym, None, pos
                i += len(sym)
                break
        else:
            if "a" <= c <= "z":
                j = i + 1
                while j < n and (text[j].isascii() and (text[j].isalnum() or text[j] == "_")):
                    j += 1
                yield "atom", text[i:j], pos
                i = j
            elif c in "TF" and not (i + 1 < n and text[i + 1].isascii() and (text[i + 1].isalnum() or text[i + 1] == "_")):
                yield c, None, pos
                i += 1
            else:
                raise ParseError("unknown token %r" % c, pos)
    yield "end", None, len(text.encode("utf-8"))


class _Parser:
    # precedence climbing: <-> < -> < | < & < unary; binary connectives right-associative

    def __init__(self, text):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1] or tok[0])
            raise ParseError("expected %r, found %s" % (kind, what), tok[2])
        self.i += 1
        return tok

    def formula(self):
        f = self.iff()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] == ")":
                raise ParseError("unbalanced parenthesis", tok[2])
            raise ParseError("unexpected %r" % (tok[1] or tok[0]), tok[2])
        return f

    def iff(self):
        lhs = self.impl()
        if self.peek()[0] == "<->":
            self.i += 1
            return iff(lhs, self.iff())
        return lhs

    def impl(self):
        lhs = self.disj()
        if self.peek()[0] == "->":
            self.i += 1
            return Impl(lhs, self.impl())
        return lhs

    def disj(self):
        lhs = self.conj()
        if self.peek()[0] == "|":
            self.i += 1
            return Or(lhs, self.disj())
        return lhs

    def conj(self):
        lhs = self.unary()
        if self.peek()[0] == "&":
            self.i += 1
            return And(lhs, self.conj())
        return lhs

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "~":
            self.i += 1
            return neg(self.unary())
        if kind == "[]":
            self.i += 1
            return Box(self.unary())
        if kind == "<>":
            self.i += 1
            return Dia(self.unary())
        if kind == "atom":
            self.i += 1
            return Atom(val)
        if kind == "T":
            self.i += 1
            return TOP
        if kind == "F":
            self.i += 1
            return BOT
        if kind == "(":
            self.i += 1
            f = self.iff()
            if self.peek()[0] != ")":
                raise ParseError("unbalanced parenthesis", self.peek()[2])
            self.i += 1
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError("unexpected %r" % kind, pos)


def parse(text):
    """Parse the ASCII/Unicode surface syntax into a Formula."""
    return _Parser(text).formula()


def as_formula(x):
    return x if isinstance(x, Formula) else parse(x)


# ---------------------------------------------------------------- printing

_PREC = {Impl: 1, Or: 2, And: 3}
_OPS = {Impl: " -> ", Or: " | ", And: " & "}


def _prec(f):
    if isinstance(f, Impl) and f.rhs == BOT:
        return 4  # printed as ~A
    return _PREC.get(type(f), 5)


def show(f):
    """ASCII rendering with minimal parentheses; parse(show(f)) == f."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, Impl) and f.rhs == BOT:
        return "~" + _wrap(f.lhs, 4)
    if isinstance(f, Box):
        return "[]" + _wrap(f.arg, 4)
    if isinstance(f, Dia):
        return "<>" + _wrap(f.arg, 4)
    p = _PREC[type(f)]
    # right-associative: a left operand at the same level needs parentheses
    return _wrap(f.lhs, p + 1) + _OPS[type(f)] + _wrap(f.rhs, p)


def _wrap(f, need):
    s = show(f)
    return s if _prec(f) >= need else "(" + s + ")"


# ---------------------------------------------------------------- measures

def length(f):
    """Number of AST nodes."""
    n, stack = 0, [f]
    while stack:
        g = stack.pop()
        n += 1
        stack.extend(children(g))
    return n


def depth(f):
    cs = children(f)
    return 1 + max(map(depth, cs)) if cs else 0


def atoms(f):
    out, stack = set(), [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        stack.extend(children(g))
    return out


def subformulas(f):
    """All subformulas (including f), deduplicated structurally."""
    seen, stack = set(), [f]
    while stack:
        g = stack.pop()
        if g not in seen:
            seen.add(g)
            stack.extend(children(g))
    return frozenset(seen)


def closure(f):
    """The least closed set containing f."""
    return subformulas(f)


def closure_of(fs):
    out = set()
    for f in fs:
        out |= subformulas(f)
    return frozenset(out)


def is_closed(sigma):
    return all(c in sigma for f in sigma for c in children(f))


def canonical_order(fs):
    """Sort key used wherever a deterministic formula order is needed."""
    return sorted(fs, key=lambda g: (length(g), show(g)))


def substitute(f, sigma):
    """Simultaneous uniform substitution of formulas for atom names."""
    if not sigma:
        return f
    memo = {}

    def go(g):
        if g in memo:
            return memo[g]
        if isinstance(g, Atom):
            r = sigma.get(g.name, g)
        elif isinstance(g, BINARY):
            r = type(g)(go(g.lhs), go(g.rhs))
        elif isinstance(g, UNARY):
            r = type(g)(go(g.arg))
        else:
            r = g
        memo[g] = r
        return r

    return go(f)


# ---------------------------------------------------------------- set accessibility

def bowtie(delta, lam):
    """Delta ⋈ Lambda: boxes of Delta land in Lambda, Lambda's members are diamonds of Delta."""
    for g in delta:
        if isinstance(g, Box) and g.arg not in lam:
            return False
    return all(Dia(b) in delta for b in lam)


def bowtie_gamma(gamma, delta, lam):
    """Delta ⋈^Gamma Lambda, quantifying only over disjunctions A∨□B present in Delta."""
    for g in delta:
        if isinstance(g, Or) and isinstance(g.rhs, Box):
            if g.lhs not in gamma and g.rhs.arg not in lam:
                return False
    return all(Dia(b) in delta for b in lam)
