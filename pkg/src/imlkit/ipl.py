"""Intuitionistic propositional provability via Dyckhoff's contraction-free calculus G4ip.

Modal subformulas are frozen into fresh atoms first, so a success means the
goal follows from the premises by a substitution instance of an IPL theorem.
"""

from .formula import Atom, Top, Bot, Impl, Or, And, Box, Dia


def freeze(fs):
    """Replace maximal □/◊ subformulas by atoms '#0', '#1', ... (shared across fs)."""
    table = {}

    def go(f):
        if isinstance(f, (Box, Dia)):
            if f not in table:
                table[f] = Atom("#%d" % len(table))
            return table[f]
        if isinstance(f, Impl):
            return Impl(go(f.lhs), go(f.rhs))
        if isinstance(f, And):
            return And(go(f.lhs), go(f.rhs))
        if isinstance(f, Or):
            return Or(go(f.lhs), go(f.rhs))
        return f

    return [go(f) for f in fs]


class G4ip:
    def __init__(self):
        self.memo = {}

    def prove(self, gamma, goal):
        key = (gamma, goal)
        r = self.memo.get(key)
        if r is None:
            r = self._prove(gamma, goal)
            self.memo[key] = r
        return r

    def _prove(self, gamma, goal):
        if isinstance(goal, Top) or goal in gamma:
            return True
        for f in gamma:
            if isinstance(f, Bot):
                return True

        # invertible left rules
        for f in gamma:
            rest = gamma - {f}
            if isinstance(f, And):
                return self.prove(rest | {f.lhs, f.rhs}, goal)
            if isinstance(f, Or):
                return self.prove(rest | {f.lhs}, goal) and self.prove(rest | {f.rhs}, goal)
            if isinstance(f, Top):
                return self.prove(rest, goal)
            if isinstance(f, Impl):
                a, b = f.lhs, f.rhs
                if isinstance(a, Atom) and a in gamma:
                    return self.prove(rest | {b}, goal)
                if isinstance(a, Top):
                    return self.prove(rest | {b}, goal)
                if isinstance(a, Bot):
                    return self.prove(rest, goal)
                if isinstance(a, And):
                    return self.prove(rest | {Impl(a.lhs, Impl(a.rhs, b))}, goal)
                if isinstance(a, Or):
                    return self.prove(rest | {Impl(a.lhs, b), Impl(a.rhs, b)}, goal)

        # invertible right rules
        if isinstance(goal, And):
            return self.prove(gamma, goal.lhs) and self.prove(gamma, goal.rhs)
        if isinstance(goal, Impl):
            return self.prove(gamma | {goal.lhs}, goal.rhs)

        # non-invertible choices
        if isinstance(goal, Or):
            if self.prove(gamma, goal.lhs) or self.prove(gamma, goal.rhs):
                return True
        for f in gamma:
            if isinstance(f, Impl) and isinstance(f.lhs, Impl):
                c, d, b = f.lhs.lhs, f.lhs.rhs, f.rhs
                rest = gamma - {f}
                if self.prove(rest | {c, Impl(d, b)}, d) and self.prove(rest | {b}, goal):
                    return True
        return False


def ipl_prove(premises, goal):
    """Whether (∧ premises) → goal is intuitionistically valid, modalities opaque."""
    *prem, g = freeze(list(premises) + [goal])
    return G4ip().prove(frozenset(prem), g)


def ipl_valid(f):
    return ipl_prove([], f)

