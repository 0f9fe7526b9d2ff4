"""Recursive path ordering certificates for permutative steps.

Terms are read as first-order terms over the symbols ``+a`` (binary), ``!a``
(unary), ``\\x`` (unary) and ``@`` (binary); term variables are first-order
variables.  The precedence of a term M is generated by

    +a < +b   if a is below b in the label order of M
    +a < !b   for all labels
    !b < @    and  !b < \\x   for all labels and variables

with ``@`` and the ``\\x`` pairwise unrelated.  Nodes are hash-consed so that
the ordering can be memoized on node ids.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Union

from .perm import Step
from .syntax import Abs, App, Choice, Label, LabelOrder, Name, Term, Var, label_order, pretty

# symbols
APP = ("@",)


def choice_sym(a: Label) -> tuple:
    return ("+", a)


def gen_sym(a: Label) -> tuple:
    return ("!", a)


def lam_sym(x: Name) -> tuple:
    return ("\\", x)


def show_symbol(sym: tuple) -> str:
    if sym[0] == "@":
        return "@"
    if sym[0] == "\\":
        return f"\\{sym[1].hint}"
    return f"{sym[0]}{sym[1].hint}"


class Precedence:
    """Strict order on the symbols of one term."""

    def __init__(self, order: LabelOrder, symbols: frozenset):
        self.order = order
        self.symbols = symbols

    def less(self, f: tuple, g: tuple) -> bool:
        kf, kg = f[0], g[0]
        if kf == "+":
            if kg == "+":
                return self.order.less(f[1], g[1])
            return True
        if kf == "!":
            return kg in ("@", "\\")
        return False

    def pairs(self) -> set:
        syms = sorted(self.symbols, key=show_symbol)
        return {(f, g) for f in syms for g in syms if self.less(f, g)}

    def describe(self) -> list[str]:
        return sorted(f"{show_symbol(f)} < {show_symbol(g)}" for f, g in self.pairs())


def symbols_of(term: Term, rename: Optional[dict] = None) -> frozenset:
    rename = rename or {}
    out = set()

    def go(t):
        if isinstance(t, Var):
            return
        if isinstance(t, Abs):
            out.add(lam_sym(rename.get(t.var, t.var)))
            go(t.body)
        elif isinstance(t, App):
            out.add(APP)
            go(t.fun)
            go(t.arg)
        elif isinstance(t, Choice):
            out.add(choice_sym(rename.get(t.label, t.label)))
            go(t.left)
            go(t.right)
        else:
            out.add(gen_sym(rename.get(t.label, t.label)))
            go(t.body)

    go(term)
    return frozenset(out)


def precedence_of(term: Term) -> Precedence:
    return Precedence(label_order(term), symbols_of(term))


# ---------------------------------------------------------------------------
# hash-consed first-order terms


class TermTable:
    """Interns first-order nodes; node ids are small integers."""

    def __init__(self):
        self.ids: dict = {}
        self.nodes: list = []  # (symbol or ('var', name), children)
        self.vars: list = []  # variables occurring in each node

    def intern(self, sym: tuple, kids: tuple) -> int:
        key = (sym, kids)
        i = self.ids.get(key)
        if i is None:
            i = len(self.nodes)
            self.ids[key] = i
            self.nodes.append(key)
            if sym[0] == "var":
                vs = frozenset((sym[1],))
            else:
                vs = frozenset().union(*(self.vars[k] for k in kids)) if kids else frozenset()
            self.vars.append(vs)
        return i

    def add(self, term: Term, rename: Optional[dict] = None) -> int:
        rename = rename or {}
        memo: dict = {}

        def go(t: Term) -> int:
            k = id(t)
            if k in memo:
                return memo[k][1]
            if isinstance(t, Var):
                r = self.intern(("var", rename.get(t.name, t.name)), ())
            elif isinstance(t, Abs):
                r = self.intern(lam_sym(rename.get(t.var, t.var)), (go(t.body),))
            elif isinstance(t, App):
                r = self.intern(APP, (go(t.fun), go(t.arg)))
            elif isinstance(t, Choice):
                r = self.intern(choice_sym(rename.get(t.label, t.label)), (go(t.left), go(t.right)))
            else:
                r = self.intern(gen_sym(rename.get(t.label, t.label)), (go(t.body),))
            memo[k] = (t, r)
            return r

        return go(term)

    def show(self, i: int) -> str:
        sym, kids = self.nodes[i]
        if sym[0] == "var":
            return sym[1].hint
        if not kids:
            return show_symbol(sym)
        return f"{show_symbol(sym)}(" + ", ".join(self.show(k) for k in kids) + ")"


class RPO:
    """The ordering for one precedence over one term table."""

    def __init__(self, table: TermTable, prec: Precedence):
        self.table = table
        self.prec = prec
        self.memo: dict = {}

    def less(self, n: int, m: int) -> bool:
        """``n < m``."""
        if n == m:
            return False
        key = (n, m)
        r = self.memo.get(key)
        if r is None:
            r = self._less(n, m)
            self.memo[key] = r
        return r

    def le(self, n: int, m: int) -> bool:
        return n == m or self.less(n, m)

    def _less(self, n: int, m: int) -> bool:
        nodes = self.table.nodes
        f, ns = nodes[n]
        g, ms = nodes[m]
        if g[0] == "var":
            return False
        if f[0] == "var":
            return f[1] in self.table.vars[m]
        if f == g:
            return self.multiset_less(ns, ms)
        if self.prec.less(f, g):
            return all(self.less(x, m) for x in ns)
        return any(self.le(n, y) for y in ms)

    def multiset_less(self, xs, ys) -> bool:
        cx, cy = Counter(xs), Counter(ys)
        dx, dy = cx - cy, cy - cx
        if not dx and not dy:
            return False
        return all(any(self.less(x, y) for y in dy) for x in dx)


def rpo_less(n: Term, m: Term, prec: Precedence) -> bool:
    """Whether ``n < m`` in the recursive path ordering of ``prec``."""
    table = TermTable()
    a, b = table.add(n), table.add(m)
    return RPO(table, prec).less(a, b)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    rule: str
    position: tuple
    precedence: Precedence = field(repr=False)
    ok: bool = True

    def summary(self) -> str:
        return "ok"


@dataclass
class Failure:
    rule: str
    position: tuple
    reason: str
    before: Term = field(repr=False)
    after: Term = field(repr=False)
    ok: bool = False

    def summary(self) -> str:
        return f"FAIL ({self.reason})"


def _rename_map(step: Step) -> dict:
    # follow the renaming record back to binders of the before-term
    ren = step.renaming or {}
    out = {}
    for new in ren:
        old = ren[new]
        seen = {new}
        while old in ren and old not in seen:
            seen.add(old)
            old = ren[old]
        out[new] = old
    return out


def certify_perm_step(step: Step) -> Union[Certificate, Failure]:
    """Check that ``step.after`` lies strictly below ``step.before``.

    Binders introduced by duplication are mapped back to the binder they copy,
    so the after-term is compared over the before-term's signature.
    """
    prec = precedence_of(step.before)
    rename = _rename_map(step)
    after_syms = symbols_of(step.after, rename)
    extra = after_syms - prec.symbols
    if extra:
        shown = ", ".join(sorted(show_symbol(s) for s in extra))
        return Failure(str(step.rule), step.position, f"signature grew: {shown}", step.before, step.after)
    table = TermTable()
    b = table.add(step.before)
    a = table.add(step.after, rename)
    if RPO(table, prec).less(a, b):
        return Certificate(str(step.rule), step.position, prec)
    return Failure(str(step.rule), step.position, "no decrease", step.before, step.after)


def certify_trace(trace) -> list:
    return [certify_perm_step(s) for s in trace]


# ---------------------------------------------------------------------------
# reference ordering used for cross-checking


def dershowitz_less(table: TermTable, prec: Precedence, n: int, m: int, memo: Optional[dict] = None) -> bool:
    """Textbook RPO with an explicit subterm case in every branch."""
    memo = {} if memo is None else memo

    def lt(x: int, y: int) -> bool:
        if x == y:
            return False
        k = (x, y)
        if k in memo:
            return memo[k]
        f, xs = table.nodes[x]
        g, ys = table.nodes[y]
        if g[0] == "var":
            r = False
        elif f[0] == "var":
            r = f[1] in table.vars[y]
        elif any(x == z or lt(x, z) for z in ys):
            r = True
        elif f == g:
            cx, cy = Counter(xs), Counter(ys)
            dx, dy = cx - cy, cy - cx
            r = bool(dx or dy) and all(any(lt(u, v) for v in dy) for u in dx)
        elif prec.less(f, g):
            r = all(lt(u, y) for u in xs)
        else:
            r = False
        memo[k] = r
        return r

    return lt(n, m)


def describe_failure(f: Failure) -> str:
    return f"{f.rule} @ {f.position}: {f.reason}\n  before: {pretty(f.before)}\n  after:  {pretty(f.after)}"


__all__ = [
    "APP",
    "Certificate",
    "Failure",
    "Precedence",
    "RPO",
    "TermTable",
    "certify_perm_step",
    "certify_trace",
    "choice_sym",
    "describe_failure",
    "dershowitz_less",
    "gen_sym",
    "lam_sym",
    "precedence_of",
    "rpo_less",
    "show_symbol",
    "symbols_of",
]
