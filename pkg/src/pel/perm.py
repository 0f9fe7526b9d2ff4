"""Permutative reduction: the twelve non-beta rewrite rules.

Rules distribute every operator over labelled choices and eliminate
generators.  ``step_perm`` picks the leftmost-outermost redex, breaking ties at
one position by the fixed rule priority ``RULE_ORDER``.  Rules that duplicate
a subterm give the second copy fresh binder ids; the ``renaming`` recorded on
each step maps those new ids back to the ids they copy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .errors import IncomparableLabels, StepBudgetExceeded
from .syntax import (
    Abs,
    App,
    Choice,
    Gen,
    Label,
    Position,
    Term,
    Var,
    alpha_eq,
    format_pos,
    free_labels,
    label_depths,
    pretty,
    refresh,
)

DEFAULT_MAX_STEPS = 100_000


class PermRule(str, Enum):
    IDEM = "idem"
    CANCEL_L = "cancelL"
    CANCEL_R = "cancelR"
    PLUS_ABS = "plusAbs"
    PLUS_FUN = "plusFun"
    PLUS_ARG = "plusArg"
    PLUS_L = "plusL"
    PLUS_R = "plusR"
    PLUS_BOX = "plusBox"
    BOX_VOID = "boxVoid"
    BOX_ABS = "boxAbs"
    BOX_FUN = "boxFun"

    def __str__(self) -> str:
        return self.value


RULE_ORDER = list(PermRule)

# Macro steps of labelled p-reduction: permute past a marked redex at once.
MACRO_PLUS = "plusAbs+plusFun"
MACRO_BOX = "boxAbs+boxFun"

_BY_NODE = {
    Choice: [r for r in RULE_ORDER if r in (PermRule.IDEM, PermRule.CANCEL_L, PermRule.CANCEL_R, PermRule.PLUS_L, PermRule.PLUS_R)],
    Abs: [PermRule.PLUS_ABS, PermRule.BOX_ABS],
    App: [PermRule.PLUS_FUN, PermRule.PLUS_ARG, PermRule.BOX_FUN],
    Gen: [PermRule.PLUS_BOX, PermRule.BOX_VOID],
    Var: [],
}


@dataclass
class Step:
    """One rewrite step.  ``rule`` is a PermRule value, a macro tag, ``beta`` or ``pi``."""

    rule: str
    position: Position
    before: Term
    after: Term
    renaming: dict = field(default_factory=dict, repr=False)
    cost: int = 1

    def line(self) -> str:
        return f"{self.rule} @ {format_pos(self.position)} : {pretty(self.after)}"

    def record(self) -> dict:
        return {"rule": str(self.rule), "pos": format_pos(self.position), "term": pretty(self.after)}


PermStep = Step


def _less(depth: dict, a: Label, b: Label) -> bool:
    da = depth.get(a)
    db = depth.get(b)
    if da is None or db is None:
        raise IncomparableLabels(f"cannot order labels {a} and {b}")
    return da < db


def rule_matches(rule: PermRule, t: Term, depth: dict) -> bool:
    """Whether ``rule`` applies at the root of ``t``, without building the contractum."""
    tt = type(t)
    if rule is PermRule.IDEM:
        return tt is Choice and alpha_eq(t.left, t.right)
    if rule is PermRule.CANCEL_L:
        return tt is Choice and type(t.left) is Choice and t.left.label == t.label
    if rule is PermRule.CANCEL_R:
        return tt is Choice and type(t.right) is Choice and t.right.label == t.label
    if rule is PermRule.PLUS_ABS:
        return tt is Abs and type(t.body) is Choice
    if rule is PermRule.PLUS_FUN:
        return tt is App and type(t.fun) is Choice
    if rule is PermRule.PLUS_ARG:
        return tt is App and type(t.arg) is Choice
    if rule is PermRule.PLUS_L:
        return (
            tt is Choice
            and type(t.left) is Choice
            and t.left.label != t.label
            and _less(depth, t.left.label, t.label)
        )
    if rule is PermRule.PLUS_R:
        return (
            tt is Choice
            and type(t.right) is Choice
            and t.right.label != t.label
            and _less(depth, t.right.label, t.label)
        )
    if rule is PermRule.PLUS_BOX:
        return tt is Gen and type(t.body) is Choice and t.body.label != t.label
    if rule is PermRule.BOX_VOID:
        return tt is Gen and t.label not in free_labels(t.body)
    if rule is PermRule.BOX_ABS:
        return tt is Abs and type(t.body) is Gen
    if rule is PermRule.BOX_FUN:
        return tt is App and type(t.fun) is Gen
    return False


def apply_rule(rule: PermRule, t: Term, depth: dict, record: dict) -> Optional[Term]:
    """Contract ``rule`` at the root of ``t`` or return None.

    ``depth`` maps every label bound above ``t`` (or listed in theta) to its
    nesting depth; it decides the plusL/plusR side condition.
    """
    if rule is PermRule.IDEM:
        if isinstance(t, Choice) and alpha_eq(t.left, t.right):
            return t.left
    elif rule is PermRule.CANCEL_L:
        if isinstance(t, Choice) and isinstance(t.left, Choice) and t.left.label == t.label:
            return Choice(t.label, t.left.left, t.right)
    elif rule is PermRule.CANCEL_R:
        if isinstance(t, Choice) and isinstance(t.right, Choice) and t.right.label == t.label:
            return Choice(t.label, t.left, t.right.right)
    elif rule is PermRule.PLUS_ABS:
        if isinstance(t, Abs) and isinstance(t.body, Choice):
            c = t.body
            return Choice(c.label, Abs(t.var, c.left), refresh(Abs(t.var, c.right), record))
    elif rule is PermRule.PLUS_FUN:
        if isinstance(t, App) and isinstance(t.fun, Choice):
            c = t.fun
            return Choice(c.label, App(c.left, t.arg, t.mark), App(c.right, refresh(t.arg, record), t.mark))
    elif rule is PermRule.PLUS_ARG:
        if isinstance(t, App) and isinstance(t.arg, Choice):
            c = t.arg
            return Choice(c.label, App(t.fun, c.left, t.mark), App(refresh(t.fun, record), c.right, t.mark))
    elif rule is PermRule.PLUS_L:
        if isinstance(t, Choice) and isinstance(t.left, Choice):
            a, b = t.left.label, t.label
            if a != b and _less(depth, a, b):
                n, m, p = t.left.left, t.left.right, t.right
                return Choice(a, Choice(b, n, p), Choice(b, m, refresh(p, record)))
    elif rule is PermRule.PLUS_R:
        if isinstance(t, Choice) and isinstance(t.right, Choice):
            a, b = t.right.label, t.label
            if a != b and _less(depth, a, b):
                n, m, p = t.left, t.right.left, t.right.right
                return Choice(a, Choice(b, n, m), Choice(b, refresh(n, record), p))
    elif rule is PermRule.PLUS_BOX:
        if isinstance(t, Gen) and isinstance(t.body, Choice):
            c = t.body
            if c.label != t.label:
                return Choice(c.label, Gen(t.label, c.left), refresh(Gen(t.label, c.right), record))
    elif rule is PermRule.BOX_VOID:
        if isinstance(t, Gen) and t.label not in free_labels(t.body):
            return t.body
    elif rule is PermRule.BOX_ABS:
        if isinstance(t, Abs) and isinstance(t.body, Gen):
            g = t.body
            return Gen(g.label, Abs(t.var, g.body))
    elif rule is PermRule.BOX_FUN:
        if isinstance(t, App) and isinstance(t.fun, Gen):
            g = t.fun
            return Gen(g.label, App(g.body, t.arg, t.mark))
    return None


def _apply_macro(t: Term, record: dict):
    """Labelled p-step past a marked redex ``(\\x.M)* N``; returns (tag, result) or None."""
    if not (isinstance(t, App) and t.mark and isinstance(t.fun, Abs)):
        return None
    lam = t.fun
    if isinstance(lam.body, Choice):
        c = lam.body
        left = App(Abs(lam.var, c.left), t.arg, t.mark)
        right = App(refresh(Abs(lam.var, c.right), record), refresh(t.arg, record), t.mark)
        return MACRO_PLUS, Choice(c.label, left, right)
    if isinstance(lam.body, Gen):
        g = lam.body
        return MACRO_BOX, Gen(g.label, App(Abs(lam.var, g.body), t.arg, t.mark))
    return None


class _Found:
    __slots__ = ("rule", "path", "record")

    def __init__(self):
        self.rule = None
        self.path: list = []
        self.record: dict = {}


def _search(t: Term, depth: dict, found: _Found, labeled: bool, perm: bool = True, extra=None) -> Optional[Term]:
    """Preorder search; at each node p-rules (by priority) come before ``extra``."""
    tt = type(t)
    if perm:
        for rule in _BY_NODE[tt]:
            r = apply_rule(rule, t, depth, found.record)
            if r is not None:
                found.rule = rule
                return r
        if labeled and tt is App:
            m = _apply_macro(t, found.record)
            if m is not None:
                found.rule = m[0]
                return m[1]
    if extra is not None:
        m = extra(t)
        if m is not None:
            found.rule = m[0]
            return m[1]
    if tt is Var:
        return None
    if tt is App:
        r = _search(t.fun, depth, found, labeled, perm, extra)
        if r is not None:
            found.path.append("fun")
            return App(r, t.arg, t.mark)
        r = _search(t.arg, depth, found, labeled, perm, extra)
        if r is not None:
            found.path.append("arg")
            return App(t.fun, r, t.mark)
        return None
    if tt is Choice:
        r = _search(t.left, depth, found, labeled, perm, extra)
        if r is not None:
            found.path.append("left")
            return Choice(t.label, r, t.right)
        r = _search(t.right, depth, found, labeled, perm, extra)
        if r is not None:
            found.path.append("right")
            return Choice(t.label, t.left, r)
        return None
    if tt is Abs:
        r = _search(t.body, depth, found, labeled, perm, extra)
        if r is not None:
            found.path.append("body")
            return Abs(t.var, r)
        return None
    depth[t.label] = len(depth)
    try:
        r = _search(t.body, depth, found, labeled, perm, extra)
    finally:
        del depth[t.label]
    if r is not None:
        found.path.append("body")
        return Gen(t.label, r)
    return None


def step_perm(term: Term, theta: Sequence[Label] = (), labeled: bool = False) -> Optional[Step]:
    """Leftmost-outermost p-step, or None if ``term`` is p-normal.

    With ``labeled`` set, marked redexes are treated as units: the two macro
    steps replace plusAbs/boxAbs under a marked application, so marks survive.
    """
    return first_step(term, theta, labeled)


def first_step(term: Term, theta: Sequence[Label] = (), labeled: bool = False, perm: bool = True, extra=None) -> Optional[Step]:
    """Leftmost-outermost step of p-rules and/or ``extra``.

    ``extra(t)`` may return ``(tag, contractum)`` for a redex at the root of
    ``t``; it is tried after the p-rules at the same position.
    """
    found = _Found()
    r = _search(term, label_depths(theta), found, labeled, perm, extra)
    if r is None:
        return None
    pos = tuple(reversed(found.path))
    cost = 2 if found.rule in (MACRO_PLUS, MACRO_BOX) else 1
    return Step(found.rule, pos, term, r, found.record, cost)


def _depth_along(term: Term, pos: Position, theta: Sequence[Label]) -> tuple[dict, Term]:
    depth = label_depths(theta)
    t = term
    for sel in pos:
        if isinstance(t, Gen):
            depth[t.label] = len(depth)
        t = getattr(t, sel)
    return depth, t


def try_rule(term: Term, rule: PermRule, pos: Position, theta: Sequence[Label] = ()) -> Optional[Term]:
    """Apply ``rule`` at ``pos`` if its pattern and side condition match."""
    from .syntax import replace_at

    depth, sub = _depth_along(term, pos, theta)
    r = apply_rule(PermRule(rule), sub, depth, {})
    return None if r is None else replace_at(term, pos, r)


def try_rule_step(term: Term, rule: PermRule, pos: Position, theta: Sequence[Label] = ()) -> Optional[Step]:
    from .syntax import replace_at

    depth, sub = _depth_along(term, pos, theta)
    record: dict = {}
    r = apply_rule(PermRule(rule), sub, depth, record)
    if r is None:
        return None
    return Step(PermRule(rule), tuple(pos), term, replace_at(term, pos, r), record)


def perm_redexes(term: Term, theta: Sequence[Label] = ()) -> list[tuple[PermRule, Position]]:
    """Every (rule, position) at which a p-step applies, in preorder and priority order."""
    out: list = []
    depth = label_depths(theta)

    def go(t: Term, path: list):
        for rule in _BY_NODE[type(t)]:
            if rule_matches(rule, t, depth):
                out.append((rule, tuple(path)))
        if isinstance(t, Gen):
            depth[t.label] = len(depth)
            path.append("body")
            go(t.body, path)
            path.pop()
            del depth[t.label]
            return
        for sel in ("fun", "arg", "left", "right", "body"):
            c = getattr(t, sel, None)
            if isinstance(c, Term):
                path.append(sel)
                go(c, path)
                path.pop()

    go(term, [])
    return out


def one_step_reducts(term: Term, theta: Sequence[Label] = ()) -> list[Step]:
    return [try_rule_step(term, rule, pos, theta) for rule, pos in perm_redexes(term, theta)]


def p_normalize(
    term: Term,
    max_steps: int = DEFAULT_MAX_STEPS,
    theta: Sequence[Label] = (),
    labeled: bool = False,
    keep_trace: bool = True,
) -> tuple[Term, list[Step]]:
    """Iterate ``step_perm`` to the p-normal form.

    Raises StepBudgetExceeded (carrying the partial trace) once more than
    ``max_steps`` elementary steps would be needed.
    """
    trace: list[Step] = []
    used = 0
    while True:
        step = step_perm(term, theta, labeled)
        if step is None:
            return term, trace
        used += step.cost
        if used > max_steps:
            raise StepBudgetExceeded(
                f"p-normalization exceeded {max_steps} steps", trace, term
            )
        if keep_trace:
            trace.append(step)
        term = step.after


def p_normal_form(term: Term, max_steps: int = DEFAULT_MAX_STEPS, theta: Sequence[Label] = ()) -> Term:
    return p_normalize(term, max_steps, theta, keep_trace=False)[0]


def is_p_normal(term: Term, theta: Sequence[Label] = ()) -> bool:
    return step_perm(term, theta) is None


# ---------------------------------------------------------------------------
# normal-form grammars


def _is_sum(t: Term) -> bool:
    """``!a.(L +[a] R)``: the unlabelled probabilistic sum."""
    return isinstance(t, Gen) and isinstance(t.body, Choice) and t.body.label == t.label


def _p0(t: Term) -> bool:
    if _is_sum(t):
        c = t.body
        return _p0(c.left) and _p0(c.right) and not alpha_eq(c.left, c.right)
    return _p1(t)


def _p1(t: Term) -> bool:
    while isinstance(t, Abs):
        t = t.body
    if isinstance(t, Var):
        return True
    if isinstance(t, App):
        return _p1(t.fun) and _p0(t.arg)
    return False


def _n0(t: Term) -> bool:
    if _is_sum(t):
        c = t.body
        return _n0(c.left) and _n0(c.right) and not alpha_eq(c.left, c.right)
    return _n1(t)


def _n1(t: Term) -> bool:
    while isinstance(t, Abs):
        t = t.body
    return _n2(t)


def _n2(t: Term) -> bool:
    while isinstance(t, App):
        if not _n0(t.arg):
            return False
        t = t.fun
    return isinstance(t, Var)


P0_NORMAL = "P0-normal"
N0_NORMAL = "N0-normal"
NEITHER = "neither"


def classify_normal_form(term: Term) -> str:
    """``N0-normal`` (normal for full reduction), ``P0-normal`` (p-normal only) or ``neither``.

    The sum productions are read with the side condition that the two
    branches differ, since idem would otherwise apply.
    """
    if _n0(term):
        return N0_NORMAL
    if _p0(term):
        return P0_NORMAL
    return NEITHER


def is_n1(term: Term) -> bool:
    return _n1(term)
