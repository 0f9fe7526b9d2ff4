"""A source probabilistic lambda-calculus and its call-by-name and
call-by-value interpretations.

Source terms are ``x | \\x.N | M N | M (+) N``.  Under call-by-name the sum
becomes ``!a.(M +[a] N)`` in place.  Under call-by-value the sum becomes a
bare choice and its generator is hoisted to the root by the label closure,
so the event is drawn once before any duplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .errors import LabelJudgmentViolation, ParseError
from .perm import PermRule, perm_redexes, try_rule
from .syntax import (
    Abs,
    App,
    Choice,
    Gen,
    Label,
    Name,
    Position,
    Term,
    Var,
    fresh_id,
    label_judgment,
    parse_raw,
)

# ---------------------------------------------------------------------------
# source terms


@dataclass(frozen=True)
class SVar:
    name: Name


@dataclass(frozen=True)
class SAbs:
    var: Name
    body: "SourceTerm"


@dataclass(frozen=True)
class SApp:
    fun: "SourceTerm"
    arg: "SourceTerm"


@dataclass(frozen=True)
class SSum:
    left: "SourceTerm"
    right: "SourceTerm"


SourceTerm = Union[SVar, SAbs, SApp, SSum]


def parse_source(text: str) -> SourceTerm:
    """Parse a source term; labelled choices and generators are rejected."""

    def go(raw, scope: dict) -> SourceTerm:
        kind = raw[0]
        if kind == "var":
            return SVar(scope.get(raw[1]) or Name(raw[1]))
        if kind == "lam":
            n = Name(raw[1], fresh_id())
            return SAbs(n, go(raw[2], {**scope, raw[1]: n}))
        if kind == "app":
            if raw[3]:
                line, col = raw[4]
                raise ParseError("marks are not allowed in source terms", line, col)
            return SApp(go(raw[1], scope), go(raw[2], scope))
        if kind == "sum":
            return SSum(go(raw[1], scope), go(raw[2], scope))
        line, col = raw[-1]
        what = "generators" if kind == "gen" else "labelled choices"
        raise ParseError(f"{what} are not allowed in source terms", line, col)

    return go(parse_raw(text), {})


def source_free_vars(s: SourceTerm) -> frozenset:
    if isinstance(s, SVar):
        return frozenset((s.name,))
    if isinstance(s, SAbs):
        return source_free_vars(s.body) - {s.var}
    if isinstance(s, SApp):
        return source_free_vars(s.fun) | source_free_vars(s.arg)
    return source_free_vars(s.left) | source_free_vars(s.right)


def count_sums(s: SourceTerm) -> int:
    if isinstance(s, SVar):
        return 0
    if isinstance(s, SAbs):
        return count_sums(s.body)
    if isinstance(s, SApp):
        return count_sums(s.fun) + count_sums(s.arg)
    return 1 + count_sums(s.left) + count_sums(s.right)


def source_size(s: SourceTerm) -> int:
    if isinstance(s, SVar):
        return 1
    if isinstance(s, SAbs):
        return 1 + source_size(s.body)
    if isinstance(s, SApp):
        return 1 + source_size(s.fun) + source_size(s.arg)
    return 1 + source_size(s.left) + source_size(s.right)


def is_value(s: SourceTerm) -> bool:
    """Values are the deterministic (sum-free) terms."""
    return count_sums(s) == 0


def _refresh_source(s: SourceTerm, ren: dict) -> SourceTerm:
    if isinstance(s, SVar):
        return SVar(ren.get(s.name, s.name))
    if isinstance(s, SAbs):
        n = s.var.fresh()
        return SAbs(n, _refresh_source(s.body, {**ren, s.var: n}))
    if isinstance(s, SApp):
        return SApp(_refresh_source(s.fun, ren), _refresh_source(s.arg, ren))
    return SSum(_refresh_source(s.left, ren), _refresh_source(s.right, ren))


def source_substitute(body: SourceTerm, var: Name, value: SourceTerm) -> SourceTerm:
    if var not in source_free_vars(body):
        return body
    if isinstance(body, SVar):
        return _refresh_source(value, {})
    if isinstance(body, SAbs):
        return SAbs(body.var, source_substitute(body.body, var, value))
    if isinstance(body, SApp):
        return SApp(source_substitute(body.fun, var, value), source_substitute(body.arg, var, value))
    return SSum(source_substitute(body.left, var, value), source_substitute(body.right, var, value))


def show_source(s: SourceTerm) -> str:
    free = {n.hint for n in source_free_vars(s)}

    def name_for(n: Name, used: set) -> str:
        base = n.hint
        cand = base
        k = 1
        while cand in used:
            cand = f"{base}{k}"
            k += 1
        return cand

    def go(t: SourceTerm, ctx: int, names: dict, used: set) -> str:
        # ctx: 0 top, 1 left of a sum, 2 function position, 3 argument position
        if isinstance(t, SVar):
            return names.get(t.name, t.name.hint)
        if isinstance(t, SAbs):
            nm = name_for(t.var, used)
            s = f"\\{nm}." + go(t.body, 0, {**names, t.var: nm}, used | {nm})
            return f"({s})" if ctx else s
        if isinstance(t, SApp):
            s = go(t.fun, 2, names, used) + " " + go(t.arg, 3, names, used)
            return f"({s})" if ctx == 3 else s
        s = go(t.left, 1, names, used) + " (+) " + go(t.right, 0, names, used)
        return f"({s})" if ctx else s

    return go(s, 0, {}, set(free))


def source_alpha_eq(s: SourceTerm, t: SourceTerm) -> bool:
    def go(a, b, env: dict) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, SVar):
            return _var_match(a.name, b.name, env)
        if isinstance(a, SAbs):
            return go(a.body, b.body, {**env, a.var: b.var})
        if isinstance(a, SApp):
            return go(a.fun, b.fun, env) and go(a.arg, b.arg, env)
        return go(a.left, b.left, env) and go(a.right, b.right, env)

    return go(s, t, {})


def _var_match(x: Name, y: Name, env: dict) -> bool:
    if x in env:
        return env[x] == y
    return x == y and y not in env.values()


# ---------------------------------------------------------------------------
# call-by-value source reduction


@dataclass(frozen=True)
class SourceBeta:
    position: Position
    result: SourceTerm


@dataclass(frozen=True)
class SourceSplit:
    """A probabilistic step ``C[M (+) P] -> C[M] + C[P]``."""

    position: Position
    left: SourceTerm
    right: SourceTerm


def _source_children(s: SourceTerm):
    if isinstance(s, SAbs):
        return [("body", s.body)]
    if isinstance(s, SApp):
        return [("fun", s.fun), ("arg", s.arg)]
    if isinstance(s, SSum):
        return [("left", s.left), ("right", s.right)]
    return []


def source_subterms(s: SourceTerm, pos: Position = ()) -> Iterator[tuple[Position, SourceTerm]]:
    yield pos, s
    for sel, c in _source_children(s):
        yield from source_subterms(c, pos + (sel,))


def source_replace(s: SourceTerm, pos: Position, new: SourceTerm) -> SourceTerm:
    if not pos:
        return new
    sel, rest = pos[0], pos[1:]
    if isinstance(s, SAbs):
        return SAbs(s.var, source_replace(s.body, rest, new))
    if isinstance(s, SApp):
        if sel == "fun":
            return SApp(source_replace(s.fun, rest, new), s.arg)
        return SApp(s.fun, source_replace(s.arg, rest, new))
    if isinstance(s, SSum):
        if sel == "left":
            return SSum(source_replace(s.left, rest, new), s.right)
        return SSum(s.left, source_replace(s.right, rest, new))
    raise ValueError(f"invalid position {pos}")


def sum_steps(src: SourceTerm) -> list[SourceSplit]:
    """Every probabilistic step available in ``src``, leftmost first."""
    out = []
    for pos, s in source_subterms(src):
        if isinstance(s, SSum):
            out.append(SourceSplit(pos, source_replace(src, pos, s.left), source_replace(src, pos, s.right)))
    return out


def source_step_v(src: SourceTerm) -> Optional[Union[SourceBeta, SourceSplit]]:
    """The leftmost-outermost call-by-value step, if any."""
    for pos, s in source_subterms(src):
        if isinstance(s, SApp) and isinstance(s.fun, SAbs) and is_value(s.arg):
            return SourceBeta(pos, source_replace(src, pos, source_substitute(s.fun.body, s.fun.var, s.arg)))
        if isinstance(s, SSum):
            return SourceSplit(pos, source_replace(src, pos, s.left), source_replace(src, pos, s.right))
    return None


# ---------------------------------------------------------------------------
# interpretations


class _LabelSupply:
    def __init__(self):
        self.n = 0

    def __call__(self) -> Label:
        hint = _hint(self.n)
        self.n += 1
        return Label(hint, fresh_id())


def _hint(n: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    hint = letters[n % len(letters)]
    return hint if n < len(letters) else f"{hint}{n // len(letters)}"


def _to_pel(src: SourceTerm, on_sum) -> Term:
    vmap: dict = {}

    def go(s: SourceTerm) -> Term:
        if isinstance(s, SVar):
            return Var(vmap.get(s.name, s.name))
        if isinstance(s, SAbs):
            n = Name(s.var.hint, fresh_id())
            vmap[s.var] = n
            return Abs(n, go(s.body))
        if isinstance(s, SApp):
            return App(go(s.fun), go(s.arg))
        left, right = go(s.left), go(s.right)
        return on_sum(left, right)

    return go(src)


def translate_cbn(src: SourceTerm) -> Term:
    """Each sum becomes ``!a.(L +[a] R)`` in place."""
    supply = _LabelSupply()

    def on_sum(left, right):
        a = supply()
        return Gen(a, Choice(a, left, right))

    return _to_pel(src, on_sum)


@dataclass(frozen=True)
class OpenInterp:
    theta: tuple
    body: Term

    def closed(self) -> Term:
        return label_closure(self.theta, self.body)


def translate_cbv_open(src: SourceTerm) -> OpenInterp:
    """Open interpretation: a label sequence and a term over those labels.

    For ``M N`` the sequence is ``theta_N . theta_M``; for ``M (+) N`` it is
    ``theta_N . theta_M . a``, so the sum's own label ends up outermost.  The
    head of a sequence is the innermost generator.
    """
    supply = _LabelSupply()
    vmap: dict = {}

    def go(s: SourceTerm) -> tuple[tuple, Term]:
        if isinstance(s, SVar):
            return (), Var(vmap.get(s.name, s.name))
        if isinstance(s, SAbs):
            n = Name(s.var.hint, fresh_id())
            vmap[s.var] = n
            th, body = go(s.body)
            return th, Abs(n, body)
        if isinstance(s, SApp):
            th1, p1 = go(s.fun)
            th2, p2 = go(s.arg)
            return th2 + th1, App(p1, p2)
        th1, p1 = go(s.left)
        th2, p2 = go(s.right)
        a = supply()
        return th2 + th1 + (a,), Choice(a, p1, p2)

    theta, body = go(src)
    return OpenInterp(theta, body)


def label_closure(theta: Sequence[Label], body: Term) -> Term:
    """Prefix ``body`` with one generator per label; the head of theta is innermost."""
    theta = tuple(theta)
    if len(set(theta)) != len(theta):
        raise LabelJudgmentViolation("label sequence has duplicates")
    if not label_judgment(theta, body):
        raise LabelJudgmentViolation("term uses a label outside the sequence")
    for a in theta:
        body = Gen(a, body)
    return body


def translate_cbv(src: SourceTerm) -> Term:
    return translate_cbv_open(src).closed()


def translate(src: SourceTerm, mode: str = "cbn") -> Term:
    if mode == "cbn":
        return translate_cbn(src)
    if mode == "cbv":
        return translate_cbv(src)
    raise ValueError(f"unknown translation mode {mode!r}")


# ---------------------------------------------------------------------------
# simulation of a call-by-value probabilistic step


_LIFTS = {
    PermRule.PLUS_ABS: ("body",),
    PermRule.PLUS_FUN: ("fun",),
    PermRule.PLUS_ARG: ("arg",),
    PermRule.PLUS_L: ("left",),
    PermRule.PLUS_R: ("right",),
    PermRule.PLUS_BOX: ("body",),
}


def _lifted_label(term: Term, rule: PermRule, pos: Position) -> Optional[Label]:
    # label of the choice that the rule moves upwards
    node = term
    for sel in pos + _LIFTS[rule]:
        node = getattr(node, sel)
    return node.label if isinstance(node, Choice) else None


def lift_label(term: Term, a: Label, max_steps: int = 100_000) -> tuple[Term, list]:
    """Push the ``a``-choice to the top, then drop void generators.

    Only permutations that move the ``a``-choice upwards are used, followed by
    ``boxVoid`` wherever it applies.  Returns the final term and the steps as
    (rule, position) pairs.
    """
    steps: list = []
    while True:
        for rule, pos in perm_redexes(term):
            if rule in _LIFTS and _lifted_label(term, rule, pos) == a:
                term = try_rule(term, rule, pos)
                steps.append((rule, pos))
                break
        else:
            break
        if len(steps) > max_steps:
            raise RuntimeError("choice lifting did not terminate")
    while True:
        for rule, pos in perm_redexes(term):
            if rule is PermRule.BOX_VOID:
                term = try_rule(term, rule, pos)
                steps.append((rule, pos))
                break
        else:
            return term, steps


def witness_order(theta: Sequence[Label], a: Label) -> tuple:
    """``theta`` with ``a`` moved to the end, i.e. made the outermost generator."""
    rest = tuple(b for b in theta if b != a)
    return rest + (a,)


def cbv_split_target(step: SourceSplit) -> Term:
    """``!a.(M' +[a] P')`` for the closed translations of the two outcomes."""
    m = translate_cbv(step.left)
    p = translate_cbv(step.right)
    a = Label("a", fresh_id())
    return Gen(a, Choice(a, m, p))


def sum_label_at(interp: OpenInterp, src: SourceTerm, pos: Position) -> Label:
    """The label the open interpretation assigns to the sum at ``pos``."""
    sums = [p for p, s in source_subterms(src) if isinstance(s, SSum)]
    # labels are allocated in postorder; recover that order for the sums
    post = list(_postorder_sums(src, ()))
    labels = [c.label for _, c in _postorder_choices(interp.body, ())]
    assert len(post) == len(labels) == len(sums)
    return labels[post.index(pos)]


def _postorder_sums(s: SourceTerm, pos: Position):
    for sel, c in _source_children(s):
        yield from _postorder_sums(c, pos + (sel,))
    if isinstance(s, SSum):
        yield pos


def _postorder_choices(t: Term, pos: Position):
    if isinstance(t, Abs):
        yield from _postorder_choices(t.body, pos + ("body",))
    elif isinstance(t, App):
        yield from _postorder_choices(t.fun, pos + ("fun",))
        yield from _postorder_choices(t.arg, pos + ("arg",))
    elif isinstance(t, Choice):
        yield from _postorder_choices(t.left, pos + ("left",))
        yield from _postorder_choices(t.right, pos + ("right",))
        yield pos, t
    elif isinstance(t, Gen):
        yield from _postorder_choices(t.body, pos + ("body",))


__all__ = [
    "OpenInterp",
    "SAbs",
    "SApp",
    "SSum",
    "SVar",
    "SourceBeta",
    "SourceSplit",
    "SourceTerm",
    "cbv_split_target",
    "count_sums",
    "is_value",
    "label_closure",
    "lift_label",
    "parse_source",
    "show_source",
    "source_alpha_eq",
    "source_size",
    "source_step_v",
    "source_substitute",
    "source_subterms",
    "sum_label_at",
    "sum_steps",
    "translate",
    "translate_cbn",
    "translate_cbv",
    "translate_cbv_open",
    "witness_order",
]
