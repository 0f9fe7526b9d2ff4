"""Projections, head contexts, projective splitting and outcome distributions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import NotNormalForm, StepBudgetExceeded
from .perm import DEFAULT_MAX_STEPS, N0_NORMAL, Step, classify_normal_form
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
    alpha_eq,
    alpha_key,
    free_labels,
    pretty,
    refresh,
)


def project(term: Term, a: Label, i: int) -> Term:
    """Replace every ``a``-choice by its ``i``-th branch, stopping at a rebinding ``!a``."""
    if a not in free_labels(term):
        return term
    if isinstance(term, Abs):
        return Abs(term.var, project(term.body, a, i))
    if isinstance(term, App):
        return App(project(term.fun, a, i), project(term.arg, a, i), term.mark)
    if isinstance(term, Choice):
        if term.label == a:
            return project(term.right if i else term.left, a, i)
        return Choice(term.label, project(term.left, a, i), project(term.right, a, i))
    if isinstance(term, Gen):
        # a is free below, so this generator binds a different label
        return Gen(term.label, project(term.body, a, i))
    return term


# ---------------------------------------------------------------------------
# head contexts


@dataclass(frozen=True)
class Lambda:
    var: Name


@dataclass(frozen=True)
class AppliedTo:
    arg: Term


Frame = Union[Lambda, AppliedTo]


@dataclass(frozen=True)
class HeadContext:
    """Spine of frames from the root down to the hole."""

    frames: tuple = ()

    def plug(self, t: Term) -> Term:
        for f in reversed(self.frames):
            t = Abs(f.var, t) if isinstance(f, Lambda) else App(t, f.arg)
        return t

    def position(self) -> Position:
        return tuple("body" if isinstance(f, Lambda) else "fun" for f in self.frames)

    def __str__(self) -> str:
        return pretty(self.plug(Var(Name("[]"))))


def head_spine(term: Term) -> tuple[HeadContext, Term]:
    """Walk abstractions and function positions; returns the maximal context and its hole filler."""
    frames = []
    t = term
    while True:
        if isinstance(t, Abs):
            frames.append(Lambda(t.var))
            t = t.body
        elif isinstance(t, App):
            frames.append(AppliedTo(t.arg))
            t = t.fun
        else:
            return HeadContext(tuple(frames)), t


def split_head(term: Term) -> Optional[tuple[HeadContext, Label, Term]]:
    """Decompose ``term`` as ``H[!a.N]`` with maximal ``H``, if possible."""
    h, t = head_spine(term)
    if isinstance(t, Gen):
        return h, t.label, t.body
    return None


def pi_step(term: Term) -> Optional[tuple[Term, Term]]:
    found = split_head(term)
    if found is None:
        return None
    h, a, body = found
    left = h.plug(project(body, a, 0))
    right = h.plug(project(body, a, 1))
    return left, refresh(right)


def head_redex(term: Term) -> Optional[Position]:
    """Position of the outermost beta-redex on the head spine."""
    pos: list = []
    t = term
    while True:
        if isinstance(t, Abs):
            pos.append("body")
            t = t.body
        elif isinstance(t, App):
            if isinstance(t.fun, Abs):
                return tuple(pos)
            pos.append("fun")
            t = t.fun
        else:
            return None


# ---------------------------------------------------------------------------
# distributions


class Distribution:
    """Finite map from terms (modulo alpha) to exact dyadic probabilities."""

    def __init__(self, pairs: Iterable[tuple[Term, Fraction]] = ()):
        self._entries: dict = {}
        for t, p in pairs:
            self.add(t, p)

    def add(self, t: Term, p) -> None:
        p = Fraction(p)
        if p <= 0:
            raise ValueError("probabilities must be positive")
        k = alpha_key(t)
        if k in self._entries:
            old, q = self._entries[k]
            self._entries[k] = (old, q + p)
        else:
            self._entries[k] = (t, p)

    @classmethod
    def point(cls, t: Term) -> "Distribution":
        return cls([(t, Fraction(1))])

    def total(self) -> Fraction:
        return sum((p for _, p in self._entries.values()), Fraction(0))

    def prob(self, t: Term) -> Fraction:
        e = self._entries.get(alpha_key(t))
        return e[1] if e else Fraction(0)

    def items(self) -> list[tuple[Term, Fraction]]:
        rows = [(t, p, pretty(t)) for t, p in self._entries.values()]
        rows.sort(key=lambda r: (-r[1], r[2]))
        return [(t, p) for t, p, _ in rows]

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return {k: p for k, (_, p) in self._entries.items()} == {
            k: p for k, (_, p) in other._entries.items()
        }

    def table(self) -> str:
        return "\n".join(f"{p}\t{pretty(t)}" for t, p in self.items())

    def records(self) -> list[dict]:
        return [{"prob": str(p), "term": pretty(t)} for t, p in self.items()]

    def __repr__(self) -> str:
        inner = ", ".join(f"{pretty(t)}: {p}" for t, p in self.items())
        return "{" + inner + "}"


def dist_of_normal_form(term: Term) -> Distribution:
    """Read an N0-normal term's outer sums as a fair decision tree."""
    if classify_normal_form(term) != N0_NORMAL:
        raise NotNormalForm(f"not a normal form: {pretty(term)}")
    out = Distribution()

    def go(t: Term, w: Fraction):
        if isinstance(t, Gen) and isinstance(t.body, Choice) and t.body.label == t.label:
            go(t.body.left, w / 2)
            go(t.body.right, w / 2)
        else:
            out.add(t, w)

    go(term, Fraction(1))
    return out


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> bool:
        self.used += n
        return self.used <= self.limit

    @property
    def left(self) -> int:
        return max(self.limit - self.used, 0)


def evaluate_dist(term: Term, budget: int = DEFAULT_MAX_STEPS) -> Distribution:
    """Exact outcome distribution by head splitting and head beta-steps.

    Each branch is reduced along its head spine: a head generator splits the
    branch in two at half weight, a head beta-redex is contracted, and once the
    head is a variable the branch is normalized in place.  One budget unit is
    one beta step, one split or one step of leaf normalization.
    """
    from .beta import Strategy, reduce, step_beta

    out = Distribution()
    b = _Budget(budget)
    stack: list[tuple[Term, Fraction]] = [(term, Fraction(1))]

    def fail(current: Term, w: Fraction):
        residual = w + sum((q for _, q in stack), Fraction(0))
        raise StepBudgetExceeded(
            f"distribution evaluation exceeded {budget} steps", [], current, residual
        )

    while stack:
        t, w = stack.pop()
        while True:
            split = pi_step(t)
            if split is not None:
                if not b.spend():
                    fail(t, w)
                left, right = split
                if alpha_eq(left, right):
                    t = left
                    continue
                stack.append((right, w / 2))
                t, w = left, w / 2
                continue
            pos = head_redex(t)
            if pos is not None:
                if not b.spend():
                    fail(t, w)
                t = step_beta(t, pos)
                continue
            try:
                nf, trace = reduce(t, Strategy.FULL_LEFTMOST, b.left)
            except StepBudgetExceeded as e:
                fail(e.term, w)
            b.used += sum(s.cost for s in trace)
            out.add(nf, w)
            break
    return out


def reduce_projective(
    term: Term, budget: int = DEFAULT_MAX_STEPS, keep_trace: bool = True
) -> tuple[Term, list[Step]]:
    """Projective evaluation returning the outcome tree as a term.

    Each split becomes a fresh ``!a.(L +[a] R)`` node (collapsed when both
    outcomes are alpha-equal).  Trace steps are tagged ``pi`` or ``beta`` and
    record the branch being evaluated.
    """
    from .beta import BETA, Strategy, reduce, step_beta

    b = _Budget(budget)
    trace: list[Step] = []

    def go(t: Term, path: Position) -> Term:
        while True:
            found = split_head(t)
            if found is not None:
                if not b.spend():
                    raise StepBudgetExceeded(f"projective reduction exceeded {budget} steps", trace, t)
                h, a, body = found
                left = h.plug(project(body, a, 0))
                right = refresh(h.plug(project(body, a, 1)))
                if keep_trace:
                    trace.append(Step("pi", path + h.position(), t, Gen(a, Choice(a, left, right))))
                if alpha_eq(left, right):
                    t = left
                    continue
                lv = go(left, path + ("body", "left"))
                rv = go(right, path + ("body", "right"))
                if alpha_eq(lv, rv):
                    return lv
                c = a.fresh()
                return Gen(c, Choice(c, lv, rv))
            pos = head_redex(t)
            if pos is not None:
                if not b.spend():
                    raise StepBudgetExceeded(f"projective reduction exceeded {budget} steps", trace, t)
                after = step_beta(t, pos)
                if keep_trace:
                    trace.append(Step(BETA, path + pos, t, after))
                t = after
                continue
            nf, sub = reduce(t, Strategy.FULL_LEFTMOST, b.left, keep_trace)
            b.spend(sum(s.cost for s in sub))
            if keep_trace:
                for s in sub:
                    trace.append(Step(s.rule, path + s.position, s.before, s.after, s.renaming, s.cost))
            return nf

    return go(term, ()), trace


__all__ = [
    "AppliedTo",
    "Distribution",
    "HeadContext",
    "Lambda",
    "dist_of_normal_form",
    "evaluate_dist",
    "head_redex",
    "head_spine",
    "pi_step",
    "project",
    "reduce_projective",
    "split_head",
]
