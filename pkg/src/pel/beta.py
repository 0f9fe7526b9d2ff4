"""Beta-reduction, parallel beta-steps on marked terms, complete reduction and
the reduction driver shared by the CLI and the property harness."""

from __future__ import annotations

import itertools
import random
from enum import Enum
from typing import Iterator, Optional, Sequence

from .errors import NotARedex, StepBudgetExceeded
from .perm import (
    DEFAULT_MAX_STEPS,
    Step,
    first_step,
    p_normalize,
    perm_redexes,
    step_perm,
    try_rule_step,
)
from .syntax import (
    Abs,
    App,
    Choice,
    Gen,
    Label,
    Position,
    Term,
    Var,
    erase_marks,
    replace_at,
    subterm_at,
    subterms,
    substitute,
)

BETA = "beta"


class Strategy(str, Enum):
    PERM_ONLY = "perm"
    LEFTMOST_BETA = "beta"
    FULL_LEFTMOST = "full"
    COMPLETE = "complete"
    PROJECTIVE = "projective"

    def __str__(self) -> str:
        return self.value


def is_beta_redex(t: Term) -> bool:
    return type(t) is App and type(t.fun) is Abs


def contract(t: Term) -> Term:
    if not is_beta_redex(t):
        raise NotARedex(f"not a beta-redex: {t}")
    return substitute(t.fun.body, t.fun.var, t.arg)


def step_beta(term: Term, pos: Position) -> Term:
    return replace_at(term, pos, contract(subterm_at(term, pos)))


def beta_redexes(term: Term) -> list[Position]:
    return [p for p, s in subterms(term) if is_beta_redex(s)]


def has_beta_redex(term: Term) -> bool:
    return any(is_beta_redex(s) for _, s in subterms(term))


def _beta_extra(t: Term):
    if type(t) is App and type(t.fun) is Abs:
        return BETA, substitute(t.fun.body, t.fun.var, t.arg)
    return None


# ---------------------------------------------------------------------------
# marked terms


def full_labeling(term: Term, mark: int = 1) -> Term:
    """Mark every beta-redex."""
    if isinstance(term, Var):
        return term
    if isinstance(term, Abs):
        return Abs(term.var, full_labeling(term.body, mark))
    if isinstance(term, App):
        m = mark if isinstance(term.fun, Abs) else 0
        return App(full_labeling(term.fun, mark), full_labeling(term.arg, mark), m)
    if isinstance(term, Choice):
        return Choice(term.label, full_labeling(term.left, mark), full_labeling(term.right, mark))
    return Gen(term.label, full_labeling(term.body, mark))


def mark_positions(term: Term, positions: Sequence[Position], mark: int = 1) -> Term:
    for pos in positions:
        node = subterm_at(term, pos)
        if not is_beta_redex(node):
            raise NotARedex(f"cannot mark a non-redex at {pos}")
        term = replace_at(term, pos, App(node.fun, node.arg, mark))
    return term


def marked_positions(lt: Term) -> list[Position]:
    return [p for p, s in subterms(lt) if type(s) is App and s.mark]


def markings(term: Term) -> Iterator[Term]:
    """Every labelling of ``term`` (all subsets of its beta-redexes)."""
    positions = beta_redexes(term)
    for k in range(len(positions) + 1):
        for chosen in itertools.combinations(positions, k):
            yield mark_positions(term, chosen)


def count_marks(lt: Term, only: Optional[int] = None) -> int:
    return sum(
        1
        for _, s in subterms(lt)
        if type(s) is App and s.mark and (only is None or s.mark == only)
    )


def labeled_reduct(lt: Term, only: Optional[int] = None) -> Term:
    """Contract all marked redexes simultaneously.

    With ``only`` set, just the redexes carrying that mark are contracted and
    other marks are kept on the result (residual tracking).
    """

    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return t
        if isinstance(t, Abs):
            return Abs(t.var, go(t.body))
        if isinstance(t, App):
            if t.mark and (only is None or t.mark == only):
                if not isinstance(t.fun, Abs):
                    raise NotARedex("marked application is not a beta-redex")
                return substitute(go(t.fun.body), t.fun.var, go(t.arg))
            return App(go(t.fun), go(t.arg), 0 if only is None else t.mark)
        if isinstance(t, Choice):
            return Choice(t.label, go(t.left), go(t.right))
        return Gen(t.label, go(t.body))

    return go(lt)


def labeled_p_step(lt: Term, theta: Sequence[Label] = ()) -> Optional[Term]:
    step = step_perm(lt, theta, labeled=True)
    return None if step is None else step.after


def labeled_p_normalize(lt: Term, max_steps: int = DEFAULT_MAX_STEPS) -> tuple[Term, list[Step]]:
    return p_normalize(lt, max_steps, labeled=True)


def complete_step(term: Term, marking: Optional[Term] = None, max_steps: int = DEFAULT_MAX_STEPS) -> Term:
    """Parallel beta-step on the marked redexes, then p-normalization.

    ``marking`` defaults to the full labeling of ``term``.
    """
    if marking is None:
        marking = full_labeling(term)
    return p_normalize(labeled_reduct(marking), max_steps, keep_trace=False)[0]


# ---------------------------------------------------------------------------
# strategies


def _raise_budget(budget: int, trace: list, term: Term):
    raise StepBudgetExceeded(f"reduction exceeded {budget} steps", trace, term)


def reduce(
    term: Term,
    strategy: Strategy | str = Strategy.FULL_LEFTMOST,
    budget: int = DEFAULT_MAX_STEPS,
    keep_trace: bool = True,
    theta: Sequence[Label] = (),
) -> tuple[Term, list[Step]]:
    """Drive ``strategy`` to a normal form.

    ``perm`` stops at the p-normal form, ``beta`` at the beta-normal form
    (leftmost-outermost, no p-steps), ``full`` and ``complete`` at the normal
    form of both.  ``projective`` evaluates by head generator splitting and
    returns the outcome tree as a term.  One budget unit is one elementary
    beta or p step.  ``theta`` orders free labels for the perm, beta and
    full strategies.
    """
    strategy = Strategy(strategy)
    if strategy is Strategy.PROJECTIVE:
        from .projective import reduce_projective

        return reduce_projective(term, budget, keep_trace)
    if strategy is Strategy.COMPLETE:
        return _reduce_complete(term, budget, keep_trace)
    perm = strategy is not Strategy.LEFTMOST_BETA
    extra = None if strategy is Strategy.PERM_ONLY else _beta_extra
    trace: list[Step] = []
    used = 0
    while True:
        step = first_step(term, theta, perm=perm, extra=extra)
        if step is None:
            return term, trace
        used += step.cost
        if used > budget:
            _raise_budget(budget, trace, term)
        if keep_trace:
            trace.append(step)
        term = step.after


def _reduce_complete(term: Term, budget: int, keep_trace: bool) -> tuple[Term, list[Step]]:
    trace: list[Step] = []
    used = 0
    while True:
        if not has_beta_redex(term) and step_perm(term) is None:
            return term, trace
        lt = full_labeling(term)
        # a parallel step is charged one unit per contracted redex
        used += count_marks(lt)
        if used > budget:
            _raise_budget(budget, trace, term)
        reduct = labeled_reduct(lt)
        try:
            nf, ptrace = p_normalize(reduct, budget - used)
        except StepBudgetExceeded as e:
            _raise_budget(budget, trace, e.term)
        used += sum(s.cost for s in ptrace)
        if keep_trace:
            trace.append(Step("complete", (), term, nf, cost=count_marks(lt)))
        term = nf


def all_redexes(term: Term) -> list[tuple[str, Position]]:
    """Every beta and p redex as (rule tag, position)."""
    out = [(str(rule), pos) for rule, pos in perm_redexes(term)]
    out.extend((BETA, pos) for pos in beta_redexes(term))
    return out


def apply_redex(term: Term, rule: str, pos: Position) -> Step:
    if rule == BETA:
        return Step(BETA, pos, term, step_beta(term, pos))
    step = try_rule_step(term, rule, pos)
    if step is None:
        raise NotARedex(f"{rule} does not apply at {pos}")
    return step


def one_step_reducts_full(term: Term) -> list[Step]:
    return [apply_redex(term, rule, pos) for rule, pos in all_redexes(term)]


def reduce_random(
    term: Term,
    rng: random.Random,
    budget: int = DEFAULT_MAX_STEPS,
    beta: bool = True,
    perm: bool = True,
) -> tuple[Term, int]:
    """Reduce by picking a uniformly random redex each step; returns (normal form, steps)."""
    used = 0
    while True:
        cands: list = []
        if perm:
            cands.extend((str(r), p) for r, p in perm_redexes(term))
        if beta:
            cands.extend((BETA, p) for p in beta_redexes(term))
        if not cands:
            return term, used
        used += 1
        if used > budget:
            _raise_budget(budget, [], term)
        rule, pos = rng.choice(cands)
        term = apply_redex(term, rule, pos).after


def normal_form(term: Term, budget: int = DEFAULT_MAX_STEPS) -> Term:
    return reduce(term, Strategy.FULL_LEFTMOST, budget, keep_trace=False)[0]


__all__ = [
    "BETA",
    "Strategy",
    "all_redexes",
    "apply_redex",
    "beta_redexes",
    "complete_step",
    "contract",
    "count_marks",
    "erase_marks",
    "full_labeling",
    "has_beta_redex",
    "is_beta_redex",
    "labeled_p_normalize",
    "labeled_p_step",
    "labeled_reduct",
    "mark_positions",
    "marked_positions",
    "markings",
    "normal_form",
    "one_step_reducts_full",
    "reduce",
    "reduce_random",
    "step_beta",
]
