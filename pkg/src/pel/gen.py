"""Random and exhaustive term generation, plus greedy shrinking."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Optional

from .errors import GenerationExhausted
from .syntax import (
    Abs,
    App,
    Choice,
    Gen,
    Label,
    Name,
    Term,
    Var,
    children,
    fresh_id,
    is_label_closed,
    replace_at,
    size,
    subterms,
)
from .typecheck import TArrow, TAtom, SimpleType

O = TAtom("o")
O_O = TArrow(O, O)

# Free variables available to typed generation.
TYPED_ENV: dict = {
    "x": O,
    "y": O,
    "f": O_O,
    "g": TArrow(O, O_O),
    "h": TArrow(O_O, O),
}

_FREE_NAMES = ("x", "y", "z", "u", "v", "w")
_BOUND_HINTS = ("p", "q", "r", "s", "t", "k")
_LABEL_HINTS = ("a", "b", "c", "d", "e")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_size: int = 25
    max_labels: int = 4
    typed_only: bool = False
    var_pool: int = 3

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be at least 1")
        if not 1 <= self.var_pool <= len(_FREE_NAMES):
            raise ValueError(f"var_pool must be between 1 and {len(_FREE_NAMES)}")

    def with_seed(self, seed: int) -> "GenConfig":
        return replace(self, seed=seed)


class _Scope:
    def __init__(self):
        self.vars: list = []
        self.labels: list = []
        self.labels_used = 0


def _untyped(rng: random.Random, n: int, scope: _Scope, cfg: GenConfig) -> Term:
    free = [Name(h) for h in _FREE_NAMES[: cfg.var_pool]]
    if n <= 1:
        pool = scope.vars + free
        # prefer bound variables so that beta-steps do something
        if scope.vars and rng.random() < 0.6:
            return Var(rng.choice(scope.vars))
        return Var(rng.choice(pool))
    kinds = ["abs", "app", "app"]
    if scope.labels_used < cfg.max_labels:
        kinds += ["gen"]
    if scope.labels and n >= 3:
        kinds += ["choice", "choice"]
    kind = rng.choice(kinds)
    if kind == "abs":
        x = Name(rng.choice(_BOUND_HINTS), fresh_id())
        scope.vars.append(x)
        body = _untyped(rng, n - 1, scope, cfg)
        scope.vars.pop()
        return Abs(x, body)
    if kind == "gen":
        a = Label(_LABEL_HINTS[scope.labels_used % len(_LABEL_HINTS)], fresh_id())
        scope.labels_used += 1
        scope.labels.append(a)
        body = _untyped(rng, n - 1, scope, cfg)
        scope.labels.pop()
        return Gen(a, body)
    if n < 3:
        return _untyped(rng, 1, scope, cfg)
    k = rng.randint(1, n - 2)
    if kind == "app":
        return App(_untyped(rng, k, scope, cfg), _untyped(rng, n - 1 - k, scope, cfg))
    a = rng.choice(scope.labels)
    return Choice(a, _untyped(rng, k, scope, cfg), _untyped(rng, n - 1 - k, scope, cfg))


def _small_type(rng: random.Random) -> SimpleType:
    r = rng.random()
    if r < 0.6:
        return O
    if r < 0.9:
        return O_O
    return TArrow(O_O, O)


class _TypedScope:
    def __init__(self, env: dict):
        self.free = [(Name(n), t) for n, t in env.items()]
        self.bound: list = []
        self.labels: list = []
        self.labels_used = 0


def _minimal(ty: SimpleType, scope: _TypedScope, rng: random.Random) -> Term:
    cands = [x for x, t in scope.bound + scope.free if t == ty]
    if cands:
        return Var(rng.choice(cands))
    if isinstance(ty, TArrow):
        x = Name(rng.choice(_BOUND_HINTS), fresh_id())
        scope.bound.append((x, ty.dom))
        body = _minimal(ty.cod, scope, rng)
        scope.bound.pop()
        return Abs(x, body)
    raise GenerationExhausted(f"no inhabitant for {ty}")


def _typed(rng: random.Random, ty: SimpleType, n: int, scope: _TypedScope, cfg: GenConfig) -> Term:
    if n <= 2:
        return _minimal(ty, scope, rng)
    kinds = ["app", "app", "redex", "redex"]
    if isinstance(ty, TArrow):
        kinds += ["abs", "abs"]
    if scope.labels_used < cfg.max_labels:
        kinds.append("gen")
    if scope.labels:
        kinds += ["choice", "choice"]
    kind = rng.choice(kinds)
    if kind == "abs":
        x = Name(rng.choice(_BOUND_HINTS), fresh_id())
        scope.bound.append((x, ty.dom))
        body = _typed(rng, ty.cod, n - 1, scope, cfg)
        scope.bound.pop()
        return Abs(x, body)
    if kind == "gen":
        a = Label(_LABEL_HINTS[scope.labels_used % len(_LABEL_HINTS)], fresh_id())
        scope.labels_used += 1
        scope.labels.append(a)
        body = _typed(rng, ty, n - 1, scope, cfg)
        scope.labels.pop()
        return Gen(a, body)
    if kind == "redex" and n >= 4:
        # an explicit beta-redex (\x.M) N
        sigma = _small_type(rng)
        k = rng.randint(1, n - 3)
        x = Name(rng.choice(_BOUND_HINTS), fresh_id())
        arg = _typed(rng, sigma, min(k, n - 2 - k), scope, cfg)
        scope.bound.append((x, sigma))
        body = _typed(rng, ty, max(k, n - 2 - k), scope, cfg)
        scope.bound.pop()
        return App(Abs(x, body), arg)
    k = rng.randint(1, n - 2)
    if kind == "choice":
        a = rng.choice(scope.labels)
        return Choice(a, _typed(rng, ty, k, scope, cfg), _typed(rng, ty, n - 1 - k, scope, cfg))
    sigma = _small_type(rng)
    fun = _typed(rng, TArrow(sigma, ty), max(k, n - 1 - k), scope, cfg)
    arg = _typed(rng, sigma, min(k, n - 1 - k), scope, cfg)
    return App(fun, arg)


def gen_term(cfg: GenConfig, rng: Optional[random.Random] = None) -> Term:
    """A label-closed, well-labeled term; typed under ``TYPED_ENV`` when requested.

    The result depends only on ``cfg`` (and ``rng`` if one is passed).
    """
    rng = rng or random.Random(cfg.seed)
    # larger of two draws: skews towards bigger terms, small ones still occur
    target = max(rng.randint(1, cfg.max_size), rng.randint(1, cfg.max_size))
    if not cfg.typed_only:
        t = _untyped(rng, target, _Scope(), cfg)
        assert is_label_closed(t)
        return t
    for _ in range(50):
        ty = _small_type(rng)
        t = _typed(rng, ty, target, _TypedScope(TYPED_ENV), cfg)
        if size(t) <= cfg.max_size:
            return t
        target = max(1, target // 2)
    raise GenerationExhausted(f"no typed term within size {cfg.max_size}")


def gen_typed_at(cfg: GenConfig, ty: SimpleType, rng: Optional[random.Random] = None) -> Term:
    rng = rng or random.Random(cfg.seed)
    target = rng.randint(1, cfg.max_size)
    return _typed(rng, ty, target, _TypedScope(TYPED_ENV), cfg)


# ---------------------------------------------------------------------------
# exhaustive enumeration


def enumerate_terms(
    max_size: int,
    free: tuple = ("y",),
    max_labels: int = 2,
) -> Iterator[Term]:
    """Every label-closed term of at most ``max_size`` nodes, one per alpha-class.

    Free variables range over ``free``; bound variables and labels are
    referred to by their binders, so distinct outputs are never alpha-equal.
    """
    free_names = tuple(Name(h) for h in free)

    def go(n: int, bvars: tuple, labels: tuple) -> Iterator[Term]:
        if n == 1:
            for x in bvars + free_names:
                yield Var(x)
            return
        x = Name(_BOUND_HINTS[len(bvars) % len(_BOUND_HINTS)], fresh_id())
        for body in go(n - 1, bvars + (x,), labels):
            yield Abs(x, body)
        if len(labels) < max_labels:
            a = Label(_LABEL_HINTS[len(labels) % len(_LABEL_HINTS)], fresh_id())
            for body in go(n - 1, bvars, labels + (a,)):
                yield Gen(a, body)
        for k in range(1, n - 1):
            lefts = list(go(k, bvars, labels))
            rights = list(go(n - 1 - k, bvars, labels))
            for left in lefts:
                for right in rights:
                    yield App(left, right)
            for a in labels:
                for left in lefts:
                    for right in rights:
                        yield Choice(a, left, right)

    for n in range(1, max_size + 1):
        yield from go(n, (), ())


# ---------------------------------------------------------------------------
# shrinking


def _candidates(t: Term) -> Iterator[Term]:
    """Smaller variants of ``t``: each subterm replaced by one of its children or a variable."""
    for pos, s in subterms(t):
        for _, c in children(s):
            yield replace_at(t, pos, c)
        if not isinstance(s, Var):
            yield replace_at(t, pos, Var(Name("x")))


def shrink(t: Term, fails: Callable[[Term], bool], max_rounds: int = 200) -> Term:
    """Greedy minimization: keep any smaller label-closed variant on which ``fails`` still holds."""
    for _ in range(max_rounds):
        for c in _candidates(t):
            if size(c) < size(t) and is_label_closed(c):
                try:
                    still = fails(c)
                except Exception:
                    still = False
                if still:
                    t = c
                    break
        else:
            return t
    return t


__all__ = [
    "GenConfig",
    "O",
    "TYPED_ENV",
    "enumerate_terms",
    "gen_term",
    "gen_open",
    "gen_source",
    "gen_typed_at",
    "shrink",
]


def gen_open(
    rng: random.Random,
    n: int,
    cfg: GenConfig,
    bound: tuple = (),
    labels: tuple = (),
) -> Term:
    """A term that may use the given bound variables and (free) labels."""
    scope = _Scope()
    scope.vars = list(bound)
    scope.labels = list(labels)
    scope.labels_used = len(labels)
    return _untyped(rng, n, scope, replace(cfg, max_labels=cfg.max_labels + len(labels)))


def gen_source(rng: random.Random, n: int, max_sums: int = 4, var_pool: int = 3):
    """A random source term; it has at least one sum when ``n >= 3`` and ``max_sums > 0``."""
    from .translate import SAbs, SApp, SSum, SVar, count_sums

    free = [Name(h) for h in _FREE_NAMES[:var_pool]]
    budget = [max_sums]

    def go(n: int, bvars: list):
        if n <= 1:
            if bvars and rng.random() < 0.6:
                return SVar(rng.choice(bvars))
            return SVar(rng.choice(bvars + free))
        kinds = ["abs", "app", "app"]
        if budget[0] > 0 and n >= 3:
            kinds += ["sum", "sum"]
        kind = rng.choice(kinds)
        if kind == "abs" or n < 3:
            x = Name(rng.choice(_BOUND_HINTS), fresh_id())
            return SAbs(x, go(n - 1, bvars + [x]))
        k = rng.randint(1, n - 2)
        if kind == "sum":
            budget[0] -= 1
            return SSum(go(k, bvars), go(n - 1 - k, bvars))
        return SApp(go(k, bvars), go(n - 1 - k, bvars))

    for _ in range(100):
        s = go(n, [])
        if n < 3 or max_sums == 0 or count_sums(s):
            return s
        budget[0] = max_sums
    raise GenerationExhausted("could not place a sum")
