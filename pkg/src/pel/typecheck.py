"""Simple types: checking and monomorphic inference by unification.

Labels are invisible to types: a choice types like a conditional whose
branches agree, a generator like its body.  Atoms written in environments and
checked types are rigid; inference introduces flexible variables that print
as ``a``, ``b``, ... in order of appearance.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import ParseError, UnboundVariable, UnificationFailure
from .syntax import Abs, App, Choice, Gen, Position, Term, Var, format_pos


@dataclass(frozen=True)
class TAtom:
    name: str

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class TVar:
    uid: int

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True)
class TArrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self) -> str:
        return show_type(self)


SimpleType = Union[TAtom, TVar, TArrow]
TypeEnv = Mapping[str, SimpleType]


def arrow(*tys: SimpleType) -> SimpleType:
    """``arrow(a, b, c)`` is ``a -> b -> c``."""
    t = tys[-1]
    for d in reversed(tys[:-1]):
        t = TArrow(d, t)
    return t


def _letters():
    for n in itertools.count(1):
        for combo in itertools.product("abcdefghijklmnopqrstuvwxyz", repeat=n):
            yield "".join(combo)


def show_type(ty: SimpleType, names: Optional[dict] = None) -> str:
    if names is None:
        names = {}
        gen = _letters()
        for v in type_vars(ty):
            names[v] = next(gen)

    def go(t: SimpleType, left: bool) -> str:
        if isinstance(t, TAtom):
            return t.name
        if isinstance(t, TVar):
            return names.get(t.uid, f"t{t.uid}")
        s = f"{go(t.dom, True)} -> {go(t.cod, False)}"
        return f"({s})" if left else s

    return go(ty, False)


def type_vars(ty: SimpleType) -> list[int]:
    out: list[int] = []

    def go(t):
        if isinstance(t, TVar):
            if t.uid not in out:
                out.append(t.uid)
        elif isinstance(t, TArrow):
            go(t.dom)
            go(t.cod)

    go(ty)
    return out


_TYPE_TOKEN = re.compile(r"\s*(->|→|⇒|\(|\)|[A-Za-z_][A-Za-z0-9_']*)")


def parse_type(text: str) -> SimpleType:
    """Parse ``a -> (b -> c) -> d``; arrows associate to the right."""
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TYPE_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} in type", 1, pos + 1)
        toks.append(m.group(1))
        pos = m.end()
    i = 0

    def parse_arrow() -> SimpleType:
        nonlocal i
        left = parse_atom()
        if i < len(toks) and toks[i] in ("->", "→", "⇒"):
            i += 1
            return TArrow(left, parse_arrow())
        return left

    def parse_atom() -> SimpleType:
        nonlocal i
        if i >= len(toks):
            raise ParseError("unexpected end of type", 1, len(text) + 1)
        tok = toks[i]
        i += 1
        if tok == "(":
            t = parse_arrow()
            if i >= len(toks) or toks[i] != ")":
                raise ParseError("expected ')' in type", 1, len(text) + 1)
            i += 1
            return t
        if tok in (")", "->", "→", "⇒"):
            raise ParseError(f"unexpected {tok!r} in type", 1, 1)
        return TAtom(tok)

    ty = parse_arrow()
    if i != len(toks):
        raise ParseError(f"trailing input in type: {toks[i]!r}", 1, 1)
    return ty


def parse_env(text: str) -> dict:
    """``x : a, f : a -> a`` to an environment."""
    env: dict = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ":" not in part:
            raise ParseError(f"expected 'name : type' in {part!r}", 1, 1)
        name, ty = part.split(":", 1)
        env[name.strip()] = parse_type(ty)
    return env


# ---------------------------------------------------------------------------
# unification


class _Solver:
    def __init__(self):
        self.subst: dict[int, SimpleType] = {}
        self.counter = itertools.count()

    def fresh(self) -> TVar:
        return TVar(next(self.counter))

    def resolve(self, t: SimpleType) -> SimpleType:
        while isinstance(t, TVar) and t.uid in self.subst:
            t = self.subst[t.uid]
        return t

    def zonk(self, t: SimpleType) -> SimpleType:
        t = self.resolve(t)
        if isinstance(t, TArrow):
            return TArrow(self.zonk(t.dom), self.zonk(t.cod))
        return t

    def occurs(self, uid: int, t: SimpleType) -> bool:
        t = self.resolve(t)
        if isinstance(t, TVar):
            return t.uid == uid
        if isinstance(t, TArrow):
            return self.occurs(uid, t.dom) or self.occurs(uid, t.cod)
        return False

    def unify(self, expected: SimpleType, found: SimpleType, pos: Position) -> None:
        a, b = self.resolve(expected), self.resolve(found)
        if a == b:
            return
        if isinstance(a, TVar) or isinstance(b, TVar):
            v, other = (a, b) if isinstance(a, TVar) else (b, a)
            if self.occurs(v.uid, other):
                self._fail(expected, found, pos, "occurs check")
            self.subst[v.uid] = other
            return
        if isinstance(a, TArrow) and isinstance(b, TArrow):
            try:
                self.unify(a.dom, b.dom, pos)
                self.unify(a.cod, b.cod, pos)
            except UnificationFailure as e:
                if e.reason == "occurs check":
                    self._fail(expected, found, pos, "occurs check")
                self._fail(expected, found, pos, e.reason)
            return
        self._fail(expected, found, pos, "type mismatch")

    def _fail(self, expected, found, pos, reason):
        e, f = self.zonk(expected), self.zonk(found)
        names: dict = {}
        gen = _letters()
        for v in type_vars(TArrow(e, f)):
            names[v] = next(gen)
        raise UnificationFailure(format_pos(pos), show_type(e, names), show_type(f, names), reason)


def _infer_raw(solver: _Solver, env: TypeEnv, term: Term) -> SimpleType:
    bound: dict = {}

    def go(t: Term, pos: Position) -> SimpleType:
        if isinstance(t, Var):
            ty = bound.get(t.name)
            if ty is not None:
                return ty
            if t.name.uid == 0 and t.name.hint in env:
                return env[t.name.hint]
            raise UnboundVariable(t.name.hint)
        if isinstance(t, Abs):
            a = solver.fresh()
            old = bound.get(t.var)
            bound[t.var] = a
            body = go(t.body, pos + ("body",))
            if old is None:
                del bound[t.var]
            else:
                bound[t.var] = old
            return TArrow(a, body)
        if isinstance(t, App):
            f = go(t.fun, pos + ("fun",))
            x = go(t.arg, pos + ("arg",))
            r = solver.fresh()
            solver.unify(f, TArrow(x, r), pos)
            return r
        if isinstance(t, Choice):
            left = go(t.left, pos + ("left",))
            right = go(t.right, pos + ("right",))
            solver.unify(left, right, pos)
            return left
        if isinstance(t, Gen):
            return go(t.body, pos + ("body",))
        raise TypeError(t)

    return go(term, ())


def _normalize_vars(ty: SimpleType) -> SimpleType:
    ren = {v: i for i, v in enumerate(type_vars(ty))}

    def go(t):
        if isinstance(t, TVar):
            return TVar(ren[t.uid])
        if isinstance(t, TArrow):
            return TArrow(go(t.dom), go(t.cod))
        return t

    return go(ty)


def infer(env: TypeEnv, term: Term) -> SimpleType:
    """Principal type of ``term`` under ``env``; type variables are renumbered from 0."""
    solver = _Solver()
    raw = _infer_raw(solver, env, term)
    return _normalize_vars(solver.zonk(raw))


def try_infer(env: TypeEnv, term: Term) -> Optional[SimpleType]:
    try:
        return infer(env, term)
    except (UnificationFailure, UnboundVariable):
        return None


def _rigid(ty: SimpleType) -> SimpleType:
    # type variables in a checked type are treated as distinct rigid atoms
    if isinstance(ty, TVar):
        return TAtom(f"'{ty.uid}")
    if isinstance(ty, TArrow):
        return TArrow(_rigid(ty.dom), _rigid(ty.cod))
    return ty


def check(env: TypeEnv, term: Term, ty: SimpleType) -> bool:
    """Whether ``env |- term : ty`` is derivable."""
    solver = _Solver()
    try:
        raw = _infer_raw(solver, env, term)
        solver.unify(_rigid(ty), raw, ())
    except (UnificationFailure, UnboundVariable):
        return False
    return True


def is_instance(specific: SimpleType, general: SimpleType) -> bool:
    """Whether some substitution of ``general``'s variables yields ``specific``."""
    binding: dict = {}

    def go(s, g) -> bool:
        if isinstance(g, TVar):
            if g.uid in binding:
                return binding[g.uid] == s
            binding[g.uid] = s
            return True
        if isinstance(g, TAtom):
            return s == g
        return isinstance(s, TArrow) and go(s.dom, g.dom) and go(s.cod, g.cod)

    return go(_rigid(specific), general)


def types_equivalent(s: SimpleType, t: SimpleType) -> bool:
    """Equality up to renaming of type variables."""
    return _normalize_vars(s) == _normalize_vars(t)


__all__ = [
    "SimpleType",
    "TArrow",
    "TAtom",
    "TVar",
    "TypeEnv",
    "arrow",
    "check",
    "infer",
    "is_instance",
    "parse_env",
    "parse_type",
    "show_type",
    "try_infer",
    "type_vars",
    "types_equivalent",
]
