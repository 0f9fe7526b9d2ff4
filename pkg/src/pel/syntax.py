"""Terms of the probabilistic event lambda-calculus.

Five constructors: variables, abstractions, applications, labelled choices
``M +[a] N`` and generators ``!a.M``.  Every binder (of either sort) carries a
globally fresh numeric id, so stored terms are well-labeled by construction:
no two binders in a term share an id.  Free variables and free labels have
id 0 and are identified by their name.

Applications carry an integer ``mark``.  Plain terms have mark 0 everywhere;
non-zero marks select beta-redexes for parallel reduction (see ``pel.beta``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import LabelClosureError, ParseError

_counter = itertools.count(1)


def fresh_id() -> int:
    return next(_counter)


@dataclass(frozen=True, slots=True)
class Name:
    hint: str
    uid: int = 0

    def fresh(self) -> "Name":
        return Name(self.hint, fresh_id())

    def __str__(self) -> str:
        return self.hint


@dataclass(frozen=True, slots=True)
class Label:
    hint: str
    uid: int = 0

    def fresh(self) -> "Label":
        return Label(self.hint, fresh_id())

    def __str__(self) -> str:
        return self.hint


# A label sequence theta; index 0 is the head (innermost generator).
LabelSeq = tuple  # tuple[Label, ...]
# A position is a path of child selectors from the root.
Position = tuple  # tuple[str, ...]


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: Name
    _info: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Abs(Term):
    var: Name
    body: Term
    _info: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term
    mark: int = 0
    _info: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Choice(Term):
    label: Label
    left: Term
    right: Term
    _info: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Gen(Term):
    label: Label
    body: Term
    _info: Optional[tuple] = field(default=None, compare=False, repr=False)


_EMPTY: frozenset = frozenset()


def _info(t: Term) -> tuple:
    """(free labels, free variables, node count), cached on the node."""
    info = t._info
    if info is not None:
        return info
    if isinstance(t, Var):
        info = (_EMPTY, frozenset((t.name,)), 1)
    elif isinstance(t, Abs):
        fl, fv, n = _info(t.body)
        info = (fl, fv - {t.var} if t.var in fv else fv, n + 1)
    elif isinstance(t, App):
        f1, v1, n1 = _info(t.fun)
        f2, v2, n2 = _info(t.arg)
        info = (f1 | f2, v1 | v2, n1 + n2 + 1)
    elif isinstance(t, Choice):
        f1, v1, n1 = _info(t.left)
        f2, v2, n2 = _info(t.right)
        info = (f1 | f2 | {t.label}, v1 | v2, n1 + n2 + 1)
    elif isinstance(t, Gen):
        fl, fv, n = _info(t.body)
        info = (fl - {t.label} if t.label in fl else fl, fv, n + 1)
    else:
        raise TypeError(f"not a term: {t!r}")
    object.__setattr__(t, "_info", info)
    return info


def free_labels(t: Term) -> frozenset:
    return _info(t)[0]


def free_vars(t: Term) -> frozenset:
    return _info(t)[1]


def size(t: Term) -> int:
    return _info(t)[2]


def is_label_closed(t: Term) -> bool:
    return not _info(t)[0]


def children(t: Term) -> list[tuple[str, Term]]:
    if isinstance(t, Abs):
        return [("body", t.body)]
    if isinstance(t, App):
        return [("fun", t.fun), ("arg", t.arg)]
    if isinstance(t, Choice):
        return [("left", t.left), ("right", t.right)]
    if isinstance(t, Gen):
        return [("body", t.body)]
    return []


def subterms(t: Term, pos: Position = ()) -> Iterator[tuple[Position, Term]]:
    """Preorder (outermost, then left to right) walk with positions."""
    stack = [(pos, t)]
    while stack:
        p, s = stack.pop()
        yield p, s
        for sel, c in reversed(children(s)):
            stack.append((p + (sel,), c))


def subterm_at(t: Term, pos: Position) -> Term:
    for sel in pos:
        t = getattr(t, sel)
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    sel, rest = pos[0], pos[1:]
    if isinstance(t, Abs):
        return Abs(t.var, replace_at(t.body, rest, new))
    if isinstance(t, App):
        if sel == "fun":
            return App(replace_at(t.fun, rest, new), t.arg, t.mark)
        return App(t.fun, replace_at(t.arg, rest, new), t.mark)
    if isinstance(t, Choice):
        if sel == "left":
            return Choice(t.label, replace_at(t.left, rest, new), t.right)
        return Choice(t.label, t.left, replace_at(t.right, rest, new))
    if isinstance(t, Gen):
        return Gen(t.label, replace_at(t.body, rest, new))
    raise ValueError(f"invalid position {format_pos(pos)}")


def format_pos(pos: Position) -> str:
    return ".".join(("root",) + tuple(pos))


def parse_pos(text: str) -> Position:
    parts = text.split(".")
    if parts[0] != "root":
        raise ValueError(f"position must start with 'root': {text}")
    return tuple(parts[1:])


# ---------------------------------------------------------------------------
# renaming, substitution, alpha-equivalence


def refresh(t: Term, record: Optional[dict] = None) -> Term:
    """Copy ``t`` giving every binder inside it a fresh id.

    Free variables and labels are untouched.  If ``record`` is given it is
    filled with ``new binder -> old binder`` pairs.
    """
    vmap: dict = {}
    lmap: dict = {}

    def go(s: Term) -> Term:
        if isinstance(s, Var):
            n = vmap.get(s.name)
            return s if n is None else Var(n)
        if isinstance(s, Abs):
            n = s.var.fresh()
            old = vmap.get(s.var)
            vmap[s.var] = n
            if record is not None:
                record[n] = s.var
            body = go(s.body)
            if old is None:
                del vmap[s.var]
            else:
                vmap[s.var] = old
            return Abs(n, body)
        if isinstance(s, App):
            return App(go(s.fun), go(s.arg), s.mark)
        if isinstance(s, Choice):
            return Choice(lmap.get(s.label, s.label), go(s.left), go(s.right))
        if isinstance(s, Gen):
            a = s.label.fresh()
            old = lmap.get(s.label)
            lmap[s.label] = a
            if record is not None:
                record[a] = s.label
            body = go(s.body)
            if old is None:
                del lmap[s.label]
            else:
                lmap[s.label] = old
            return Gen(a, body)
        raise TypeError(s)

    return go(t)


def substitute(body: Term, var: Name, value: Term) -> Term:
    """``body[value/var]``; each inserted copy of ``value`` gets fresh binders."""

    def go(s: Term) -> Term:
        if var not in free_vars(s):
            return s
        if isinstance(s, Var):
            return refresh(value)
        if isinstance(s, Abs):
            return Abs(s.var, go(s.body))
        if isinstance(s, App):
            return App(go(s.fun), go(s.arg), s.mark)
        if isinstance(s, Choice):
            return Choice(s.label, go(s.left), go(s.right))
        return Gen(s.label, go(s.body))

    return go(body)


def alpha_eq(s: Term, t: Term, marks: bool = False) -> bool:
    """Equality up to renaming of bound variables and bound labels.

    Marks on applications are ignored unless ``marks`` is set.
    """
    if s is t:
        return True
    if size(s) != size(t):
        return False
    vmap: dict = {}
    vrev: dict = {}
    lmap: dict = {}
    lrev: dict = {}

    def same(x, y, fwd, rev) -> bool:
        if x in fwd:
            return fwd[x] == y
        return x == y and y not in rev

    def bind(x, y, fwd, rev):
        saved = (fwd.get(x), rev.get(y))
        fwd[x] = y
        rev[y] = x
        return saved

    def unbind(x, y, fwd, rev, saved):
        if saved[0] is None:
            del fwd[x]
        else:
            fwd[x] = saved[0]
        if saved[1] is None:
            del rev[y]
        else:
            rev[y] = saved[1]

    def go(a: Term, b: Term) -> bool:
        while True:
            if a is b and not vmap and not lmap:
                return True
            ta = type(a)
            if ta is not type(b):
                return False
            if ta is Var:
                return same(a.name, b.name, vmap, vrev)
            if ta is App:
                if marks and a.mark != b.mark:
                    return False
                if not go(a.fun, b.fun):
                    return False
                a, b = a.arg, b.arg
                continue
            if ta is Choice:
                if not same(a.label, b.label, lmap, lrev):
                    return False
                if not go(a.left, b.left):
                    return False
                a, b = a.right, b.right
                continue
            if ta is Abs:
                saved = bind(a.var, b.var, vmap, vrev)
                ok = go(a.body, b.body)
                unbind(a.var, b.var, vmap, vrev, saved)
                return ok
            saved = bind(a.label, b.label, lmap, lrev)
            ok = go(a.body, b.body)
            unbind(a.label, b.label, lmap, lrev, saved)
            return ok

    return go(s, t)


def alpha_key(t: Term, marks: bool = False):
    """A hashable key with ``alpha_key(s) == alpha_key(t)`` iff ``alpha_eq(s, t)``."""
    vlevel: dict = {}
    llevel: dict = {}

    def go(s: Term, vd: int, ld: int):
        if isinstance(s, Var):
            lv = vlevel.get(s.name)
            return ("v", lv) if lv is not None else ("x", s.name.hint, s.name.uid)
        if isinstance(s, Abs):
            old = vlevel.get(s.var)
            vlevel[s.var] = vd
            k = ("L", go(s.body, vd + 1, ld))
            if old is None:
                del vlevel[s.var]
            else:
                vlevel[s.var] = old
            return k
        if isinstance(s, App):
            return ("A", go(s.fun, vd, ld), go(s.arg, vd, ld), s.mark if marks else 0)
        if isinstance(s, Choice):
            lv = llevel.get(s.label)
            lk = ("l", lv) if lv is not None else ("y", s.label.hint, s.label.uid)
            return ("C", lk, go(s.left, vd, ld), go(s.right, vd, ld))
        old = llevel.get(s.label)
        llevel[s.label] = ld
        k = ("G", go(s.body, vd, ld + 1))
        if old is None:
            del llevel[s.label]
        else:
            llevel[s.label] = old
        return k

    return go(t, 0, 0)


def erase_marks(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, Abs):
        b = erase_marks(t.body)
        return t if b is t.body else Abs(t.var, b)
    if isinstance(t, App):
        f, a = erase_marks(t.fun), erase_marks(t.arg)
        if t.mark == 0 and f is t.fun and a is t.arg:
            return t
        return App(f, a)
    if isinstance(t, Choice):
        left, right = erase_marks(t.left), erase_marks(t.right)
        if left is t.left and right is t.right:
            return t
        return Choice(t.label, left, right)
    b = erase_marks(t.body)
    return t if b is t.body else Gen(t.label, b)


# ---------------------------------------------------------------------------
# labels: well-labeledness, order, judgments


def binder_ids_distinct(t: Term) -> bool:
    """Canonical freshness: no two binders of the same sort share an id."""
    seen_v: set = set()
    seen_l: set = set()
    for _, s in subterms(t):
        if isinstance(s, Abs):
            if s.var in seen_v:
                return False
            seen_v.add(s.var)
        elif isinstance(s, Gen):
            if s.label in seen_l:
                return False
            seen_l.add(s.label)
    return True


def is_well_labeled(t: Term) -> bool:
    """No generator binds a label already bound by an enclosing generator."""

    def go(s: Term, bound: frozenset) -> bool:
        if isinstance(s, Gen):
            if s.label in bound:
                return False
            return go(s.body, bound | {s.label})
        return all(go(c, bound) for _, c in children(s))

    return go(t, _EMPTY)


class LabelOrder:
    """Strict order on labels: ``a < b`` iff ``!b`` occurs in the scope of ``!a``.

    Free labels are ordered by a label sequence theta (a later element of
    theta is smaller) and sit below every bound label.
    """

    def __init__(self, ancestors: dict):
        self.ancestors = ancestors

    def less(self, a: Label, b: Label) -> bool:
        return a in self.ancestors.get(b, _EMPTY)

    def comparable(self, a: Label, b: Label) -> bool:
        return a == b or self.less(a, b) or self.less(b, a)

    @property
    def labels(self) -> list:
        return list(self.ancestors)

    def pairs(self) -> set:
        return {(a, b) for b, anc in self.ancestors.items() for a in anc}

    def parent(self, b: Label) -> Optional[Label]:
        """Immediate predecessor, if any."""
        anc = self.ancestors.get(b, _EMPTY)
        for a in anc:
            if all(c == a or self.less(c, a) for c in anc):
                return a
        return None


def label_order(t: Term, theta: Sequence[Label] = ()) -> LabelOrder:
    ancestors: dict = {}
    outer = list(reversed(theta))
    for i, a in enumerate(outer):
        ancestors[a] = frozenset(outer[:i])
    base = frozenset(outer)

    def go(s: Term, above: frozenset):
        if isinstance(s, Gen):
            ancestors[s.label] = above
            go(s.body, above | {s.label})
            return
        for _, c in children(s):
            go(c, above)

    go(t, base)
    return LabelOrder(ancestors)


def label_judgment(theta: Sequence[Label], t: Term) -> bool:
    """Derivability of the label judgment with sequence ``theta`` for ``t``."""
    if isinstance(t, Var):
        return True
    if isinstance(t, Abs):
        return label_judgment(theta, t.body)
    if isinstance(t, App):
        return label_judgment(theta, t.fun) and label_judgment(theta, t.arg)
    if isinstance(t, Choice):
        return (
            t.label in theta
            and label_judgment(theta, t.left)
            and label_judgment(theta, t.right)
        )
    return label_judgment((t.label,) + tuple(theta), t.body)


def label_depths(theta: Sequence[Label]) -> dict:
    """Depth index of each free label: the last element of theta is outermost (0)."""
    n = len(theta)
    return {a: n - 1 - i for i, a in enumerate(theta)}


# ---------------------------------------------------------------------------
# surface syntax

_PUNCT = {"\\", "λ", "!", ".", "(", ")", "]", "*"}


@dataclass
class Token:
    kind: str  # ident, punct, plus (for "+["), sum (for "(+)"), eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("(+)", i):
            toks.append(Token("sum", "(+)", line, col))
            i += 3
            col += 3
            continue
        if c == "⊕":
            toks.append(Token("sum", c, line, col))
            i += 1
            col += 1
            continue
        if text.startswith("+[", i):
            toks.append(Token("plus", "+[", line, col))
            i += 2
            col += 2
            continue
        if c in _PUNCT:
            toks.append(Token("punct", c, line, col))
            i += 1
            col += 1
            continue
        if c.isalpha() or c == "_" or c.isdigit():
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            toks.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


# Raw syntax tree produced by the parser, before name resolution:
#   ("var", name) ("lam", name, body) ("gen", name, body) ("app", f, a, starred)
#   ("choice", name, l, r) ("sum", l, r); each node ends with (line, col).


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        self.i += 1
        return tok

    def at(self, kind: str, *texts: str) -> bool:
        tok = self.tok
        return tok.kind == kind and (not texts or tok.text in texts)

    def parse(self):
        if self.at("eof"):
            raise self.error("empty input")
        t = self.term()
        if not self.at("eof"):
            raise self.error(f"unexpected {self.tok.text!r}")
        return t

    def term(self):
        if self.at("punct", "\\", "λ", "!"):
            return self.binder()
        left = self.app()
        if self.at("plus"):
            tok = self.tok
            self.i += 1
            label = self.expect("ident").text
            self.expect("punct", "]")
            return ("choice", label, left, self.term(), (tok.line, tok.col))
        if self.at("sum"):
            tok = self.tok
            self.i += 1
            return ("sum", left, self.term(), (tok.line, tok.col))
        return left

    def binder(self):
        tok = self.tok
        self.i += 1
        if tok.text == "!":
            name = self.expect("ident").text
            self.expect("punct", ".")
            return ("gen", name, self.term(), (tok.line, tok.col))
        names = [self.expect("ident").text]
        while self.at("ident"):
            names.append(self.expect("ident").text)
        self.expect("punct", ".")
        body = self.term()
        for name in reversed(names):
            body = ("lam", name, body, (tok.line, tok.col))
        return body

    def app(self):
        items = []
        while True:
            if self.at("ident") or self.at("punct", "("):
                items.append(self.atom())
            elif self.at("punct", "\\", "λ", "!") and items:
                items.append((self.binder(), False))
                break
            else:
                break
        if not items:
            got = self.tok.text or "end of input"
            raise self.error(f"expected a term, found {got!r}")
        t, starred = items[0]
        if starred and len(items) == 1:
            raise self.error("marked term must be applied")
        for a, st in items[1:]:
            if st:
                raise self.error("a marked redex must be written (\\x.M)* N")
            t = ("app", t, a, starred, t[-1])
            starred = False
        return t

    def atom(self):
        tok = self.tok
        if tok.kind == "ident":
            self.i += 1
            node = ("var", tok.text, (tok.line, tok.col))
        else:
            self.expect("punct", "(")
            node = self.term()
            self.expect("punct", ")")
        starred = False
        if self.at("punct", "*"):
            self.i += 1
            starred = True
        return node, starred


def parse_raw(text: str):
    return _Parser(text).parse()


def _resolve(raw, open_labels: bool, names: dict, labels: dict, sum_hint: str):
    kind = raw[0]
    if kind == "var":
        return Var(names.get(raw[1]) or Name(raw[1]))
    if kind == "lam":
        n = Name(raw[1], fresh_id())
        inner = dict(names)
        inner[raw[1]] = n
        return Abs(n, _resolve(raw[2], open_labels, inner, labels, sum_hint))
    if kind == "gen":
        a = Label(raw[1], fresh_id())
        inner = dict(labels)
        inner[raw[1]] = a
        return Gen(a, _resolve(raw[2], open_labels, names, inner, sum_hint))
    if kind == "app":
        f = _resolve(raw[1], open_labels, names, labels, sum_hint)
        x = _resolve(raw[2], open_labels, names, labels, sum_hint)
        if raw[3] and not isinstance(f, Abs):
            line, col = raw[4]
            raise ParseError("only a beta-redex may be marked", line, col)
        return App(f, x, 1 if raw[3] else 0)
    if kind == "choice":
        a = labels.get(raw[1])
        if a is None:
            if not open_labels:
                line, col = raw[4]
                raise LabelClosureError(
                    f"{line}:{col}: label {raw[1]} has no enclosing generator"
                )
            a = Label(raw[1])
        return Choice(
            a,
            _resolve(raw[2], open_labels, names, labels, sum_hint),
            _resolve(raw[3], open_labels, names, labels, sum_hint),
        )
    if kind == "sum":
        a = Label(sum_hint, fresh_id())
        return Gen(
            a,
            Choice(
                a,
                _resolve(raw[1], open_labels, names, labels, sum_hint),
                _resolve(raw[2], open_labels, names, labels, sum_hint),
            ),
        )
    raise AssertionError(kind)


def parse(text: str, open_labels: bool = False) -> Term:
    """Parse surface text into a term with fresh binder ids.

    ``M (+) N`` is sugar for ``!f.(M +[f] N)``.  A choice whose label has no
    enclosing generator is an error unless ``open_labels`` is set, in which
    case it becomes a free label.
    """
    return _resolve(parse_raw(text), open_labels, {}, {}, "f")


# ---------------------------------------------------------------------------
# printing

_TERM, _SUMLEFT, _FUN, _ARG = range(4)


def pretty(t: Term) -> str:
    """Render with minimal parentheses; ``parse(pretty(t))`` is alpha-equal to ``t``.

    Bound names keep their hints unless that would capture or shadow, in which
    case a numeric suffix is added.  A choice directly under a binder is
    parenthesised for readability.
    """
    free_v = {n.hint for n in free_vars(t)}
    free_l = {a.hint for a in free_labels(t)}
    vshow: dict = {}
    lshow: dict = {}
    out: list[str] = []

    def pick(hint: str, taken_free: set, shown: dict) -> str:
        in_scope = set(shown.values())
        if hint not in taken_free and hint not in in_scope:
            return hint
        k = 1
        while f"{hint}{k}" in taken_free or f"{hint}{k}" in in_scope:
            k += 1
        return f"{hint}{k}"

    def go(s: Term, prec: int, rightmost: bool):
        if isinstance(s, Var):
            out.append(vshow.get(s.name, s.name.hint))
            return
        if isinstance(s, (Abs, Gen)):
            paren = not rightmost
            if paren:
                out.append("(")
            if isinstance(s, Abs):
                shown = pick(s.var.hint, free_v, vshow)
                old = vshow.get(s.var)
                vshow[s.var] = shown
                out.append("\\" + shown + ".")
            else:
                shown = pick(s.label.hint, free_l, lshow)
                old = lshow.get(s.label)
                lshow[s.label] = shown
                out.append("!" + shown + ".")
            if isinstance(s.body, Choice):
                out.append("(")
                go(s.body, _TERM, True)
                out.append(")")
            else:
                go(s.body, _TERM, True)
            key = s.var if isinstance(s, Abs) else s.label
            table = vshow if isinstance(s, Abs) else lshow
            if old is None:
                del table[key]
            else:
                table[key] = old
            if paren:
                out.append(")")
            return
        if isinstance(s, Choice):
            paren = prec != _TERM
            if paren:
                out.append("(")
                rightmost = True
            go(s.left, _SUMLEFT, False)
            out.append(" +[" + lshow.get(s.label, s.label.hint) + "] ")
            go(s.right, _TERM, rightmost)
            if paren:
                out.append(")")
            return
        # application
        paren = prec == _ARG
        if paren:
            out.append("(")
            rightmost = True
        if s.mark:
            out.append("(")
            go(s.fun, _TERM, True)
            out.append(")*")
        else:
            go(s.fun, _FUN, False)
        out.append(" ")
        go(s.arg, _ARG, rightmost)
        if paren:
            out.append(")")

    go(t, _TERM, True)
    return "".join(out)


def show_structure(t: Term) -> str:
    """Constructor-form rendering, e.g. ``Gen(a, Choice(a, Var(x), Var(y)))``."""
    if isinstance(t, Var):
        return f"Var({t.name.hint})"
    if isinstance(t, Abs):
        return f"Abs({t.var.hint}, {show_structure(t.body)})"
    if isinstance(t, App):
        star = ", *" if t.mark else ""
        return f"App({show_structure(t.fun)}, {show_structure(t.arg)}{star})"
    if isinstance(t, Choice):
        return f"Choice({t.label.hint}, {show_structure(t.left)}, {show_structure(t.right)})"
    return f"Gen({t.label.hint}, {show_structure(t.body)})"


def to_json(t: Term) -> dict:
    if isinstance(t, Var):
        return {"var": t.name.hint}
    if isinstance(t, Abs):
        return {"lam": t.var.hint, "body": to_json(t.body)}
    if isinstance(t, App):
        d = {"fun": to_json(t.fun), "arg": to_json(t.arg)}
        if t.mark:
            d["mark"] = t.mark
        return d
    if isinstance(t, Choice):
        return {"choice": t.label.hint, "left": to_json(t.left), "right": to_json(t.right)}
    return {"gen": t.label.hint, "body": to_json(t.body)}


# small constructors used by tests and scripts


def var(name: str) -> Var:
    return Var(Name(name))


def lam(name: str, body_fn) -> Abs:
    """``lam("x", lambda x: ...)`` builds an abstraction with a fresh binder."""
    n = Name(name, fresh_id())
    return Abs(n, body_fn(Var(n)))


def apps(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f
