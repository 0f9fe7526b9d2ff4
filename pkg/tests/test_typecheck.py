import pytest
from hypothesis import given, settings, strategies as st

from pel.errors import UnboundVariable, UnificationFailure
from pel.gen import TYPED_ENV, GenConfig, enumerate_terms, gen_term
from pel.harness import subject_reduction
from pel.syntax import parse
from pel.typecheck import (
    TArrow,
    TAtom,
    check,
    infer,
    is_instance,
    parse_env,
    parse_type,
    show_type,
    try_infer,
    types_equivalent,
)

from conftest import po


def test_parse_and_show_type():
    t = parse_type("o -> (o -> o) -> o")
    assert show_type(t) == "o -> (o -> o) -> o"
    assert parse_type("a ⇒ b") == parse_type("a -> b") == parse_type("a → b")
    assert parse_type("a -> b -> c") == TArrow(TAtom("a"), TArrow(TAtom("b"), TAtom("c")))


def test_parse_env():
    env = parse_env("x : o, f : o -> o")
    assert env == {"x": TAtom("o"), "f": TArrow(TAtom("o"), TAtom("o"))}
    assert parse_env("") == {}


def test_check_examples():
    assert check({}, parse(r"\x.x"), parse_type("a -> a"))
    env = {"x": TAtom("t"), "y": TAtom("t")}
    assert check(env, parse("!a.(x +[a] y)"), TAtom("t"))
    assert check(env, po("x +[a] y"), TAtom("t"))
    for ty in ("a", "a -> a", "(a -> a) -> a", "a -> b"):
        assert not check({}, parse(r"\x.x x"), parse_type(ty))


def test_check_is_not_too_generous():
    # \x.x has type o -> o but not a -> b
    assert check({}, parse(r"\x.x"), parse_type("o -> o"))
    assert not check({}, parse(r"\x.x"), parse_type("a -> b"))


def test_infer_examples():
    assert show_type(infer({}, parse(r"\x.\y.x"))) == "a -> b -> a"
    assert show_type(infer({}, parse(r"!f.\x.(x +[f] \y.y)"))) == "(a -> a) -> a -> a"
    with pytest.raises(UnificationFailure) as e:
        infer({}, parse(r"\x.x x"))
    assert e.value.reason == "occurs check"
    with pytest.raises(UnboundVariable):
        infer({}, parse("z"))


def test_infer_located_mismatch():
    env = {"x": TAtom("o"), "f": TArrow(TAtom("o"), TAtom("o"))}
    with pytest.raises(UnificationFailure) as e:
        infer(env, parse(r"!a.(f +[a] x)"))
    assert e.value.reason == "type mismatch"
    assert "root" in str(e.value.position)


def test_shadowing():
    env = {"x": TAtom("o")}
    assert show_type(infer(env, parse(r"\x.x"))) == "a -> a"


def test_is_instance():
    g = infer({}, parse(r"\x.x"))
    assert is_instance(parse_type("o -> o"), g)
    assert not is_instance(parse_type("a -> b"), g)
    assert types_equivalent(infer({}, parse(r"\x.x")), infer({}, parse(r"\y.y")))


def _types(depth):
    atoms = [TAtom("o"), TAtom("p")]
    if depth == 0:
        return atoms
    smaller = _types(depth - 1)
    return atoms + [TArrow(a, b) for a in smaller for b in smaller]


def test_infer_check_agreement_bounded():
    types = _types(2)
    for t in enumerate_terms(5, free=()):
        ty = try_infer({}, t)
        checked = [s for s in types if check({}, t, s)]
        if ty is None:
            assert checked == [], t
        else:
            assert check({}, t, ty)
            # the checkable types are exactly the instances of the principal type
            assert checked == [s for s in types if is_instance(s, ty)]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_typed_generator(seed):
    t = gen_term(GenConfig(seed=seed, typed_only=True))
    ty = infer(TYPED_ENV, t)
    assert check(TYPED_ENV, t, ty)


def test_subject_reduction_instance_example():
    # the reduct's principal type is more general than the redex's
    t = parse(r"\x.\y.(\z.y) (x y)")
    assert show_type(infer({}, t)) == "(a -> b) -> a -> a"
    assert show_type(infer({}, parse(r"\x.\y.y"))) == "a -> b -> b"
    assert subject_reduction(t, 0) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_subject_reduction(seed):
    t = gen_term(GenConfig(seed=seed, max_size=20, typed_only=True))
    assert subject_reduction(t, seed) is None
