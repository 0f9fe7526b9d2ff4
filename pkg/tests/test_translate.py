import random

import pytest
from hypothesis import given, settings, strategies as st

from pel.errors import LabelJudgmentViolation, ParseError
from pel.gen import gen_source
from pel.goldens import load_source, load_term
from pel.harness import cbv_simulation
from pel.syntax import Gen, Label, alpha_eq, free_labels, is_label_closed, label_judgment, parse, pretty
from pel.translate import (
    SourceBeta,
    SourceSplit,
    count_sums,
    label_closure,
    parse_source,
    show_source,
    source_alpha_eq,
    source_step_v,
    translate_cbn,
    translate_cbv,
    translate_cbv_open,
    witness_order,
)

from conftest import po


def test_parse_source_rejects_labels():
    with pytest.raises(ParseError):
        parse_source("!a.(x +[a] y)")
    with pytest.raises(ParseError):
        parse_source("x +[a] y")
    assert show_source(parse_source(r"(\x.x) (y (+) z)")) == r"(\x.x) (y (+) z)"


def test_cbn():
    assert alpha_eq(translate_cbn(parse_source("x (+) y")), parse("!a.(x +[a] y)"))
    assert pretty(translate_cbn(parse_source("x"))) == "x"
    assert alpha_eq(translate_cbn(load_source("intro")), load_term("cbn_intro"))


def test_cbv_open():
    i = translate_cbv_open(parse_source("x (+) y"))
    assert [a.hint for a in i.theta] == ["a"]
    assert alpha_eq(label_closure(i.theta, i.body), parse("!a.(x +[a] y)"))
    assert pretty(i.body) == "x +[a] y"
    i = translate_cbv_open(parse_source(r"(\x.f x x)(y (+) z)"))
    assert [a.hint for a in i.theta] == ["a"]
    assert pretty(i.body) == r"(\x.f x x) (y +[a] z)"
    assert label_judgment(i.theta, i.body)
    i = translate_cbv_open(parse_source("x"))
    assert i.theta == () and pretty(i.body) == "x"


def test_cbv_open_theta_order():
    # application: theta2 . theta1 ; sum: theta2 . theta1 . a
    i = translate_cbv_open(parse_source("(x (+) y) (z (+) w)"))
    assert [a.hint for a in i.theta] == ["b", "a"]
    i = translate_cbv_open(parse_source("(x (+) y) (+) (z (+) w)"))
    assert [a.hint for a in i.theta] == ["b", "a", "c"]
    assert len(i.theta) == count_sums(parse_source("(x (+) y) (+) (z (+) w)"))


def test_label_closure():
    a, b = Label("a"), Label("b")
    assert alpha_eq(label_closure((a,), po("x +[a] y")), parse("!a.(x +[a] y)"))
    t = parse("x y")
    assert label_closure((), t) is t
    body = po("x +[a] (y +[b] z)")
    closed = label_closure((b, a), body)
    assert alpha_eq(closed, parse("!a.!b.(x +[a] (y +[b] z))"))
    assert isinstance(closed, Gen) and closed.label == a and closed.body.label == b
    with pytest.raises(LabelJudgmentViolation):
        label_closure((a,), body)


def test_cbv():
    assert alpha_eq(translate_cbv(load_source("intro")), load_term("cbv_intro"))
    assert pretty(translate_cbv(parse_source("x"))) == "x"
    assert alpha_eq(
        translate_cbv(parse_source(r"(\x.f x x)(y (+) z)")),
        parse(r"!a.((\x.f x x)(y +[a] z))"),
    )


def test_source_step_v():
    s = source_step_v(parse_source(r"(\x.x) (\y.y)"))
    assert isinstance(s, SourceBeta) and show_source(s.result) == r"\y.y"
    s = source_step_v(parse_source(r"(\x.x) (y (+) z)"))
    assert isinstance(s, SourceSplit)
    assert source_alpha_eq(s.left, parse_source(r"(\x.x) y"))
    assert source_alpha_eq(s.right, parse_source(r"(\x.x) z"))
    assert source_step_v(parse_source("x")) is None


def test_witness_order():
    a, b, c = Label("a"), Label("b"), Label("c")
    assert witness_order((a, b, c), a) == (b, c, a)
    assert witness_order((a, b, c), c) == (a, b, c)


def test_cbv_simulation_golden():
    assert cbv_simulation(load_source("intro")) is None


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 14))
def test_open_interpretation_judgment(seed, n):
    src = gen_source(random.Random(seed), n)
    i = translate_cbv_open(src)
    assert label_judgment(i.theta, i.body)
    assert free_labels(i.body) <= set(i.theta)
    assert len(i.theta) == count_sums(src)
    assert is_label_closed(translate_cbv(src))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 14))
def test_sum_free_agreement(seed, n):
    src = gen_source(random.Random(seed), n, max_sums=0)
    assert count_sums(src) == 0
    assert alpha_eq(translate_cbn(src), translate_cbv(src))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 12))
def test_cbv_simulation(seed, n):
    assert cbv_simulation(gen_source(random.Random(seed), n)) is None
