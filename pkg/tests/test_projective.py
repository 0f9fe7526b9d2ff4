from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pel.beta import Strategy, reduce
from pel.errors import NotNormalForm, StepBudgetExceeded
from pel.gen import GenConfig, gen_term
from pel.goldens import load_term
from pel.harness import Skip, distribution_coherence, projective_simulation
from pel.perm import p_normalize
from pel.projective import (
    AppliedTo,
    Distribution,
    HeadContext,
    Lambda,
    dist_of_normal_form,
    evaluate_dist,
    pi_step,
    project,
    split_head,
)
from pel.syntax import Label, Name, Var, alpha_eq, parse, pretty

from conftest import po

A = Label("a")


def test_project():
    assert pretty(project(po("x +[a] y"), A, 0)) == "x"
    assert pretty(project(po("x +[a] y"), A, 1)) == "y"
    t = parse("!a.(x +[a] y)")
    assert alpha_eq(project(t, t.label, 1), t)
    assert pretty(project(parse("x"), A, 0)) == "x"
    assert pretty(project(po(r"\z.(x +[a] y) (z +[a] w)"), A, 1)) == r"\z.y w"


def test_project_stops_at_rebinding():
    # an inner !a rebinding the same label is left alone
    from pel.syntax import Choice, Gen

    inner = Gen(A, Choice(A, Var(Name("u")), Var(Name("v"))))
    outer = Choice(A, inner, Var(Name("y")))
    assert project(outer, A, 0) is inner


def test_split_head():
    h, a, body = split_head(parse("!a.(x +[a] y)"))
    assert h == HeadContext(()) and pretty(body) == "x +[a] y"
    h, a, body = split_head(parse("(!a.x) y z"))
    assert str(h) == "[] y z" and pretty(body) == "x"
    assert all(isinstance(f, AppliedTo) for f in h.frames)
    assert split_head(parse("x y")) is None
    assert split_head(parse(r"\x.x (!a.(y +[a] z))")) is None


def test_split_head_under_applied_lambda():
    # the grammar H ::= [] | \x.H | H N reaches the body of an applied lambda
    h, a, body = split_head(parse(r"(\x.!a.(x +[a] y)) z"))
    assert [type(f) for f in h.frames] == [AppliedTo, Lambda]
    assert pretty(h.plug(Var(Name("[]")))) == r"(\x.[]) z"


def test_pi_step():
    left, right = pi_step(parse("!a.(x +[a] y)"))
    assert (pretty(left), pretty(right)) == ("x", "y")
    left, right = pi_step(parse("!a.x"))
    assert alpha_eq(left, right) and pretty(left) == "x"
    assert pi_step(parse("x y")) is None
    left, right = pi_step(parse("(!a.(f +[a] g)) y"))
    assert (pretty(left), pretty(right)) == ("f y", "g y")


def _d(**kv):
    return Distribution((parse(k), Fraction(v)) for k, v in kv.items())


def test_evaluate_dist_examples():
    assert evaluate_dist(parse("x (+) y")) == _d(x="1/2", y="1/2")
    assert evaluate_dist(parse("!a.!b.((x +[a] y) +[b] z)")) == _d(x="1/4", y="1/4", z="1/2")
    assert evaluate_dist(parse("x")) == _d(x=1)


def _enumerate_assignments(t):
    """Oracle: fix every label by a coin value, project, count outcomes."""
    from itertools import product

    from pel.syntax import label_order

    labels = label_order(t).labels
    out = Distribution()
    for bits in product((0, 1), repeat=len(labels)):
        u = t
        for a, b in zip(labels, bits):
            u = _strip(u, a, b)
        out.add(u, Fraction(1, 2 ** len(labels)))
    return out


def _strip(t, a, b):
    from pel.syntax import Abs, App, Choice, Gen

    if isinstance(t, Gen):
        return _strip(project(t.body, a, b), a, b) if t.label == a else Gen(t.label, _strip(t.body, a, b))
    if isinstance(t, Choice):
        return Choice(t.label, _strip(t.left, a, b), _strip(t.right, a, b))
    if isinstance(t, Abs):
        return Abs(t.var, _strip(t.body, a, b))
    if isinstance(t, App):
        return App(_strip(t.fun, a, b), _strip(t.arg, a, b))
    return t


def test_enumeration_oracle():
    t = parse("!a.!b.((x +[a] y) +[b] z)")
    assert _enumerate_assignments(t) == evaluate_dist(t)
    nf = parse("(x (+) z) (+) (y (+) z)")
    assert _enumerate_assignments(nf) == dist_of_normal_form(nf)


def test_dist_of_normal_form():
    assert dist_of_normal_form(parse("(x (+) z) (+) (y (+) z)")) == _d(x="1/4", y="1/4", z="1/2")
    t = parse("f (y (+) z) (y (+) z)")
    d = dist_of_normal_form(t)
    assert len(d) == 1 and d.prob(t) == 1
    assert dist_of_normal_form(parse("x")) == _d(x=1)
    with pytest.raises(NotNormalForm):
        dist_of_normal_form(parse(r"(\x.x) y"))


def test_distribution_table():
    d = evaluate_dist(parse("!a.!b.((x +[a] y) +[b] z)"))
    assert d.table() == "1/2\tz\n1/4\tx\n1/4\ty"
    assert d.records()[0] == {"prob": "1/2", "term": "z"}
    assert d.total() == 1


def test_golden_distributions():
    t = parse(r"\t.\f.t")
    f = parse(r"\t.\f.f")
    assert evaluate_dist(load_term("cbn_intro")) == Distribution([(t, Fraction(1, 2)), (f, Fraction(1, 2))])
    assert evaluate_dist(load_term("cbv_intro")) == Distribution([(t, Fraction(1))])


def test_budget_reports_residual():
    with pytest.raises(StepBudgetExceeded) as e:
        evaluate_dist(parse(r"y (+) (\x.x x)(\x.x x)"), budget=50)
    assert e.value.residual == Fraction(1, 2)


def test_projective_strategy():
    nf, trace = reduce(load_term("cbn_intro"), Strategy.PROJECTIVE)
    assert dist_of_normal_form(nf) == evaluate_dist(load_term("cbn_intro"))
    assert any(s.rule == "pi" for s in trace)


def test_simulation_examples():
    x, y, w = (Var(Name(n)) for n in "xyw")
    a = Label("a", 12345)
    h = HeadContext((AppliedTo(w),))
    from pel.syntax import Choice, Gen

    assert projective_simulation(h, a, Choice(a, x, y)) is None
    lhs = p_normalize(h.plug(Gen(a, Choice(a, x, y))))[0]
    assert alpha_eq(lhs, p_normalize(parse("(x w) (+) (y w)"))[0])
    # a not free: boxVoid reaches H[N]
    assert projective_simulation(h, a, x) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_mass_and_coherence(seed):
    t = gen_term(GenConfig(seed=seed, max_size=15, typed_only=True))
    d = evaluate_dist(t)
    assert d.total() == 1
    try:
        assert distribution_coherence(t) is None
    except Skip:
        pass
