import random

import pytest
from hypothesis import given, settings, strategies as st

from pel.beta import (
    Strategy,
    beta_redexes,
    complete_step,
    count_marks,
    full_labeling,
    labeled_p_normalize,
    labeled_p_step,
    labeled_reduct,
    mark_positions,
    marked_positions,
    markings,
    reduce,
    reduce_random,
    step_beta,
)
from pel.errors import NotARedex, StepBudgetExceeded
from pel.gen import GenConfig, gen_term
from pel.goldens import load_term
from pel.perm import p_normalize, step_perm
from pel.syntax import App, Abs, alpha_eq, erase_marks, parse, pretty, subterms


def test_step_beta():
    assert pretty(step_beta(parse(r"(\x.x) y"), ())) == "y"
    assert pretty(step_beta(parse(r"(\x.y) (z (+) w)"), ())) == "y"
    with pytest.raises(NotARedex):
        step_beta(parse("x y"), ())


def test_step_beta_duplicates_generators():
    t = parse(r"(\x.g x x) (!a.(u +[a] v))")
    r = step_beta(t, ())
    assert alpha_eq(r, parse("g (!a.(u +[a] v)) (!b.(u +[b] v))"))
    assert r.fun.arg.label != r.arg.label


def test_labeled_reduct():
    lt = parse(r"(\x.x x)* ((\y.y)* z)")
    assert pretty(labeled_reduct(lt)) == "z z"
    # oracle: contract the inner redex, then the outer one
    inner = step_beta(erase_marks(lt), ("arg",))
    assert alpha_eq(step_beta(inner, ()), labeled_reduct(lt))
    assert pretty(labeled_reduct(parse(r"(\x.x) y"))) == r"(\x.x) y"
    assert pretty(labeled_reduct(parse(r"(\x.y)* z"))) == "y"


def test_labeled_reduct_only_keeps_other_marks():
    lt = mark_positions(parse(r"(\x.x x) ((\y.y) z)"), [()], 1)
    lt = mark_positions(lt, [("arg",)], 2)
    r = labeled_reduct(lt, only=1)
    assert count_marks(r, only=2) == 2


def test_full_labeling():
    lt = full_labeling(parse(r"(\x.x) ((\y.y) z)"))
    assert marked_positions(lt) == [(), ("arg",)]
    assert count_marks(full_labeling(parse("x y"))) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_full_labeling_counts_redexes(seed):
    t = gen_term(GenConfig(seed=seed, max_size=20))
    scan = sum(1 for _, s in subterms(t) if isinstance(s, App) and isinstance(s.fun, Abs))
    assert count_marks(full_labeling(t)) == scan == len(beta_redexes(t))


def test_labeled_macro_steps():
    r = labeled_p_step(parse(r"!a.((\x.(u +[a] v))* w)"))
    assert pretty(r) == r"!a.((\x.u)* w +[a] (\x.v)* w)"
    r = labeled_p_step(parse(r"(\x.!a.u)* w"))
    assert pretty(r) == r"!a.(\x.u)* w"


def test_labeled_step_without_marks_is_perm():
    for seed in range(50):
        t = gen_term(GenConfig(seed=seed, max_size=15))
        s = step_perm(t)
        r = labeled_p_step(t)
        assert (s is None) == (r is None)
        if s is not None:
            assert alpha_eq(s.after, r)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_labeled_normal_forms_match(seed):
    t = full_labeling(gen_term(GenConfig(seed=seed, max_size=15)))
    ln, _ = labeled_p_normalize(t)
    assert alpha_eq(p_normalize(labeled_reduct(ln))[0], p_normalize(labeled_reduct(t))[0])
    assert alpha_eq(erase_marks(ln), p_normalize(erase_marks(t))[0])


def test_complete_step_golden():
    nf, _ = reduce(load_term("cbv_intro"), Strategy.COMPLETE)
    assert alpha_eq(nf, parse(r"\t.\f.t"))


def test_complete_step_empty_marking():
    t = parse(r"x (y (+) z)")
    assert alpha_eq(complete_step(t, t), t)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_parallel_beta_is_beta_star(seed):
    t = gen_term(GenConfig(seed=seed, max_size=10))
    for lt in list(markings(t))[:8]:
        target = labeled_reduct(lt)
        # contract marked redexes one at a time, innermost first
        u = lt
        while marked_positions(u):
            pos = max(marked_positions(u), key=len)
            node = u
            for sel in pos:
                node = getattr(node, sel)
            from pel.syntax import replace_at, substitute

            u = replace_at(u, pos, substitute(node.fun.body, node.fun.var, node.arg))
        assert alpha_eq(erase_marks(u), target)


def test_reduce_strategies_agree_on_golden():
    t = load_term("cbv_intro")
    ends = {s: reduce(t, s)[0] for s in (Strategy.FULL_LEFTMOST, Strategy.COMPLETE)}
    assert all(alpha_eq(v, parse(r"\t.\f.t")) for v in ends.values())


def test_reduce_perm_and_beta_only():
    t = parse(r"(\x.x) (!a.(y +[a] y))")
    assert pretty(reduce(t, Strategy.PERM_ONLY)[0]) == r"(\x.x) y"
    assert alpha_eq(reduce(t, Strategy.LEFTMOST_BETA)[0], parse("!a.(y +[a] y)"))
    assert pretty(reduce(t, Strategy.FULL_LEFTMOST)[0]) == "y"


@pytest.mark.parametrize("strategy", ["beta", "full", "complete"])
def test_omega_diverges(strategy):
    with pytest.raises(StepBudgetExceeded) as e:
        reduce(load_term("omega"), strategy, budget=200)
    assert e.value.term is not None


def test_reduce_random_matches_leftmost_on_typed():
    cfg = GenConfig(max_size=20, typed_only=True)
    for seed in range(40):
        t = gen_term(cfg.with_seed(seed))
        a, _ = reduce_random(t, random.Random(seed))
        b, _ = reduce(t, Strategy.FULL_LEFTMOST, keep_trace=False)
        assert alpha_eq(a, b)
