"""Executable meta-theory: randomized and exhaustive property checks.

Each property draws one instance per seed (``cfg.seed + i`` for trial i),
so any reported failure replays from its seed alone.  Failing terms are
shrunk greedily before they are reported.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .beta import (
    Strategy,
    complete_step,
    count_marks,
    erase_marks,
    full_labeling,
    labeled_p_normalize,
    labeled_reduct,
    markings,
    one_step_reducts_full,
    reduce,
    reduce_random,
)
from .errors import StepBudgetExceeded
from .gen import GenConfig, TYPED_ENV, enumerate_terms, gen_open, gen_source, gen_term, shrink
from .perm import (
    DEFAULT_MAX_STEPS,
    N0_NORMAL,
    NEITHER,
    classify_normal_form,
    one_step_reducts,
    p_normalize,
)
from .projective import AppliedTo, HeadContext, Lambda, dist_of_normal_form, evaluate_dist, project
from .rpo import certify_perm_step
from .syntax import (
    App,
    Choice,
    Gen,
    Label,
    Name,
    Term,
    Var,
    alpha_eq,
    fresh_id,
    free_labels,
    is_label_closed,
    is_well_labeled,
    label_judgment,
    parse,
    pretty,
    refresh,
)
from .translate import (
    cbv_split_target,
    label_closure,
    lift_label,
    show_source,
    sum_label_at,
    sum_steps,
    translate_cbn,
    translate_cbv,
    translate_cbv_open,
    witness_order,
)
from .typecheck import is_instance, try_infer


class Skip(Exception):
    """The instance could not be decided within budget; not a failure."""


@dataclass
class FailureCase:
    seed: int
    term: str
    detail: str
    shrunk: Optional[str] = None

    def to_dict(self) -> dict:
        return {"seed": self.seed, "term": self.term, "detail": self.detail, "shrunk": self.shrunk}


@dataclass
class PropertyReport:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)
    skipped: int = 0
    elapsed: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f", {self.skipped} skipped" if self.skipped else ""
        return (
            f"{status} {self.name}: {self.trials} trials, {len(self.failures)} failures"
            f"{extra} ({self.elapsed:.1f}s)"
        )

    def to_dict(self) -> dict:
        return {
            "property": self.name,
            "trials": self.trials,
            "failures": [f.to_dict() for f in self.failures],
            "skipped": self.skipped,
            "elapsed": round(self.elapsed, 3),
            "notes": list(self.notes),
            "ok": self.ok,
        }

    def merge(self, other: "PropertyReport") -> "PropertyReport":
        return PropertyReport(
            self.name,
            self.trials + other.trials,
            self.failures + other.failures,
            self.skipped + other.skipped,
            self.elapsed + other.elapsed,
            self.notes + other.notes,
        )


# ---------------------------------------------------------------------------
# per-term checks; each returns None on success or a failure description


def perm_sn_certified(t: Term, budget: int = DEFAULT_MAX_STEPS) -> Optional[str]:
    try:
        nf, trace = p_normalize(t, budget)
    except StepBudgetExceeded:
        return f"p-normalization exceeded {budget} steps"
    for step in trace:
        cert = certify_perm_step(step)
        if not cert.ok:
            return f"{step.rule} @ {step.position}: {cert.reason}"
        if not is_label_closed(step.after) or not is_well_labeled(step.after):
            return f"{step.rule} broke label-closedness or well-labeledness"
    if classify_normal_form(nf) == NEITHER:
        return "p-normal form outside the normal-form grammar"
    return None


def local_confluence(t: Term, budget: int = DEFAULT_MAX_STEPS) -> Optional[str]:
    try:
        reducts = one_step_reducts(t)
        if len(reducts) < 2:
            return None
        first = None
        for step in reducts:
            nf = p_normalize(step.after, budget, keep_trace=False)[0]
            if first is None:
                first = (step, nf)
            elif not alpha_eq(first[1], nf):
                return (
                    f"peak {first[0].rule}@{first[0].position} / {step.rule}@{step.position}"
                    f" joins at {pretty(first[1])} vs {pretty(nf)}"
                )
    except StepBudgetExceeded:
        raise Skip
    return None


def perm_strategy_independence(t: Term, seed: int, strategies: int = 100, budget: int = DEFAULT_MAX_STEPS) -> Optional[str]:
    """p-normalize along random rule/position choices; all endpoints must agree."""
    try:
        ref = p_normalize(t, budget, keep_trace=False)[0]
        rng = random.Random(seed)
        for _ in range(strategies):
            nf, _ = reduce_random(t, rng, budget, beta=False)
            if not alpha_eq(nf, ref):
                return f"random strategy reached {pretty(nf)}, leftmost reached {pretty(ref)}"
    except StepBudgetExceeded:
        raise Skip
    return None


def _close_complete(p: Term, target: Term, witness: Optional[Term], search_cap: int) -> bool:
    """Is there a complete step from ``p`` to ``target``?"""
    if witness is not None and alpha_eq(erase_marks(witness), p):
        if alpha_eq(complete_step(p, witness), target):
            return True
    for i, m in enumerate(markings(p)):
        if i >= search_cap:
            break
        if alpha_eq(complete_step(p, m), target):
            return True
    return False


def _residual_witness(n: Term, marking: Term) -> Term:
    """Complete step along ``marking`` keeping the other redexes marked (mark 2)."""

    def relabel(full, chosen):
        # mark 1 on the chosen redexes, mark 2 on all others
        if isinstance(full, Var):
            return full
        if isinstance(full, App):
            m = 0
            if full.mark:
                m = 1 if chosen.mark else 2
            return App(relabel(full.fun, chosen.fun), relabel(full.arg, chosen.arg), m)
        if isinstance(full, Choice):
            return Choice(full.label, relabel(full.left, chosen.left), relabel(full.right, chosen.right))
        if isinstance(full, Gen):
            return Gen(full.label, relabel(full.body, chosen.body))
        return type(full)(full.var, relabel(full.body, chosen.body))

    both = relabel(full_labeling(n), marking)
    return labeled_p_normalize(labeled_reduct(both, only=1))[0]


def complete_diamond(n: Term, marks: Optional[list] = None, search_cap: int = 1 << 12) -> Optional[str]:
    """Every complete step from ``n`` closes in one complete step at the full development."""
    try:
        target = complete_step(n, full_labeling(n))
        for m in marks if marks is not None else markings(n):
            p = complete_step(n, m)
            witness = _residual_witness(n, m)
            if not _close_complete(p, target, witness, search_cap):
                return f"step with {count_marks(m)} marks to {pretty(p)} does not reach {pretty(target)}"
    except StepBudgetExceeded:
        raise Skip
    return None


def church_rosser(t: Term, seed: int, budget: int = DEFAULT_MAX_STEPS) -> Optional[str]:
    try:
        a, _ = reduce_random(t, random.Random(2 * seed), budget)
        b, _ = reduce_random(t, random.Random(2 * seed + 1), budget)
    except StepBudgetExceeded:
        raise Skip
    if not alpha_eq(a, b):
        return f"{pretty(a)} vs {pretty(b)}"
    return None


def typed_sn(t: Term, seed: int, budget: int = 10**6) -> Optional[str]:
    try:
        nf, _ = reduce_random(t, random.Random(seed), budget)
    except StepBudgetExceeded:
        return f"no normal form within {budget} steps"
    if classify_normal_form(nf) != N0_NORMAL:
        return f"endpoint {pretty(nf)} is not a normal form"
    return None


def subject_reduction(t: Term, seed: int) -> Optional[str]:
    ty = try_infer(TYPED_ENV, t)
    if ty is None:
        return "generated term is untypable"
    steps = one_step_reducts_full(t)
    if not steps:
        return None
    step = random.Random(seed).choice(steps)
    ty2 = try_infer(TYPED_ENV, step.after)
    if ty2 is None:
        return f"{step.rule} step loses typability: {pretty(step.after)}"
    if not is_instance(ty, ty2):
        return f"{step.rule} step changes the type from {ty} to {ty2}"
    return None


def distribution_coherence(t: Term, budget: int = DEFAULT_MAX_STEPS) -> Optional[str]:
    try:
        d1 = evaluate_dist(t, budget)
        nf = reduce(t, Strategy.FULL_LEFTMOST, budget, keep_trace=False)[0]
    except StepBudgetExceeded:
        raise Skip
    d2 = dist_of_normal_form(nf)
    if d1.total() != 1:
        return f"mass {d1.total()}"
    if d1 != d2:
        return f"{d1!r} vs {d2!r}"
    return None


def projective_simulation(h: HeadContext, a: Label, n: Term, budget: int = DEFAULT_MAX_STEPS) -> Optional[str]:
    """``H[!a.N]`` and the projected sum (or ``H[N]``) share a p-normal form."""
    t = h.plug(Gen(a, n))
    if a in free_labels(n):
        c = Label("c", fresh_id())
        expected = Gen(c, Choice(c, h.plug(project(n, a, 0)), refresh(h.plug(project(n, a, 1)))))
    else:
        expected = h.plug(n)
    try:
        lhs = p_normalize(t, budget, keep_trace=False)[0]
        rhs = p_normalize(expected, budget, keep_trace=False)[0]
        if not alpha_eq(lhs, rhs):
            return f"{pretty(lhs)} vs {pretty(rhs)}"
        # inner lemma: a smallest in N gives N ->> proj0 +a proj1
        if a in free_labels(n):
            inner = p_normalize(n, budget, theta=(a,), keep_trace=False)[0]
            split = p_normalize(Choice(a, project(n, a, 0), refresh(project(n, a, 1))), budget, theta=(a,), keep_trace=False)[0]
            if not alpha_eq(inner, split):
                return f"inner lemma: {pretty(inner)} vs {pretty(split)}"
    except StepBudgetExceeded:
        raise Skip
    return None


def cbv_simulation(src) -> Optional[str]:
    """For every sum in ``src`` the witness ordering lifts its choice to the top."""
    interp = translate_cbv_open(src)
    if not label_judgment(interp.theta, interp.body):
        return "open interpretation violates the label judgment"
    for step in sum_steps(src):
        a = sum_label_at(interp, src, step.position)
        start = label_closure(witness_order(interp.theta, a), interp.body)
        target = cbv_split_target(step)
        end, _ = lift_label(start, a)
        if not alpha_eq(end, target):
            return f"sum at {step.position}: lifted to {pretty(end)}, expected {pretty(target)}"
        if not alpha_eq(p_normalize(start, keep_trace=False)[0], p_normalize(target, keep_trace=False)[0]):
            return f"sum at {step.position}: p-normal forms differ"
    return None


def roundtrip(t: Term) -> Optional[str]:
    text = pretty(t)
    back = parse(text)
    return None if alpha_eq(back, t) else f"printed as {text}"


# ---------------------------------------------------------------------------
# properties


@dataclass(frozen=True)
class Property:
    name: str
    description: str
    defaults: dict
    generate: Callable[[GenConfig], Any]
    check: Callable[[Any, int], Optional[str]]
    show: Callable[[Any], str] = pretty
    shrinkable: bool = True


def _gen_projective(cfg: GenConfig):
    rng = random.Random(cfg.seed)
    frames = []
    bound: list = []
    for _ in range(rng.randint(0, 3)):
        if rng.random() < 0.4:
            x = Name(rng.choice("pqr"), fresh_id())
            frames.append(Lambda(x))
            bound.append(x)
        else:
            arg = gen_term(GenConfig(rng.randrange(1 << 30), max_size=5, max_labels=1, var_pool=cfg.var_pool))
            frames.append(AppliedTo(arg))
    a = Label("a", fresh_id())
    n = gen_open(rng, rng.randint(1, max(1, cfg.max_size)), cfg, tuple(bound), (a,))
    return HeadContext(tuple(frames)), a, n


def _show_projective(inst) -> str:
    h, a, n = inst
    return f"H = {h}, N = {pretty(Gen(a, n))}"


def _gen_source(cfg: GenConfig):
    rng = random.Random(cfg.seed)
    return gen_source(rng, rng.randint(3, max(3, cfg.max_size)), cfg.max_labels, cfg.var_pool)


def _diamond_marks(t: Term, seed: int) -> list:
    """Two sampled markings (the random part of the diamond check)."""
    rng = random.Random(seed)
    from .beta import beta_redexes, mark_positions

    pos = beta_redexes(t)
    out = []
    for _ in range(2):
        out.append(mark_positions(t, [p for p in pos if rng.random() < 0.5]))
    return out


PROPERTIES: dict[str, Property] = {}


def _register(p: Property) -> Property:
    PROPERTIES[p.name] = p
    return p


_register(Property(
    "perm-sn",
    "every p-step of a random term decreases in the recursive path ordering",
    {"max_size": 25, "max_labels": 4, "trials": 10_000},
    gen_term,
    lambda t, seed: perm_sn_certified(t),
))
_register(Property(
    "local-confluence",
    "all one-step p-peaks join at a common p-normal form",
    {"max_size": 25, "max_labels": 4, "trials": 1_000},
    gen_term,
    lambda t, seed: local_confluence(t),
))
_register(Property(
    "perm-strategies",
    "random p-strategies reach the same p-normal form",
    {"max_size": 15, "max_labels": 3, "trials": 100},
    gen_term,
    lambda t, seed: perm_strategy_independence(t, seed),
))
_register(Property(
    "diamond",
    "two complete steps close in one complete step",
    {"max_size": 20, "max_labels": 3, "typed_only": True, "trials": 500},
    gen_term,
    lambda t, seed: complete_diamond(t, _diamond_marks(t, seed)),
))
_register(Property(
    "church-rosser",
    "two random full reductions of a typed term end alpha-equal",
    {"max_size": 25, "max_labels": 4, "typed_only": True, "trials": 300},
    gen_term,
    church_rosser,
))
_register(Property(
    "typed-sn",
    "typed terms normalize under random full reduction",
    {"max_size": 25, "max_labels": 4, "typed_only": True, "trials": 300},
    gen_term,
    typed_sn,
))
_register(Property(
    "subject-reduction",
    "a single step keeps a typed term typable at a type it instantiates",
    {"max_size": 25, "max_labels": 4, "typed_only": True, "trials": 300},
    gen_term,
    subject_reduction,
))
_register(Property(
    "dist-coherence",
    "projective evaluation agrees with the normal form's decision tree",
    {"max_size": 20, "max_labels": 3, "typed_only": True, "trials": 300},
    gen_term,
    lambda t, seed: distribution_coherence(t),
))
_register(Property(
    "projective-simulation",
    "H[!a.N] and the projected sum share a p-normal form",
    {"max_size": 12, "max_labels": 3, "trials": 500},
    _gen_projective,
    lambda inst, seed: projective_simulation(*inst),
    _show_projective,
    shrinkable=False,
))
_register(Property(
    "cbv-simulation",
    "the witness label ordering lifts a call-by-value sum to the top",
    {"max_size": 15, "max_labels": 4, "trials": 300},
    _gen_source,
    lambda src, seed: cbv_simulation(src),
    show_source,
    shrinkable=False,
))
_register(Property(
    "roundtrip",
    "printing then parsing gives an alpha-equal term",
    {"max_size": 25, "max_labels": 4, "trials": 1_000},
    gen_term,
    lambda t, seed: roundtrip(t),
))


def config_for(name: str, seed: int = 0, **overrides) -> tuple[GenConfig, int]:
    """The default generator configuration and trial count of a property."""
    prop = PROPERTIES[name]
    opts = dict(prop.defaults)
    opts.update({k: v for k, v in overrides.items() if v is not None})
    trials = opts.pop("trials")
    return GenConfig(seed=seed, **opts), trials


def _trial(name: str, cfg: GenConfig) -> Optional[tuple]:
    """Run one seed; returns None, ("skip",) or ("fail", term text, detail, shrunk)."""
    prop = PROPERTIES[name]
    inst = prop.generate(cfg)
    try:
        detail = prop.check(inst, cfg.seed)
    except Skip:
        return ("skip",)
    if detail is None:
        return None
    shrunk = None
    if prop.shrinkable:

        def fails(t):
            try:
                return prop.check(t, cfg.seed) is not None
            except Skip:
                return False

        small = shrink(inst, fails)
        if small is not inst:
            shrunk = prop.show(small)
    return ("fail", prop.show(inst), detail, shrunk)


def _chunk(args: tuple) -> list:
    name, cfgs = args
    return [_trial(name, c) for c in cfgs]


def run_property(name: str, cfg: GenConfig, trials: int, workers: int = 1) -> PropertyReport:
    """Run ``trials`` seeded instances of a registered property."""
    start = time.perf_counter()
    cfgs = [cfg.with_seed(cfg.seed + i) for i in range(trials)]
    if workers > 1 and trials > 1:
        size_ = max(1, trials // (workers * 4))
        chunks = [cfgs[i : i + size_] for i in range(0, trials, size_)]
        with ProcessPoolExecutor(workers) as pool:
            results = [r for part in pool.map(_chunk, [(name, c) for c in chunks]) for r in part]
    else:
        results = [_trial(name, c) for c in cfgs]
    report = PropertyReport(name, trials)
    for c, r in zip(cfgs, results):
        if r is None:
            continue
        if r[0] == "skip":
            report.skipped += 1
        else:
            report.failures.append(FailureCase(c.seed, r[1], r[2], r[3]))
    report.elapsed = time.perf_counter() - start
    return report


# ---------------------------------------------------------------------------
# named entry points


def check_perm_sn_certified(cfg: GenConfig, trials: int, workers: int = 1) -> PropertyReport:
    return run_property("perm-sn", cfg, trials, workers)


def check_local_confluence(cfg: GenConfig, trials: int, workers: int = 1) -> PropertyReport:
    """Random peaks plus a fixed set of terms that hit the tricky critical pairs."""
    report = run_property("local-confluence", cfg, trials, workers)
    start = time.perf_counter()
    for i, text in enumerate(CRITICAL_PEAKS):
        t = parse(text)
        report.trials += 1
        try:
            detail = local_confluence(t)
        except Skip:
            report.skipped += 1
            continue
        if detail is not None:
            report.failures.append(FailureCase(-1 - i, text, detail))
    report.elapsed += time.perf_counter() - start
    return report


# Terms whose one-step peaks include the critical pairs of the permutation rules:
# plusFun against plusArg, plusBox against boxVoid, idem against cancelL, and
# the plusL/plusR overlaps.
CRITICAL_PEAKS = [
    "!a.((x +[a] y) +[a] (x +[a] y))",
    "!a.((x +[a] y) (z +[a] w))",
    "!a.!b.((x +[a] y) (z +[b] w))",
    "!a.!b.((x +[b] y) (z +[a] w))",
    "!a.!b.(x +[a] y)",
    "!a.!b.(x +[a] x)",
    "!b.!a.((x +[b] y) +[a] (z +[b] w))",
    "!a.!b.((x +[a] y) +[b] (z +[a] w))",
    "!a.!b.!c.((x +[a] y) +[c] (z +[b] w))",
    "!a.\\p.(p +[a] (x +[a] y))",
    "!a.(\\p.(p +[a] p)) (x +[a] y)",
    "(\\p.!a.p) (!b.x)",
    "!a.(!b.(x +[a] y)) +[a] z",
    "!a.!b.((x +[b] y) +[a] (x +[b] y))",
]


def check_diamond_complete(
    cfg: GenConfig,
    trials: int,
    exhaustive_size: int = 0,
    free: tuple = ("y",),
    workers: int = 1,
) -> PropertyReport:
    """Sampled typed instances, plus every marking of every term up to ``exhaustive_size`` nodes."""
    report = run_property("diamond", cfg, trials, workers)
    if exhaustive_size:
        start = time.perf_counter()
        count = 0
        for t in enumerate_terms(exhaustive_size, free=free, max_labels=2):
            count += 1
            try:
                detail = complete_diamond(t)
            except Skip:
                report.skipped += 1
                continue
            if detail is not None:
                report.failures.append(FailureCase(-1, pretty(t), detail))
        report.trials += count
        report.notes.append(f"exhaustive: {count} terms of size <= {exhaustive_size}")
        report.elapsed += time.perf_counter() - start
    return report


def cbn_cbv_sanity() -> Optional[str]:
    """Within one translation strategies agree; across translations outcomes differ."""
    from .goldens import load_source

    src = load_source("intro")
    cbn, cbv = translate_cbn(src), translate_cbv(src)
    for t in (cbn, cbv):
        a = reduce(t, Strategy.FULL_LEFTMOST, keep_trace=False)[0]
        b = reduce(t, Strategy.COMPLETE, keep_trace=False)[0]
        c, _ = reduce_random(t, random.Random(7))
        if not (alpha_eq(a, b) and alpha_eq(a, c)):
            return "strategies disagree within one translation"
    if evaluate_dist(cbn) == evaluate_dist(cbv):
        return "call-by-name and call-by-value translations agree"
    return None


def check_church_rosser(cfg: GenConfig, trials: int, workers: int = 1) -> PropertyReport:
    report = run_property("church-rosser", cfg, trials, workers)
    detail = cbn_cbv_sanity()
    report.notes.append("cbn/cbv sanity: " + ("ok" if detail is None else detail))
    if detail is not None:
        report.failures.append(FailureCase(-1, "intro example", detail))
    return report


def check_projective_simulation(cfg: GenConfig, trials: int, workers: int = 1) -> PropertyReport:
    return run_property("projective-simulation", cfg, trials, workers)


def check_cbv_simulation(cfg: GenConfig, trials: int, workers: int = 1) -> PropertyReport:
    return run_property("cbv-simulation", cfg, trials, workers)


def check_typed_sn(cfg: GenConfig, trials: int, workers: int = 1) -> PropertyReport:
    return run_property("typed-sn", cfg, trials, workers)


__all__ = [
    "CRITICAL_PEAKS",
    "FailureCase",
    "PROPERTIES",
    "Property",
    "PropertyReport",
    "Skip",
    "cbn_cbv_sanity",
    "cbv_simulation",
    "check_cbv_simulation",
    "check_church_rosser",
    "check_diamond_complete",
    "check_local_confluence",
    "check_perm_sn_certified",
    "check_projective_simulation",
    "check_typed_sn",
    "church_rosser",
    "complete_diamond",
    "config_for",
    "distribution_coherence",
    "local_confluence",
    "perm_sn_certified",
    "perm_strategy_independence",
    "projective_simulation",
    "roundtrip",
    "run_property",
    "subject_reduction",
    "typed_sn",
]
