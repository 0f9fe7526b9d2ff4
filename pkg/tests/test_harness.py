import json
import pytest

from pel.gen import GenConfig, TYPED_ENV, enumerate_terms, gen_term, shrink
from pel.harness import (
    CRITICAL_PEAKS,
    PROPERTIES,
    PropertyReport,
    cbn_cbv_sanity,
    check_diamond_complete,
    check_local_confluence,
    complete_diamond,
    config_for,
    local_confluence,
    run_property,
)
from pel.syntax import alpha_eq, alpha_key, free_labels, is_well_labeled, parse, pretty, size
from pel.typecheck import try_infer


def test_gen_deterministic():
    cfg = GenConfig(seed=42)
    assert pretty(gen_term(cfg)) == pretty(gen_term(cfg))
    assert alpha_eq(gen_term(cfg), gen_term(cfg))
    assert pretty(gen_term(GenConfig(seed=42, typed_only=True))) == pretty(gen_term(GenConfig(seed=42, typed_only=True)))


def test_gen_small():
    for s in range(30):
        t = gen_term(GenConfig(seed=s, max_size=1))
        assert size(t) == 1


def test_gen_contract():
    for s in range(300):
        t = gen_term(GenConfig(seed=s))
        assert not free_labels(t) and is_well_labeled(t) and size(t) <= 25


def test_typed_gen_infers():
    for s in range(100):
        assert try_infer(TYPED_ENV, gen_term(GenConfig(seed=s, typed_only=True))) is not None


def test_gen_config_validation():
    with pytest.raises(ValueError):
        GenConfig(max_size=0)
    with pytest.raises(ValueError):
        GenConfig(var_pool=0)


def test_enumerate_terms():
    terms = list(enumerate_terms(3, free=("y",), max_labels=1))
    keys = {alpha_key(t) for t in terms}
    assert len(keys) == len(terms)
    # y, \p.p, \p.y, !a.y, y y
    assert len([t for t in terms if size(t) <= 2]) == 4
    assert sum(1 for _ in enumerate_terms(8)) == 17032


def test_shrink():
    t = parse(r"(\x.x) ((\y.y) (!a.(z +[a] w)))")
    small = shrink(t, lambda u: "+[" in pretty(u))
    assert pretty(small) == "!a.(z +[a] w)"


def test_local_confluence_example():
    assert local_confluence(parse("!a.((x +[a] y) +[a] (x +[a] y))")) is None
    assert local_confluence(parse(r"\x.x")) is None


def test_critical_peaks_have_peaks():
    from pel.perm import one_step_reducts

    for text in CRITICAL_PEAKS:
        assert len(one_step_reducts(parse(text))) >= 2, text


def test_diamond_examples():
    assert complete_diamond(parse(r"(\x.x) y ((\z.z) w)")) is None
    assert complete_diamond(parse(r"(\x.x y) (\z.z)")) is None
    assert complete_diamond(parse(r"(\x.x x) ((\y.y) (z (+) w))")) is None


def test_run_property_replays():
    cfg, _ = config_for("roundtrip", seed=5)
    r1 = run_property("roundtrip", cfg, 20)
    r2 = run_property("roundtrip", cfg, 20)
    assert r1.ok and r2.ok and r1.trials == r2.trials == 20
    d = r1.to_dict()
    assert json.loads(json.dumps(d))["property"] == "roundtrip"


def test_parallel_matches_serial():
    cfg, _ = config_for("perm-sn", seed=3)
    a = run_property("perm-sn", cfg, 40, workers=1)
    b = run_property("perm-sn", cfg, 40, workers=2)
    assert a.to_dict()["failures"] == b.to_dict()["failures"] and a.trials == b.trials


@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_every_property_smoke(name):
    cfg, _ = config_for(name, seed=1000)
    report = run_property(name, cfg, 15)
    assert report.ok, report.failures
    assert "PASS" in report.summary()


def test_failure_reporting_and_shrinking():
    from pel import harness

    prop = harness.PROPERTIES["roundtrip"]
    broken = harness.Property(
        "broken", "fails on any choice", {"trials": 1}, prop.generate,
        lambda t, seed: "has a choice" if "+[" in pretty(t) else None,
    )
    harness.PROPERTIES["broken"] = broken
    try:
        report = run_property("broken", GenConfig(seed=0, max_labels=4), 30)
    finally:
        del harness.PROPERTIES["broken"]
    assert not report.ok
    f = report.failures[0]
    assert f.shrunk is not None and "+[" in f.shrunk
    assert size(parse(f.shrunk)) <= size(parse(f.term))
    replay = run_property("roundtrip", GenConfig(seed=f.seed, max_labels=4), 1)
    assert replay.trials == 1


def test_merge():
    a = PropertyReport("p", 3, elapsed=1.0)
    b = PropertyReport("p", 4, skipped=1, elapsed=2.0)
    m = a.merge(b)
    assert (m.trials, m.skipped, m.elapsed) == (7, 1, 3.0)


def test_check_entry_points():
    cfg, _ = config_for("local-confluence", seed=0)
    r = check_local_confluence(cfg, 10)
    assert r.ok and r.trials == 10 + len(CRITICAL_PEAKS)
    cfg, _ = config_for("diamond", seed=0)
    r = check_diamond_complete(cfg, 5, exhaustive_size=4)
    assert r.ok and r.notes
    assert cbn_cbv_sanity() is None
