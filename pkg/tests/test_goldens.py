from pel.goldens import FILES, golden_traces, load_term, read_text, render_dist, render_trace
from pel.perm import N0_NORMAL, classify_normal_form
from pel.syntax import alpha_eq, parse


def test_corpus_present():
    g = golden_traces()
    assert set(g) == set(FILES)
    assert all(text.strip() for text in g.values())


def test_trace_rederives_bit_identically():
    assert render_trace() == read_text("cbv_intro.trace")


def test_dist_rederives_bit_identically():
    assert render_dist() == read_text("cbn_intro.dist")


def test_trace_shape():
    lines = read_text("cbv_intro.trace").splitlines()
    rules = [line.split(" @ ")[0] for line in lines[:-1]]
    assert rules[0] == "plusArg"
    assert rules[-2:] == ["idem", "boxVoid"]
    assert set(rules[1:-2]) == {"beta"}
    assert lines[-1] == r"=> \t.\f.t"


def test_endpoints():
    top = parse(r"\t.\f.t")
    assert read_text("cbn_intro.dist").splitlines() == ["1/2\t\\t.\\f.f", "1/2\t\\t.\\f.t"]
    nf = parse(read_text("cbv_intro.trace").splitlines()[-1][3:])
    assert alpha_eq(nf, top) and classify_normal_form(nf) == N0_NORMAL


def test_omega_parses():
    assert alpha_eq(load_term("omega"), parse(r"(\x.x x) (\y.y y)"))
