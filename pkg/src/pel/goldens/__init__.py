"""Golden corpus: the introductory example in both translations and its reduction trace."""

from __future__ import annotations

from importlib import resources

FILES = ("intro.src", "cbn_intro.pel", "cbv_intro.pel", "omega.pel", "cbv_intro.trace", "cbn_intro.dist")


def read_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def load_term(name: str):
    from ..syntax import parse

    return parse(read_text(name if "." in name else f"{name}.pel"))


def load_source(name: str):
    from ..translate import parse_source

    return parse_source(read_text(name if "." in name else f"{name}.src"))


def golden_traces() -> dict:
    """Every golden file by name."""
    return {name: read_text(name) for name in FILES}


def render_trace(name: str = "cbv_intro.pel") -> str:
    """Re-derive a trace file: one step per line, then the endpoint."""
    from ..beta import Strategy, reduce
    from ..syntax import pretty

    nf, trace = reduce(load_term(name), Strategy.FULL_LEFTMOST)
    lines = [s.line() for s in trace]
    lines.append(f"=> {pretty(nf)}")
    return "\n".join(lines) + "\n"


def render_dist(name: str = "cbn_intro.pel") -> str:
    from ..projective import evaluate_dist

    return evaluate_dist(load_term(name)).table() + "\n"
