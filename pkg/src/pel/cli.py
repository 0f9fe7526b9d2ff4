"""Command-line front end: ``pel <command> [options] [FILE]``.

Exit status is 0 on success, 1 on domain errors (type errors, open labels,
exhausted budgets, failed properties) and 2 on usage or parse errors.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .beta import Strategy, reduce
from .errors import ParseError, PelError, StepBudgetExceeded
from .perm import DEFAULT_MAX_STEPS, classify_normal_form
from .projective import evaluate_dist
from .syntax import (
    Label,
    free_labels,
    is_label_closed,
    is_well_labeled,
    label_judgment,
    parse,
    pretty,
    show_structure,
    to_json,
)


class UsageError(Exception):
    pass


def _read(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.file in (None, "-"):
        return sys.stdin.read()
    try:
        with open(args.file, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e.strerror}")


def _theta(args) -> tuple:
    text = getattr(args, "theta", None)
    if not text:
        return ()
    return tuple(Label(h.strip()) for h in text.split(",") if h.strip())


def _term(args):
    open_labels = bool(getattr(args, "open", False))
    t = parse(_read(args), open_labels=open_labels)
    theta = _theta(args)
    if open_labels and not label_judgment(theta, t):
        missing = ", ".join(sorted(a.hint for a in free_labels(t) if a not in theta))
        raise PelError(f"free labels not covered by --theta: {missing}")
    return t


def _emit(args, record: dict, text: str) -> None:
    if args.json:
        print(json.dumps(record, ensure_ascii=False))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_parse(args) -> int:
    t = _term(args)
    if args.json:
        print(json.dumps(to_json(t), ensure_ascii=False))
    else:
        print(show_structure(t))
    return 0


def cmd_fmt(args) -> int:
    print(pretty(_term(args)))
    return 0


def cmd_check(args) -> int:
    t = _term(args)
    theta = _theta(args)
    closed = is_label_closed(t)
    info = {
        "term": pretty(t),
        "label_closed": closed,
        "well_labeled": is_well_labeled(t),
        "label_judgment": label_judgment(theta, t),
        "normal_form": classify_normal_form(t) if closed else "n/a",
    }
    if args.json:
        print(json.dumps(info, ensure_ascii=False))
    else:
        for k, v in info.items():
            print(f"{k}: {v}")
    return 0 if info["label_judgment"] else 1


def cmd_typecheck(args) -> int:
    from .typecheck import infer, parse_env, show_type

    env = parse_env(args.env or "")
    ty = infer(env, _term(args))
    _emit(args, {"type": show_type(ty)}, show_type(ty))
    return 0


def _strategy_run(args, trace: bool, certify: bool) -> int:
    t = _term(args)
    strategy = Strategy(args.strategy)
    try:
        nf, steps = reduce(t, strategy, args.max_steps, keep_trace=trace, theta=_theta(args))
    except StepBudgetExceeded as e:
        if trace:
            _print_steps(args, e.trace, certify)
        print(f"error: {e}", file=sys.stderr)
        if e.term is not None:
            print(f"last term: {pretty(e.term)}", file=sys.stderr)
        return 1
    if trace:
        _print_steps(args, steps, certify)
    _emit(args, {"term": pretty(nf)}, pretty(nf))
    return 0


def _print_steps(args, steps, certify: bool) -> None:
    from .perm import PermRule
    from .rpo import certify_perm_step

    rules = {r.value for r in PermRule}
    for s in steps:
        rec = s.record()
        line = s.line()
        if certify:
            if str(s.rule) in rules:
                cert = certify_perm_step(s)
                rec["certificate"] = "ok" if cert.ok else cert.reason
                line += f"  [{cert.summary()}]"
            else:
                rec["certificate"] = None
                line += "  [n/a]"
        _emit(args, rec, line)


def cmd_reduce(args) -> int:
    return _strategy_run(args, args.trace or args.certify, args.certify)


def cmd_trace(args) -> int:
    return _strategy_run(args, True, args.certify)


def cmd_translate(args) -> int:
    from .translate import parse_source, translate_cbn, translate_cbv_open

    src = parse_source(_read(args))
    if args.mode == "cbn":
        t = translate_cbn(src)
        _emit(args, {"term": pretty(t)}, pretty(t))
        return 0
    interp = translate_cbv_open(src)
    if args.open:
        theta = ",".join(a.hint for a in interp.theta)
        body = pretty(interp.body)
        _emit(args, {"theta": theta, "term": body}, f"theta: {theta}\n{body}")
    else:
        t = interp.closed()
        _emit(args, {"term": pretty(t)}, pretty(t))
    return 0


def cmd_dist(args) -> int:
    t = _term(args)
    try:
        d = evaluate_dist(t, args.max_steps)
    except StepBudgetExceeded as e:
        print(f"error: {e}; unresolved mass {e.residual}", file=sys.stderr)
        return 1
    if args.json:
        for rec in d.records():
            print(json.dumps(rec, ensure_ascii=False))
    else:
        print(d.table())
    return 0


def cmd_test(args) -> int:
    from .harness import PROPERTIES, check_diamond_complete, config_for, run_property

    names = list(PROPERTIES) if args.property == "all" else [args.property]
    for name in names:
        if name not in PROPERTIES:
            raise UsageError(f"unknown property {name!r}; choose from: all, " + ", ".join(PROPERTIES))
    status = 0
    for name in names:
        cfg, trials = config_for(name, args.seed, max_size=args.size)
        if args.trials is not None:
            trials = args.trials
        if name == "diamond" and args.exhaustive:
            report = check_diamond_complete(cfg, trials, exhaustive_size=args.exhaustive, workers=args.workers)
        else:
            report = run_property(name, cfg, trials, args.workers)
        if args.json:
            print(json.dumps(report.to_dict(), ensure_ascii=False))
        else:
            print(report.summary())
            for f in report.failures:
                print(f"  seed {f.seed}: {f.term}\n    {f.detail}")
                if f.shrunk:
                    print(f"    shrunk: {f.shrunk}")
        if not report.ok:
            status = 1
    return status


# ---------------------------------------------------------------------------
# argument parsing


def _input_args(p: argparse.ArgumentParser, open_flag: bool = True) -> None:
    p.add_argument("file", nargs="?", help="input file ('-' or omitted: stdin)")
    p.add_argument("-e", "--expr", help="term given inline instead of a file")
    p.add_argument("--json", action="store_true", help="line-delimited JSON output")
    if open_flag:
        p.add_argument("--open", action="store_true", help="allow free labels")
        p.add_argument("--theta", help="comma-separated label sequence for free labels, innermost first")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pel", description="Probabilistic event lambda-calculus workbench")
    parser.add_argument("--version", action="version", version=f"pel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="show the abstract syntax tree")
    _input_args(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("fmt", help="pretty-print with minimal parentheses")
    _input_args(p)
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser("check", help="label closure, well-labeledness and normal-form class")
    _input_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("typecheck", help="infer a simple type")
    _input_args(p)
    p.add_argument("--env", help="free variable types, e.g. 'x : o, f : o -> o'")
    p.set_defaults(func=cmd_typecheck)

    for name, func, help_ in (
        ("reduce", cmd_reduce, "reduce to normal form"),
        ("trace", cmd_trace, "reduce and print every step"),
    ):
        p = sub.add_parser(name, help=help_)
        _input_args(p)
        p.add_argument("--strategy", choices=[s.value for s in Strategy], default="full")
        p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
        p.add_argument("--trace", action="store_true", help="print each step")
        p.add_argument("--certify", action="store_true", help="attach an RPO certificate to each p-step")
        p.set_defaults(func=func)

    p = sub.add_parser("translate", help="translate a source term")
    _input_args(p, open_flag=False)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--cbn", dest="mode", action="store_const", const="cbn")
    mode.add_argument("--cbv", dest="mode", action="store_const", const="cbv")
    p.add_argument("--open", action="store_true", help="cbv only: print the label sequence and open term")
    p.set_defaults(func=cmd_translate, mode="cbn")

    p = sub.add_parser("dist", help="exact outcome distribution")
    _input_args(p)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("test", help="run a property of the test harness")
    p.add_argument("property", help="property name or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.add_argument("--size", type=int, help="maximum term size")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exhaustive", type=int, default=0, help="diamond only: also enumerate all terms up to this size")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_test)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PelError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except RecursionError:
        print("error: term too deep", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
