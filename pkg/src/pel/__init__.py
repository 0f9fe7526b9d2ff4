"""Probabilistic event lambda-calculus: terms, reduction, types, translations
and an executable test harness for the calculus' meta-theory."""

import sys as _sys

__version__ = "0.1.0"

# Permutations can make terms deep; the recursive algorithms need headroom.
if _sys.getrecursionlimit() < 20_000:
    _sys.setrecursionlimit(20_000)

from .errors import (  # noqa: E402
    GenerationExhausted,
    IncomparableLabels,
    LabelClosureError,
    LabelJudgmentViolation,
    NotARedex,
    NotNormalForm,
    ParseError,
    PelError,
    PelTypeError,
    StepBudgetExceeded,
    UnboundVariable,
    UnificationFailure,
)
from .syntax import (  # noqa: E402
    Abs,
    App,
    Choice,
    Gen,
    Label,
    Name,
    Term,
    Var,
    alpha_eq,
    free_labels,
    label_judgment,
    label_order,
    parse,
    pretty,
    substitute,
)
from .perm import PermRule, classify_normal_form, p_normalize, step_perm, try_rule  # noqa: E402
from .beta import Strategy, complete_step, full_labeling, labeled_reduct, reduce, step_beta  # noqa: E402
from .projective import Distribution, dist_of_normal_form, evaluate_dist, pi_step, project, split_head  # noqa: E402
from .typecheck import check, infer, parse_type  # noqa: E402
from .translate import label_closure, parse_source, translate_cbn, translate_cbv, translate_cbv_open  # noqa: E402
from .rpo import certify_perm_step, precedence_of, rpo_less  # noqa: E402
