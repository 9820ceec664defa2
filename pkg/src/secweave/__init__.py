"""Weave access-control policies into state-machine models, then simulate
the result and generate guided conformance tests from it."""

from . import corpus, errors
from .formats import (
    emit_testcase,
    expr_to_text,
    parse_model,
    parse_purposes,
    parse_testcase,
    parse_weave_config,
    serialize_model,
    serialize_purposes,
    serialize_weave_config,
)
from .generation import (
    ActionPattern,
    GenParams,
    TestCase,
    TestPurpose,
    brute_force_reachable,
    generate_objectives,
    generate_with_report,
    hit_or_jump,
    replay,
)
from .machine import (
    Configuration,
    Efsm,
    Step,
    characteristic,
    enabled_steps,
    eval_expr,
    fire,
    model_stats,
    possible_steps,
    validate_model,
)
from .simulation import (
    Session,
    list_choices,
    new_session,
    step,
    trace_to_testcase,
    undo,
)
from .weaving import ObservationRule, WeaveConfig, weave
from .xacml import Decision, evaluate_policy, parse_policy

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
