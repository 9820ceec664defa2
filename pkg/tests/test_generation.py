import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import secweave.machine as M
from secweave import corpus, formats
from secweave.errors import (
    DeadlockedCursor,
    Exhausted,
    NondeterministicAt,
    UnknownParam,
    UnknownSignal,
    UnknownState,
)
from secweave.generation import (
    ActionPattern,
    GenParams,
    ObjectiveSkipped,
    TestPurpose,
    brute_force_reachable,
    generate_objectives,
    generate_with_report,
    hit_or_jump,
    replay,
    step_matches,
)
from secweave.randmod import RandSpec, random_model, random_purpose


def mdl(src):
    return formats.parse_model(src)


LINE = mdl("""
system L; type b_t = enum zero, one endenum;
signal go(b_t); signal stop(); signal ok();
process p(1);
  state a init;
    input go(x); provided x = zero; output ok(); nextstate b;
  endstate;
  state b;
    input go(x); output ok(); nextstate c;
  endstate;
  state c;
    input stop(); output ok(); nextstate c;
  endstate;
endprocess; endsystem;
""")


# -- patterns and matching ------------------------------------------------------

def test_action_pattern_matching():
    act = M.ActionInstance("go", ("zero", 1))
    assert ActionPattern("go", None).matches(act)
    assert ActionPattern("go", ("zero", 1)).matches(act)
    assert not ActionPattern("go", ("zero", 2)).matches(act)
    assert not ActionPattern("go", ("zero", True)).matches(act)  # strict types
    assert not ActionPattern("stop", None).matches(act)


def test_purpose_needs_a_condition():
    with pytest.raises(ValueError):
        TestPurpose()


def test_step_matches_each_condition(v2i):
    s0 = v2i.initial_configuration()
    step = M.possible_steps(v2i, s0)[0]
    assert step_matches(v2i, step, TestPurpose(source="off_line"))
    assert step_matches(v2i, step, TestPurpose(destination="wait"))
    assert step_matches(v2i, step, TestPurpose(instance=("vehicle", 0),
                                               destination="wait"))
    assert not step_matches(v2i, step, TestPurpose(instance=("vehicle", 1),
                                                   destination="wait"))
    assert not step_matches(v2i, step, TestPurpose(source="wait"))
    assert step_matches(v2i, step, TestPurpose(
        input=ActionPattern("activate_service", None),
        output=ActionPattern("request_service", ("DynamicPlannigRoute",))))
    assert not step_matches(v2i, step, TestPurpose(
        output=ActionPattern("error_service", None)))


# -- objective generation ---------------------------------------------------------

def test_certificate_sweep(v2i):
    got = generate_objectives(v2i, "wait_certificate", "response", "certificate")
    assert [(p.destination, p.input.args, p.output) for p in got] == [
        ("wait_info", ("certificate01",),
         ActionPattern("require_info_login", ())),
        ("wait_decision", ("certificate02",),
         ActionPattern("ask_user", ("certificate02",))),
        ("wait_certificate", ("certificate03",),
         ActionPattern("disagree_certificate", ())),
    ]
    assert all(p.source == "wait_certificate" for p in got)
    assert all(p.instance == ("vehicle", 0) for p in got)


def test_objectives_unknown_names(v2i):
    with pytest.raises(UnknownState):
        generate_objectives(v2i, "limbo", "response", "certificate")
    with pytest.raises(UnknownSignal):
        generate_objectives(v2i, "wait_certificate", "nosuch", "certificate")
    with pytest.raises(UnknownParam):
        generate_objectives(v2i, "wait_certificate", "response", "nosuch")


def test_objectives_skip_unfireable_values():
    m = mdl("""
system S; type b_t = enum zero, one endenum;
signal go(b_t); signal ok();
process p(1);
  state a init;
    input go(x); provided x = zero; output ok(); nextstate a;
  endstate;
endprocess; endsystem;
""")
    with pytest.warns(ObjectiveSkipped, match="one"):
        got = generate_objectives(m, "a", "go", "x")
    assert [p.input.args for p in got] == [("zero",)]


def test_objectives_reject_overlapping_transitions():
    m = mdl("""
system S; type b_t = enum zero, one endenum;
signal go(b_t); signal ok();
process p(1);
  state a init;
    input go(x); output ok(); nextstate a;
    input go(x); provided x = zero; output ok(); nextstate a;
  endstate;
endprocess; endsystem;
""")
    with pytest.raises(NondeterministicAt):
        generate_objectives(m, "a", "go", "x")


def test_objectives_reject_ambiguous_param_position():
    m = mdl("""
system S; type b_t = enum zero, one endenum;
signal go(b_t, b_t); signal ok();
process p(1);
  state a init;
    input go(x, y); output ok(); nextstate b;
  endstate;
  state b;
    input go(y, x); provided x = zero; output ok(); nextstate a;
  endstate;
endprocess; endsystem;
""")
    # x sits at position 0 in every transition out of a; position 1 out of b
    # does not make it ambiguous
    assert [p.input.args for p in generate_objectives(m, "a", "go", "x")] == [
        ("zero", "zero"), ("one", "zero")]
    m2 = mdl("""
system S; type b_t = enum zero, one endenum;
signal go(b_t, b_t); signal ok();
process p(1);
  state a init;
    input go(x, y); output ok(); nextstate a;
    input go(y, x); provided y = one; output ok(); nextstate a;
  endstate;
endprocess; endsystem;
""")
    with pytest.raises(UnknownParam):
        generate_objectives(m2, "a", "go", "x")


# -- guided search -----------------------------------------------------------------

def gp(**kw):
    return GenParams(**kw)


def test_direct_hit_no_jumps(drp_woven):
    seq = formats.parse_purposes(corpus.load_text("drp_rule1.purposes"), drp_woven)
    result = generate_with_report(drp_woven, seq, gp())
    assert formats.emit_testcase(result.testcase) == (
        "// hit: purpose 1\n"
        "?ask_access{log1,pwd1,GPSin} !access_authorized{}\n")
    assert result.report.hits == (0,)
    assert result.report.jumps == 0


def test_purpose_sequence_hits_in_order(drp_woven):
    seq = formats.parse_purposes(corpus.load_text("drp_rule3.purposes"), drp_woven)
    result = generate_with_report(drp_woven, seq, gp())
    tc = result.testcase
    assert tc.hits == (1, 2)
    assert tc.steps[1].input.render() == "ask_for_route{destinationOut,regular}"
    assert tc.steps[1].output.render() == "need_premium_class{}"
    assert tc.steps[2].output.render() == "response{optimalRoute}"


def test_hit_paths_are_shortest_in_listing_order():
    seq = (TestPurpose(input=ActionPattern("stop", ())),)
    tc = hit_or_jump(LINE, seq, gp(depth_limit=5))
    assert [s.input.args for s in tc.steps] == [("zero",), ("zero",), ()]
    assert tc.hits == (2,)


def test_generation_is_deterministic(drp_woven):
    seq = (TestPurpose(source="S3", input=ActionPattern("exit_service", ())),)
    a = hit_or_jump(drp_woven, seq, gp(depth_limit=2, rng_seed=9))
    b = hit_or_jump(drp_woven, seq, gp(depth_limit=2, rng_seed=9))
    assert a == b


def test_empty_sequence_rejected(drp_woven):
    with pytest.raises(ValueError):
        hit_or_jump(drp_woven, ())


def test_bad_knobs_rejected():
    with pytest.raises(ValueError):
        GenParams(depth_limit=0)
    with pytest.raises(ValueError):
        GenParams(max_jumps=-1)
    with pytest.raises(ValueError):
        GenParams(max_total_steps=0)


def test_jump_budget_exhaustion_keeps_partial(drp_woven):
    # S1 never fires exit_service, so the purpose is unreachable
    seq = (TestPurpose(source="S1", input=ActionPattern("exit_service", ())),)
    with pytest.raises(Exhausted) as exc:
        hit_or_jump(drp_woven, seq, gp(depth_limit=2, max_jumps=4))
    assert exc.value.partial is not None
    assert len(exc.value.partial.steps) > 0
    assert exc.value.partial.hits == ()


def test_step_budget_exhaustion(drp_woven):
    seq = (TestPurpose(source="S1", input=ActionPattern("exit_service", ())),)
    with pytest.raises(Exhausted) as exc:
        hit_or_jump(drp_woven, seq, gp(depth_limit=3, max_total_steps=7))
    assert len(exc.value.partial.steps) <= 7 + 3


def test_deadlocked_cursor():
    m = mdl("""
system D; signal go(); signal ok();
process p(1);
  state a init;
    input go(); output ok(); nextstate b;
  endstate;
  state b; endstate;
endprocess; endsystem;
""")
    seq = (TestPurpose(input=ActionPattern("go", ()),
                       output=ActionPattern("nothing_matches", ())),)
    with pytest.raises(DeadlockedCursor):
        hit_or_jump(m, seq, gp(depth_limit=3))


def test_saturated_closure_stops_early():
    m = mdl("""
system D; signal go(); signal ok();
process p(1);
  state a init;
    input go(); output ok(); nextstate a;
  endstate;
endprocess; endsystem;
""")
    seq = (TestPurpose(input=ActionPattern("go", ()),
                       output=ActionPattern("nope", ())),)
    with pytest.raises(Exhausted, match="saturated"):
        hit_or_jump(m, seq, gp(depth_limit=3, max_jumps=10**6))


# -- replay ---------------------------------------------------------------------

def test_replay_accepts_generated_traces(drp_woven):
    seq = formats.parse_purposes(corpus.load_text("drp_rule3.purposes"), drp_woven)
    tc = hit_or_jump(drp_woven, seq)
    steps = replay(drp_woven, tc)
    assert len(steps) == len(tc.steps)
    assert steps[0].pre == drp_woven.initial_configuration()


def test_replay_rejects_wrong_output(drp_woven):
    tc = formats.parse_testcase(
        "?ask_access{log1,pwd1,GPSin} !access_denied{}\n")
    with pytest.raises(ValueError):
        replay(drp_woven, tc)


# -- exhaustive oracle ------------------------------------------------------------

def test_brute_force_depth_semantics(drp):
    seq = (TestPurpose(output=ActionPattern("exit_ok", ())),)
    assert not brute_force_reachable(drp, seq, bound=2)
    assert brute_force_reachable(drp, seq, bound=2).bound_limited
    assert brute_force_reachable(drp, seq, bound=3)
    hopeless = (TestPurpose(source="S1", input=ActionPattern("exit_service", ())),)
    res = brute_force_reachable(drp, hopeless, bound=50)
    assert not res and not res.bound_limited, "closed state space, definitive no"


def test_brute_force_multi_purpose(drp):
    seq = (TestPurpose(output=ActionPattern("access_authorized", ())),
           TestPurpose(output=ActionPattern("exit_ok", ())))
    assert not brute_force_reachable(drp, seq, bound=2)
    assert brute_force_reachable(drp, seq, bound=3)


def test_brute_force_rejects_bad_arguments(drp):
    with pytest.raises(ValueError):
        brute_force_reachable(drp, (), bound=3)
    with pytest.raises(ValueError):
        brute_force_reachable(
            drp, (TestPurpose(source="S1"),), bound=0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_oracles_agree_on_random_models(seed):
    """Single purpose, no jumps, equal bounds: guided search and exhaustive
    search must agree about reachability."""
    rng = random.Random(seed)
    m = random_model(rng, RandSpec(max_states=5, max_transitions=6))
    p = random_purpose(rng, m)
    try:
        hit_or_jump(m, (p,), gp(depth_limit=5, max_jumps=0))
        found = True
    except (Exhausted, DeadlockedCursor):
        found = False
    assert found == bool(brute_force_reachable(m, (p,), bound=5))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 5))
def test_generation_reproducible_on_random_models(seed, rng_seed):
    rng = random.Random(seed)
    m = random_model(rng, RandSpec(max_states=4, max_transitions=5))
    p = random_purpose(rng, m)
    def run():
        try:
            return hit_or_jump(m, (p,), gp(depth_limit=3, max_jumps=5,
                                           rng_seed=rng_seed))
        except (Exhausted, DeadlockedCursor) as exc:
            return ("failed", type(exc).__name__, getattr(exc, "partial", None))
    assert run() == run()
