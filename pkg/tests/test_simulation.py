import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import secweave.machine as M
import secweave.simulation as S
from secweave import formats
from secweave.errors import InvalidChoice, NothingToUndo
from secweave.generation import replay


def test_new_session_starts_at_initial(v2i):
    s = S.new_session(v2i)
    assert s.step_counter == 0
    assert s.current == v2i.initial_configuration()
    assert s.trace == ()


def test_choices_numbered_in_listing_order(v2i):
    s = S.new_session(v2i)
    choices = S.list_choices(s)
    assert [c.index for c in choices] == [1, 2, 3]
    assert choices[0].input.render() == "activate_service{DynamicPlannigRoute}"
    assert choices[0].output.render() == "request_service{DynamicPlannigRoute}"
    assert choices[0].target == "wait"
    assert choices[1].output.signal == "error_service"


def test_step_applies_the_predicted_effect(v2i):
    s = S.new_session(v2i)
    predicted = S.list_choices(s)[0]
    s2 = S.step(s, 1)
    assert s2.current.state == predicted.target
    assert s2.trace[-1] == predicted.step
    assert s2.step_counter == 1
    assert s.step_counter == 0, "sessions are snapshots"


def test_certificate_branching(v2i):
    s = S.new_session(v2i)
    for _ in range(2):
        s = S.step(s, 1)
    assert s.current.state == "wait_certificate"
    choices = S.list_choices(s)
    assert [c.output.signal for c in choices] == [
        "require_info_login", "ask_user", "disagree_certificate"]
    assert [c.target for c in choices] == [
        "wait_info", "wait_decision", "wait_certificate"]


def test_invalid_choice_rejected(v2i):
    s = S.new_session(v2i)
    with pytest.raises(InvalidChoice):
        S.step(s, 0)
    with pytest.raises(InvalidChoice):
        S.step(s, 4)


def test_undo_restores_previous_snapshot(v2i):
    s1 = S.new_session(v2i)
    s2 = S.step(s1, 1)
    assert S.undo(s2) == s1
    with pytest.raises(NothingToUndo):
        S.undo(s1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_random_walk_undo_inverts_step(v2i, seed):
    rng = random.Random(seed)
    s = S.new_session(v2i)
    for _ in range(rng.randint(1, 12)):
        n = len(S.list_choices(s))
        if n == 0:
            break
        before = s
        s = S.step(s, rng.randint(1, n))
        assert S.undo(s) == before


def test_deadlock_renders_explicitly(v2i):
    s = S.Session(v2i, M.Configuration("logged_in",
                                       v2i.initial_configuration().valuation))
    assert S.list_choices(s) == []
    assert "deadlock" in S.render_session(s)


def test_render_status_shape(v2i):
    s = S.new_session(v2i)
    assert S.render_status(s) == (
        "status: 0 steps\n"
        "{vehicle}0\n"
        "  @off_line {DynamicPlannigRoute, currentPosition}\n")


def test_trace_exports_and_replays(v2i):
    s = S.new_session(v2i)
    for index in (1, 1, 2, 1):  # activate, request info, cert02, agree
        s = S.step(s, index)
    tc = S.trace_to_testcase(s)
    assert formats.emit_testcase(tc) == (
        "?activate_service{DynamicPlannigRoute} !request_service{DynamicPlannigRoute}\n"
        "?request_information{} !request_certificate{}\n"
        "?response{certificate02} !ask_user{certificate02}\n"
        "?agree{} !require_info_login{}\n")
    steps = replay(v2i, tc)
    assert [st.post.state for st in steps] == [
        "wait", "wait_certificate", "wait_decision", "wait_info"]
    assert steps == list(s.trace)
