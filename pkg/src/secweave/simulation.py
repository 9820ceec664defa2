"""Interactive simulation sessions: enumerate choices, step, undo.

Sessions are immutable; ``step`` and ``undo`` return new sessions, so a
held reference is a stable snapshot and concurrent readers are safe.  The
trace stores full pre/post configurations, which makes undo exact and lets
the whole run be replayed as a witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import machine as M
from .errors import InvalidChoice, NothingToUndo
from .generation import TcStep, TestCase


@dataclass(frozen=True)
class Choice:
    """One executable step, numbered for selection."""

    index: int  # 1-based position in the listing
    step: M.Step

    @property
    def transition_index(self) -> int:
        return self.step.transition_index

    @property
    def input(self) -> M.ActionInstance:
        return self.step.input

    @property
    def output(self) -> M.ActionInstance:
        return self.step.output

    @property
    def target(self) -> str:
        return self.step.post.state


@dataclass(frozen=True)
class Session:
    model: M.Efsm
    current: M.Configuration
    trace: tuple[M.Step, ...] = ()

    @property
    def step_counter(self) -> int:
        return len(self.trace)


def new_session(m: M.Efsm) -> Session:
    return Session(model=m, current=m.initial_configuration())


def list_choices(s: Session) -> list[Choice]:
    """All executable steps at the current configuration.

    Order: transition declaration order, then domain order of the input
    arguments; every enabled (transition, argument vector) pair is one
    choice, so nondeterministic overlaps appear as separate entries.
    """
    return [Choice(i + 1, step)
            for i, step in enumerate(M.possible_steps(s.model, s.current))]


def step(s: Session, index: int) -> Session:
    choices = list_choices(s)
    if not 1 <= index <= len(choices):
        raise InvalidChoice(
            f"choice {index} is not in the current listing of {len(choices)}")
    chosen = choices[index - 1].step
    return Session(model=s.model, current=chosen.post, trace=s.trace + (chosen,))


def undo(s: Session) -> Session:
    if not s.trace:
        raise NothingToUndo("the trace is empty")
    return Session(model=s.model, current=s.trace[-1].pre, trace=s.trace[:-1])


def trace_to_testcase(s: Session) -> TestCase:
    return TestCase(
        steps=tuple(TcStep(st.input, st.output) for st in s.trace), hits=())


# ---------------------------------------------------------------------------
# text rendering for the REPL and the API

def render_status(s: Session) -> str:
    values = ", ".join(
        M.render_value(s.current.valuation[v.name]) for v in s.model.variables)
    return (
        f"status: {s.step_counter} steps\n"
        f"{{{s.model.name}}}0\n"
        f"  @{s.current.state} {{{values}}}\n")


def render_choices(choices: list[Choice], process: str) -> str:
    lines = ["transitions :"]
    for c in choices:
        lines.append(
            f"[{c.index}] {{{process}}}0 ?{c.input.render()} "
            f"{{{process}}}0 !{c.output.render()} -> {c.target}")
    if len(lines) == 1:
        lines.append("(deadlock: no transition is executable)")
    return "\n".join(lines) + "\n"


def render_session(s: Session) -> str:
    return render_status(s) + "\n" + render_choices(list_choices(s), s.model.name)
