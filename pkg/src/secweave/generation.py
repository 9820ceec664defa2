"""Guided test generation: purposes, objectives, hit-or-jump, and an oracle.

A test purpose is a conjunction of step conditions (process instance,
source state, destination state, input action, output action); omitted
conditions match anything.  Purposes are ordered into sequences; a test
case satisfies the sequence when its steps match the purposes in order,
each purpose strictly after the previous one's match.

Generation keeps a cursor configuration and breadth-first searches around
it up to a depth limit.  Finding a matching step is a hit: the path up to
that step is appended and the next purpose becomes current.  Otherwise the
cursor jumps to a random leaf at the deepest explored level and searching
resumes.  All randomness comes from one seeded generator, so runs are
reproducible byte for byte.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field

from . import machine as M
from .errors import (
    DeadlockedCursor,
    Exhausted,
    NondeterministicAt,
    UnknownParam,
    UnknownSignal,
    UnknownState,
)


@dataclass(frozen=True)
class ActionPattern:
    """Signal name plus, optionally, the exact argument values."""

    signal: str
    args: tuple[M.Value, ...] | None = None

    def matches(self, action: M.ActionInstance) -> bool:
        if action.signal != self.signal:
            return False
        if self.args is None:
            return True
        return len(self.args) == len(action.args) and all(
            M.same_value(a, b) for a, b in zip(self.args, action.args))


@dataclass(frozen=True)
class TestPurpose:
    __test__ = False  # not a pytest class, despite the name

    instance: tuple[str, int] | None = None
    source: str | None = None
    destination: str | None = None
    input: ActionPattern | None = None
    output: ActionPattern | None = None

    def __post_init__(self):
        if (self.instance is None and self.source is None
                and self.destination is None and self.input is None
                and self.output is None):
            raise ValueError("a test purpose needs at least one condition")


PurposeSequence = tuple[TestPurpose, ...]


@dataclass(frozen=True)
class GenParams:
    depth_limit: int = 10
    max_jumps: int = 100
    rng_seed: int = 0
    max_total_steps: int = 10000

    def __post_init__(self):
        if self.depth_limit < 1:
            raise ValueError("depth_limit must be at least 1")
        if self.max_jumps < 0 or self.max_total_steps < 1:
            raise ValueError("budgets must be non-negative")


@dataclass(frozen=True)
class TcStep:
    input: M.ActionInstance
    output: M.ActionInstance


@dataclass(frozen=True)
class TestCase:
    """Steps plus hit markers: hits[i] = index of the step that satisfied
    purpose i."""

    __test__ = False  # not a pytest class, despite the name

    steps: tuple[TcStep, ...] = ()
    hits: tuple[int, ...] = ()


@dataclass(frozen=True)
class GenReport:
    hits: tuple[int, ...]
    jumps: int
    explored: int  # configurations visited across all searches


def step_matches(m: M.Efsm, step: M.Step, p: TestPurpose) -> bool:
    """Conjunction over the purpose's present conditions."""
    if p.instance is not None and p.instance != (m.name, 0):
        return False
    if p.source is not None and step.pre.state != p.source:
        return False
    if p.destination is not None and step.post.state != p.destination:
        return False
    if p.input is not None and not p.input.matches(step.input):
        return False
    if p.output is not None and not p.output.matches(step.output):
        return False
    return True


# ---------------------------------------------------------------------------
# objective generation

class ObjectiveSkipped(UserWarning):
    """A swept parameter value enabled no transition."""


def generate_objectives(
    m: M.Efsm, state: str, input_signal: str, param: str,
) -> list[TestPurpose]:
    """One purpose per value of a swept input parameter.

    Evaluates the machine at ``state`` under the initial valuation; other
    parameters of the signal take the first value of their domains.  A value
    that enables exactly one transition yields a purpose recording the
    destination and the concrete output; a value enabling none is skipped
    with a warning; several is an error.
    """
    if state not in m.states:
        raise UnknownState(f"unknown state {state!r}")
    sig = m.signal_by_name.get(input_signal)
    if sig is None:
        raise UnknownSignal(f"unknown signal {input_signal!r}")

    positions = set()
    for t in m.transitions:
        if t.source == state and t.input.signal == input_signal and param in t.input.params:
            positions.add(t.input.params.index(param))
    if len(positions) != 1:
        raise UnknownParam(
            f"no transition from {state!r} binds a parameter named {param!r} "
            f"at a single position" if not positions else
            f"parameter {param!r} is bound at several positions from {state!r}")
    pos = positions.pop()

    baseline = m.initial_configuration().valuation
    cfg = M.Configuration(state, baseline)
    out: list[TestPurpose] = []
    for v in m.domain_of(sig.param_types[pos]):
        args = tuple(
            v if i == pos else m.domain_of(tn)[0]
            for i, tn in enumerate(sig.param_types))
        inp = M.ActionInstance(input_signal, args)
        enabled = M.enabled_steps(m, cfg, inp)
        if not enabled:
            warnings.warn(
                f"{param}={M.render_value(v)} enables no transition at {state}",
                ObjectiveSkipped, stacklevel=2)
            continue
        if len(enabled) > 1:
            raise NondeterministicAt(v, enabled)
        post, outp = M.fire(m, cfg, enabled[0], inp)
        out.append(TestPurpose(
            instance=(m.name, 0),
            source=state,
            destination=post.state,
            input=ActionPattern(input_signal, args),
            output=ActionPattern(outp.signal, outp.args)))
    return out


# ---------------------------------------------------------------------------
# hit-or-jump generation

@dataclass(frozen=True)
class GenResult:
    testcase: TestCase
    report: GenReport
    trace: tuple[M.Step, ...] = field(repr=False, default=())


def hit_or_jump(m: M.Efsm, seq: PurposeSequence, gp: GenParams = GenParams()) -> TestCase:
    """Generate a test case whose steps hit every purpose in order."""
    return generate_with_report(m, seq, gp).testcase


def generate_with_report(
    m: M.Efsm, seq: PurposeSequence, gp: GenParams = GenParams(),
) -> GenResult:
    if not seq:
        raise ValueError("empty purpose sequence")
    rng = random.Random(gp.rng_seed)
    cursor = m.initial_configuration()
    trace: list[M.Step] = []
    hits: list[int] = []
    jumps = 0
    explored = 0
    purpose_idx = 0

    def partial() -> TestCase:
        return TestCase(
            steps=tuple(TcStep(s.input, s.output) for s in trace),
            hits=tuple(hits))

    while purpose_idx < len(seq):
        if len(trace) >= gp.max_total_steps:
            raise Exhausted(
                f"step budget {gp.max_total_steps} exceeded with "
                f"{len(seq) - purpose_idx} purposes left", partial())
        hit_path, leaves, visited, live = _bounded_search(
            m, cursor, seq[purpose_idx], gp.depth_limit)
        explored += visited
        if hit_path is not None:
            trace.extend(hit_path)
            hits.append(len(trace) - 1)
            cursor = hit_path[-1].post
            purpose_idx += 1
            continue
        if not live:
            raise DeadlockedCursor(
                f"no step possible at state {cursor.state!r} "
                f"with {len(seq) - purpose_idx} purposes left")
        if not leaves:
            # the whole closure around the cursor was searched: jumping
            # inside it cannot reveal a new step
            raise Exhausted(
                f"search saturated without a hit; "
                f"{len(seq) - purpose_idx} purposes left", partial())
        if jumps >= gp.max_jumps:
            raise Exhausted(
                f"jump budget {gp.max_jumps} exhausted with "
                f"{len(seq) - purpose_idx} purposes left", partial())
        jump_path = leaves[rng.randrange(len(leaves))]
        trace.extend(jump_path)
        cursor = jump_path[-1].post
        jumps += 1

    return GenResult(
        testcase=partial(),
        report=GenReport(hits=tuple(hits), jumps=jumps, explored=explored),
        trace=tuple(trace))


def _bounded_search(
    m: M.Efsm, cursor: M.Configuration, purpose: TestPurpose, depth_limit: int,
) -> tuple[tuple[M.Step, ...] | None, list[tuple[M.Step, ...]], int, bool]:
    """BFS around the cursor.

    Returns (path ending in a matching step, or None; paths to the deepest
    discovered leaves; visited-configuration count; whether the cursor had
    any step at all).  Every generated edge is checked against the purpose,
    including edges into already-visited configurations; only unvisited
    configurations are expanded further.
    """
    visited = {cursor}
    level: list[tuple[M.Configuration, tuple[M.Step, ...]]] = [(cursor, ())]
    deepest: list[tuple[M.Step, ...]] = []
    live = False
    for depth in range(depth_limit):
        next_level: list[tuple[M.Configuration, tuple[M.Step, ...]]] = []
        for cfg, path in level:
            for step in M.possible_steps(m, cfg):
                if depth == 0:
                    live = True
                if step_matches(m, step, purpose):
                    return path + (step,), [], len(visited), True
                if step.post not in visited:
                    visited.add(step.post)
                    next_level.append((step.post, path + (step,)))
        if not next_level:
            break
        level = next_level
        deepest = [path for _, path in next_level]
    return None, deepest, len(visited), live


# ---------------------------------------------------------------------------
# replay and oracle

def replay(m: M.Efsm, tc: TestCase) -> list[M.Step]:
    """Execute a test case's steps from the initial configuration.

    Each step must correspond to an executable transition whose input and
    output instances match; on ambiguity the first in listing order wins.
    """
    cfg = m.initial_configuration()
    out: list[M.Step] = []
    for i, tcstep in enumerate(tc.steps):
        candidates = [
            s for s in M.possible_steps(m, cfg)
            if s.input == tcstep.input and s.output == tcstep.output]
        if not candidates:
            raise ValueError(
                f"step {i + 1} ({tcstep.input.render()}) does not replay "
                f"from state {cfg.state!r}")
        out.append(candidates[0])
        cfg = candidates[0].post
    return out


@dataclass(frozen=True)
class ReachResult:
    """Truthy iff the purpose sequence was satisfied within the bound."""

    reachable: bool
    bound_limited: bool  # False was definitive; True means only "not within bound"
    explored: int = 0

    def __bool__(self) -> bool:
        return self.reachable


def brute_force_reachable(m: M.Efsm, seq: PurposeSequence, bound: int) -> ReachResult:
    """Exhaustive BFS over (configuration, purposes-satisfied) pairs."""
    if not seq:
        raise ValueError("empty purpose sequence")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    start = (m.initial_configuration(), 0)
    seen = {start}
    level = [start]
    for _ in range(bound):
        next_level: list[tuple[M.Configuration, int]] = []
        for cfg, idx in level:
            for step in M.possible_steps(m, cfg):
                nidx = idx + 1 if step_matches(m, step, seq[idx]) else idx
                if nidx == len(seq):
                    return ReachResult(True, False, len(seen))
                node = (step.post, nidx)
                if node not in seen:
                    seen.add(node)
                    next_level.append(node)
        if not next_level:
            return ReachResult(False, False, len(seen))
        level = next_level
    return ReachResult(False, bool(level), len(seen))
