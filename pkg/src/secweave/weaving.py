"""Weave policy rules into a machine.

Rules attach to transitions through two attributes: the transition's input
signal name is the request's action-id, the process name its resource-id.
Matching permit conditions are compiled and joined onto the predicate as a
disjunction; matching deny conditions as a conjunction of negations.  The
strengthened guard can then be made observable: for every strengthened
transition a mirror transition is synthesized that accepts the same input
under the complementary predicate and answers with a configured zero-
argument deny output.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

from . import machine as M
from . import xacml as X
from .errors import MissingObservationMapping, SecweaveError, WeaveError


@dataclass(frozen=True)
class ObservationRule:
    """Deny branch for one input signal; target None means stay in place."""

    input_signal: str
    deny_output: str
    deny_target: str | None = None


@dataclass(frozen=True)
class WeaveConfig:
    emit_observations: bool = False
    observation_map: tuple[ObservationRule, ...] = ()

    def rule_for(self, signal: str) -> ObservationRule | None:
        for r in self.observation_map:
            if r.input_signal == signal:
                return r
        return None


@dataclass(frozen=True)
class TransitionWeave:
    """What happened to one transition, for audit."""

    index: int
    label: str
    rule_ids: tuple[str, ...]
    permission_clause: M.Expr | None
    prohibition_clause: M.Expr | None
    predicate_before: M.Expr | None
    predicate_after: M.Expr | None

    @property
    def strengthened(self) -> bool:
        return bool(self.rule_ids)


@dataclass(frozen=True)
class WeaveReport:
    entries: tuple[TransitionWeave, ...]
    synthesized: tuple[int, ...]  # transition indices in the woven model
    stats_before: M.Stats
    stats_after: M.Stats
    warnings: tuple[str, ...] = ()

    def render(self, woven: M.Efsm | None = None) -> str:
        from .formats import expr_to_text

        def pred(e: M.Expr | None) -> str:
            return "-" if e is None else expr_to_text(e)

        lines = []
        for e in self.entries:
            if not e.strengthened:
                lines.append(f"{e.label}: unchanged")
                continue
            lines.append(f"{e.label}: rules [{', '.join(e.rule_ids)}]")
            lines.append(f"  before: {pred(e.predicate_before)}")
            lines.append(f"  after:  {pred(e.predicate_after)}")
        for idx in self.synthesized:
            if woven is not None:
                t = woven.transitions[idx]
                lines.append(
                    f"t{idx + 1}: synthesized {t.source} -> {t.target} "
                    f"?{t.input.signal} !{t.output.signal}")
            else:
                lines.append(f"t{idx + 1}: synthesized")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        lines.append(
            f"states/transitions/signals: {self.stats_before.render()}"
            f" -> {self.stats_after.render()}")
        return "\n".join(lines) + "\n"


class DeadTransition(UserWarning):
    """A woven predicate became unsatisfiable."""


def applicable_rules(
    p: X.Policy, t: M.Transition, process: str, m: M.Efsm,
) -> tuple[list[M.Expr], list[M.Expr], list[str]]:
    """Compile the policy's rules that target this transition.

    Returns (permit conditions, deny conditions, matched rule ids); the
    request seen by the targets carries only the action-id and resource-id
    attributes, so any matcher over another attribute fails here.
    """
    attrs = {
        ("action", "action-id"): t.input.signal,
        ("resource", "resource-id"): process,
    }
    permits: list[M.Expr] = []
    denies: list[M.Expr] = []
    rule_ids: list[str] = []
    if not X.match_target(p.target, attrs):
        return permits, denies, rule_ids
    for rule in p.rules:
        if rule.target is not None and not X.match_target(rule.target, attrs):
            continue
        compiled = X.compile_condition(rule.condition, m, t)
        (permits if rule.effect == "Permit" else denies).append(compiled)
        rule_ids.append(rule.id)
    return permits, denies, rule_ids


def weave_permissions(t: M.Transition, permits: list[M.Expr]) -> M.Transition:
    """Conjoin the disjunction of permit conditions onto the predicate."""
    if not permits:
        return t
    clause = M.disj(*permits)
    predicate = clause if t.predicate is None else M.conj(t.predicate, clause)
    return replace(t, predicate=predicate)


def weave_prohibitions(t: M.Transition, denies: list[M.Expr]) -> M.Transition:
    """Conjoin the negation of every deny condition onto the predicate."""
    if not denies:
        return t
    clause = M.conj(*(M.neg(d) for d in denies))
    predicate = clause if t.predicate is None else M.conj(t.predicate, clause)
    return replace(t, predicate=predicate)


def synthesize_observations(
    m: M.Efsm, report: WeaveReport, cfg: WeaveConfig,
) -> M.Efsm:
    """Add a deny transition for every strengthened entry in the report.

    The new transition keeps the source and input, targets the configured
    state (or stays), outputs the configured zero-argument deny signal, and
    is guarded by the original predicate conjoined with the negated
    strengthening clause, so original and observation partition the input
    space exactly.
    """
    additions: list[M.Transition] = []
    new_signals: list[M.SignalDecl] = []
    declared = set(m.signal_by_name)
    for entry in report.entries:
        if not entry.strengthened:
            continue
        base = m.transitions[entry.index]
        rule = cfg.rule_for(base.input.signal)
        if rule is None:
            raise MissingObservationMapping(base.input.signal)
        clauses = [c for c in (entry.permission_clause, entry.prohibition_clause)
                   if c is not None]
        guard = M.conj(*clauses)
        negated = M.neg(guard)
        predicate = (negated if entry.predicate_before is None
                     else M.conj(entry.predicate_before, negated))
        additions.append(M.Transition(
            source=base.source,
            target=rule.deny_target if rule.deny_target is not None else base.source,
            input=base.input,
            output=M.OutputDecl(rule.deny_output, ()),
            predicate=predicate,
            actions=()))
        if rule.deny_output not in declared:
            declared.add(rule.deny_output)
            new_signals.append(M.SignalDecl(rule.deny_output, ()))
    if not additions:
        return m
    return replace(
        m,
        signals=m.signals + tuple(new_signals),
        transitions=m.transitions + tuple(additions))


def weave(m: M.Efsm, p: X.Policy, cfg: WeaveConfig) -> tuple[M.Efsm, WeaveReport]:
    """Apply a whole policy: permissions, then prohibitions, then observations."""
    entries: list[TransitionWeave] = []
    rewritten: list[M.Transition] = []
    notes: list[str] = []
    for i, t in enumerate(m.transitions):
        label = m.transition_label(i)
        try:
            permits, denies, rule_ids = applicable_rules(p, t, m.name, m)
        except SecweaveError as exc:
            raise WeaveError(f"{label}: {exc}") from exc
        woven_t = weave_prohibitions(weave_permissions(t, permits), denies)
        perm_clause = M.disj(*permits) if permits else None
        proh_clause = M.conj(*(M.neg(d) for d in denies)) if denies else None
        entry = TransitionWeave(
            index=i, label=label, rule_ids=tuple(rule_ids),
            permission_clause=perm_clause, prohibition_clause=proh_clause,
            predicate_before=t.predicate, predicate_after=woven_t.predicate)
        if rule_ids and _structurally_false(woven_t.predicate):
            message = f"{label}: woven predicate is unsatisfiable"
            notes.append(message)
            warnings.warn(message, DeadTransition, stacklevel=2)
        entries.append(entry)
        rewritten.append(woven_t)

    woven = replace(m, transitions=tuple(rewritten))
    stats_before = M.model_stats(m)
    partial_report = WeaveReport(
        entries=tuple(entries), synthesized=(),
        stats_before=stats_before, stats_after=M.model_stats(woven),
        warnings=tuple(notes))
    if cfg.emit_observations:
        base_count = len(woven.transitions)
        woven = synthesize_observations(woven, partial_report, cfg)
        synthesized = tuple(range(base_count, len(woven.transitions)))
    else:
        synthesized = ()
    report = replace(
        partial_report,
        synthesized=synthesized,
        stats_after=M.model_stats(woven))
    return woven, report


def _structurally_false(e: M.Expr | None) -> bool:
    if e is None:
        return False
    if isinstance(e, M.Lit):
        return e.value is False
    if isinstance(e, M.And):
        return any(_structurally_false(x) for x in e.items)
    if isinstance(e, M.Or):
        return all(_structurally_false(x) for x in e.items)
    if isinstance(e, M.Not):
        return _structurally_true(e.item)
    return False


def _structurally_true(e: M.Expr | None) -> bool:
    if e is None:
        return True  # an absent predicate never blocks
    if isinstance(e, M.Lit):
        return e.value is True
    if isinstance(e, M.And):
        return all(_structurally_true(x) for x in e.items)
    if isinstance(e, M.Or):
        return any(_structurally_true(x) for x in e.items)
    if isinstance(e, M.Not):
        return _structurally_false(e.item)
    return False
