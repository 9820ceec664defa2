"""Extended state machine model: typed variables, guarded transitions, firing.

A machine couples a finite control graph with a vector of typed variables.
Every type has a finite, explicitly ordered domain (enumerations, bounded
integer ranges, booleans), which makes exhaustive enumeration of argument
vectors and valuations possible everywhere downstream (simulation choices,
guided search, property checks).

Values are plain Python scalars: ``bool``, ``int``, or ``str`` for symbols
of an enumerated domain.  All model objects are immutable; the operational
functions are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

from .errors import NotEnabled, TypeMismatch, UnboundName, UnknownSet

Value = Union[bool, int, str]

BOOL = "bool"  # built-in type name, domain (False, True)


# ---------------------------------------------------------------------------
# expressions

@dataclass(frozen=True)
class Lit:
    value: Value


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class ParamRef:
    name: str


@dataclass(frozen=True)
class Compare:
    op: str  # one of = <> < <= > >=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class And:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Or:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Not:
    item: "Expr"


@dataclass(frozen=True)
class MemberOf:
    item: "Expr"
    set_name: str


Expr = Union[Lit, VarRef, ParamRef, Compare, And, Or, Not, MemberOf]

COMPARE_OPS = ("=", "<>", "<", "<=", ">", ">=")
ORDER_OPS = ("<", "<=", ">", ">=")


def conj(*items: Expr) -> Expr:
    """Conjunction in normal form: flat, no singleton or empty node."""
    flat: list[Expr] = []
    for e in items:
        if isinstance(e, And):
            flat.extend(e.items)
        else:
            flat.append(e)
    if not flat:
        return Lit(True)
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*items: Expr) -> Expr:
    """Disjunction in normal form: flat, no singleton or empty node."""
    flat: list[Expr] = []
    for e in items:
        if isinstance(e, Or):
            flat.extend(e.items)
        else:
            flat.append(e)
    if not flat:
        return Lit(False)
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def neg(item: Expr) -> Expr:
    return Not(item)


# ---------------------------------------------------------------------------
# declarations

@dataclass(frozen=True)
class EnumType:
    name: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class RangeType:
    name: str
    lo: int
    hi: int


TypeDecl = Union[EnumType, RangeType]


@dataclass(frozen=True)
class SubsetDecl:
    """Named subset of one declared domain, testable via ``MemberOf``."""

    name: str
    domain: str
    members: tuple[Value, ...]


@dataclass(frozen=True)
class ConstDecl:
    name: str
    value: int


@dataclass(frozen=True)
class VarDecl:
    name: str
    type_name: str
    init: Value | None = None  # None: first value of the domain


@dataclass(frozen=True)
class SignalDecl:
    name: str
    param_types: tuple[str, ...] = ()


@dataclass(frozen=True)
class InputDecl:
    """Input action of a transition: signal plus formal parameter names."""

    signal: str
    params: tuple[str, ...] = ()


@dataclass(frozen=True)
class OutputDecl:
    """Output action of a transition: signal plus argument expressions."""

    signal: str
    args: tuple[Expr, ...] = ()


@dataclass(frozen=True)
class Assignment:
    var: str
    expr: Expr


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    input: InputDecl
    output: OutputDecl
    predicate: Expr | None = None  # None reads as literally true
    actions: tuple[Assignment, ...] = ()


# ---------------------------------------------------------------------------
# runtime instances

@dataclass(frozen=True)
class ActionInstance:
    """A concrete input or output: signal name plus argument values."""

    signal: str
    args: tuple[Value, ...] = ()

    def render(self) -> str:
        return f"{self.signal}{{{','.join(render_value(v) for v in self.args)}}}"


@dataclass(frozen=True, eq=False)
class Configuration:
    """Control state plus a total valuation of the declared variables."""

    state: str
    valuation: Mapping[str, Value] = field(default_factory=dict)

    def key(self) -> tuple:
        return (self.state, tuple(sorted(self.valuation.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def render_value(v: Value) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)


def same_value(a: Value, b: Value) -> bool:
    """Equality that never crosses types (bool 1 is not int 1)."""
    return type(a) is type(b) and a == b


def value_in_domain(v: Value, domain: Iterable[Value]) -> bool:
    return any(same_value(v, d) for d in domain)


# ---------------------------------------------------------------------------
# the machine

@dataclass(frozen=True)
class Efsm:
    """One process of one system; the unit every other module operates on."""

    system: str
    name: str  # process name, instance index 0
    states: tuple[str, ...]
    initial_state: str
    types: tuple[TypeDecl, ...] = ()
    subsets: tuple[SubsetDecl, ...] = ()
    consts: tuple[ConstDecl, ...] = ()
    variables: tuple[VarDecl, ...] = ()
    signals: tuple[SignalDecl, ...] = ()
    transitions: tuple[Transition, ...] = ()

    # -- lookup tables (derived, not part of equality) --

    @cached_property
    def type_by_name(self) -> dict[str, TypeDecl]:
        return {t.name: t for t in self.types}

    @cached_property
    def subset_by_name(self) -> dict[str, SubsetDecl]:
        return {s.name: s for s in self.subsets}

    @cached_property
    def signal_by_name(self) -> dict[str, SignalDecl]:
        return {s.name: s for s in self.signals}

    @cached_property
    def var_by_name(self) -> dict[str, VarDecl]:
        return {v.name: v for v in self.variables}

    @cached_property
    def symbol_domains(self) -> dict[str, str]:
        """Enumeration symbol -> owning type name."""
        out: dict[str, str] = {}
        for t in self.types:
            if isinstance(t, EnumType):
                for v in t.values:
                    out.setdefault(v, t.name)
        return out

    @cached_property
    def domains(self) -> dict[str, tuple[Value, ...]]:
        """Type name -> the full ordered domain, booleans included."""
        out: dict[str, tuple[Value, ...]] = {BOOL: (False, True)}
        for t in self.types:
            if isinstance(t, EnumType):
                out[t.name] = t.values
            else:
                out[t.name] = tuple(range(t.lo, t.hi + 1))
        return out

    # -- conveniences --

    def domain_of(self, type_name: str) -> tuple[Value, ...]:
        try:
            return self.domains[type_name]
        except KeyError:
            raise UnboundName(f"unknown type {type_name!r}") from None

    def input_params(self, t: Transition) -> dict[str, str]:
        """Formal parameter name -> type name, per the signal declaration."""
        sig = self.signal_by_name.get(t.input.signal)
        if sig is None:
            raise UnboundName(f"unknown signal {t.input.signal!r}")
        if len(sig.param_types) != len(t.input.params):
            raise TypeMismatch(
                f"signal {sig.name!r} takes {len(sig.param_types)} parameters, "
                f"transition binds {len(t.input.params)}"
            )
        return dict(zip(t.input.params, sig.param_types))

    def initial_configuration(self) -> Configuration:
        valuation: dict[str, Value] = {}
        for v in self.variables:
            valuation[v.name] = v.init if v.init is not None else self.domain_of(v.type_name)[0]
        return Configuration(self.initial_state, valuation)

    def transition_label(self, index: int) -> str:
        return f"t{index + 1}"


@dataclass(frozen=True)
class Stats:
    states: int
    transitions: int
    signals: int

    def render(self) -> str:
        return f"{self.states}/{self.transitions}/{self.signals}"


def model_stats(m: Efsm) -> Stats:
    return Stats(len(m.states), len(m.transitions), len(m.signals))


# ---------------------------------------------------------------------------
# evaluation

def characteristic(m: Efsm, set_name: str, x: Value) -> int:
    """Membership indicator of ``x`` in the named subset: 1 inside, 0 outside."""
    sub = m.subset_by_name.get(set_name)
    if sub is None:
        raise UnknownSet(f"unknown set {set_name!r}")
    return 1 if value_in_domain(x, sub.members) else 0


def eval_expr(m: Efsm, e: Expr, cfg: Configuration, bindings: Mapping[str, Value] | None = None) -> Value:
    """Evaluate an expression against a configuration and parameter bindings."""
    bindings = bindings or {}
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, VarRef):
        try:
            return cfg.valuation[e.name]
        except KeyError:
            raise UnboundName(f"unbound variable {e.name!r}") from None
    if isinstance(e, ParamRef):
        try:
            return bindings[e.name]
        except KeyError:
            raise UnboundName(f"unbound parameter {e.name!r}") from None
    if isinstance(e, Compare):
        left = eval_expr(m, e.left, cfg, bindings)
        right = eval_expr(m, e.right, cfg, bindings)
        if type(left) is not type(right):
            raise TypeMismatch(f"cannot compare {left!r} with {right!r}")
        if e.op == "=":
            return left == right
        if e.op == "<>":
            return left != right
        if e.op in ORDER_OPS:
            if not (type(left) is int and type(right) is int):
                raise TypeMismatch(f"ordered comparison needs integers, got {left!r} {e.op} {right!r}")
            if e.op == "<":
                return left < right
            if e.op == "<=":
                return left <= right
            if e.op == ">":
                return left > right
            return left >= right
        raise TypeMismatch(f"unknown comparison operator {e.op!r}")
    if isinstance(e, (And, Or)):
        stop = isinstance(e, Or)  # Or stops at the first True, And at the first False
        for item in e.items:
            v = eval_expr(m, item, cfg, bindings)
            if not isinstance(v, bool):
                raise TypeMismatch(f"boolean connective over non-boolean {v!r}")
            if v is stop:
                return stop
        return not stop
    if isinstance(e, Not):
        inner = eval_expr(m, e.item, cfg, bindings)
        if not isinstance(inner, bool):
            raise TypeMismatch(f"'not' needs a boolean, got {inner!r}")
        return not inner
    if isinstance(e, MemberOf):
        x = eval_expr(m, e.item, cfg, bindings)
        return characteristic(m, e.set_name, x) == 1
    raise TypeMismatch(f"not an expression node: {e!r}")


def predicate_holds(m: Efsm, t: Transition, cfg: Configuration, bindings: Mapping[str, Value]) -> bool:
    if t.predicate is None:
        return True
    result = eval_expr(m, t.predicate, cfg, bindings)
    if not isinstance(result, bool):
        raise TypeMismatch(f"predicate evaluated to non-boolean {result!r}")
    return result


def enabled_steps(m: Efsm, cfg: Configuration, inp: ActionInstance) -> list[Transition]:
    """Transitions fireable at ``cfg`` for the given input, in declaration order."""
    sig = m.signal_by_name.get(inp.signal)
    if sig is None:
        raise UnboundName(f"unknown signal {inp.signal!r}")
    if len(sig.param_types) != len(inp.args):
        raise TypeMismatch(
            f"signal {inp.signal!r} takes {len(sig.param_types)} arguments, got {len(inp.args)}"
        )
    for tn, arg in zip(sig.param_types, inp.args):
        if not value_in_domain(arg, m.domain_of(tn)):
            raise TypeMismatch(f"value {arg!r} outside domain of {tn!r}")
    out = []
    for t in m.transitions:
        if t.source != cfg.state or t.input.signal != inp.signal:
            continue
        bindings = dict(zip(t.input.params, inp.args))
        if predicate_holds(m, t, cfg, bindings):
            out.append(t)
    return out


def fire(m: Efsm, cfg: Configuration, t: Transition, inp: ActionInstance) -> tuple[Configuration, ActionInstance]:
    """Execute one enabled transition.

    Output arguments and all assignment right-hand sides are evaluated
    against the pre-state, so multiple assignments act simultaneously.
    """
    if t not in enabled_steps(m, cfg, inp):
        raise NotEnabled(f"transition {t.input.signal} {t.source}->{t.target} not enabled at {cfg.state}")
    bindings = dict(zip(t.input.params, inp.args))
    out_args = tuple(eval_expr(m, a, cfg, bindings) for a in t.output.args)
    updates = {a.var: eval_expr(m, a.expr, cfg, bindings) for a in t.actions}
    valuation = dict(cfg.valuation)
    valuation.update(updates)
    return Configuration(t.target, valuation), ActionInstance(t.output.signal, out_args)


# ---------------------------------------------------------------------------
# static typing of expressions

_INT_LITERAL = "<int>"  # unifies with any range type


def _unify(a: str, b: str) -> str | None:
    if a == b:
        return a
    for x, y in ((a, b), (b, a)):
        if x == _INT_LITERAL and (y == _INT_LITERAL or y.startswith("range:")):
            return y
    return None


def expr_type(m: Efsm, e: Expr, params: Mapping[str, str]) -> str:
    """Type name of an expression; raises on ill-typed or unbound nodes.

    Integer literals get the pseudo-type ``<int>``; range types appear as
    ``range:<name>`` so that literals unify with any of them.
    """
    def type_tag(name: str) -> str:
        decl = m.type_by_name.get(name)
        if name == BOOL:
            return BOOL
        if decl is None:
            raise UnboundName(f"unknown type {name!r}")
        return f"range:{name}" if isinstance(decl, RangeType) else name

    if isinstance(e, Lit):
        if isinstance(e.value, bool):
            return BOOL
        if isinstance(e.value, int):
            return _INT_LITERAL
        dom = m.symbol_domains.get(e.value)
        if dom is None:
            raise UnboundName(f"symbol {e.value!r} belongs to no declared domain")
        return dom
    if isinstance(e, VarRef):
        decl = m.var_by_name.get(e.name)
        if decl is None:
            raise UnboundName(f"unbound variable {e.name!r}")
        return type_tag(decl.type_name)
    if isinstance(e, ParamRef):
        tn = params.get(e.name)
        if tn is None:
            raise UnboundName(f"unbound parameter {e.name!r}")
        return type_tag(tn)
    if isinstance(e, Compare):
        lt = expr_type(m, e.left, params)
        rt = expr_type(m, e.right, params)
        if e.op not in COMPARE_OPS:
            raise TypeMismatch(f"unknown comparison operator {e.op!r}")
        if e.op in ORDER_OPS:
            # any mix of integer kinds orders fine; domains only bound values
            for side in (lt, rt):
                if not (side == _INT_LITERAL or side.startswith("range:")):
                    raise TypeMismatch(
                        f"ordered comparison needs integer operands, got {side}")
            return BOOL
        if _unify(lt, rt) is None:
            raise TypeMismatch(f"comparison operands differ: {lt} vs {rt}")
        return BOOL
    if isinstance(e, (And, Or)):
        for item in e.items:
            if expr_type(m, item, params) != BOOL:
                raise TypeMismatch("boolean connective over non-boolean operand")
        return BOOL
    if isinstance(e, Not):
        if expr_type(m, e.item, params) != BOOL:
            raise TypeMismatch("'not' over non-boolean operand")
        return BOOL
    if isinstance(e, MemberOf):
        sub = m.subset_by_name.get(e.set_name)
        if sub is None:
            raise UnknownSet(f"unknown set {e.set_name!r}")
        item_t = expr_type(m, e.item, params)
        if _unify(item_t, type_tag(sub.domain)) is None:
            raise TypeMismatch(f"membership test of {item_t} value in set over {sub.domain}")
        return BOOL
    raise TypeMismatch(f"not an expression node: {e!r}")


def expr_names(e: Expr) -> tuple[set[str], set[str]]:
    """All (variable, parameter) names referenced by an expression."""
    vs: set[str] = set()
    ps: set[str] = set()

    def walk(node: Expr) -> None:
        if isinstance(node, VarRef):
            vs.add(node.name)
        elif isinstance(node, ParamRef):
            ps.add(node.name)
        elif isinstance(node, Compare):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, (And, Or)):
            for item in node.items:
                walk(item)
        elif isinstance(node, Not):
            walk(node.item)
        elif isinstance(node, MemberOf):
            walk(node.item)

    walk(e)
    return vs, ps


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Diagnostic:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


def validate_model(m: Efsm) -> list[Diagnostic]:
    """All invariant violations of the model; empty means well-formed."""
    out: list[Diagnostic] = []

    def bad(location: str, message: str) -> None:
        out.append(Diagnostic(location, message))

    seen_states = set()
    for s in m.states:
        if s in seen_states:
            bad(f"state {s}", "duplicate state")
        seen_states.add(s)
    if m.initial_state not in seen_states:
        bad("model", f"initial state {m.initial_state!r} is not declared")

    seen_types: set[str] = {BOOL}
    for t in m.types:
        if t.name in seen_types:
            bad(f"type {t.name}", "duplicate type name")
        seen_types.add(t.name)
        if isinstance(t, EnumType):
            if not t.values:
                bad(f"type {t.name}", "empty domain")
            if len(set(t.values)) != len(t.values):
                bad(f"type {t.name}", "repeated symbol")
        elif t.lo > t.hi:
            bad(f"type {t.name}", f"empty range {t.lo}..{t.hi}")

    owners: dict[str, str] = {}
    for t in m.types:
        if isinstance(t, EnumType):
            for v in t.values:
                if v in owners:
                    bad(f"type {t.name}", f"symbol {v!r} already belongs to {owners[v]!r}")
                owners[v] = t.name

    for sub in m.subsets:
        if sub.domain not in m.domains:
            bad(f"set {sub.name}", f"unknown domain {sub.domain!r}")
            continue
        dom = m.domains[sub.domain]
        for v in sub.members:
            if not value_in_domain(v, dom):
                bad(f"set {sub.name}", f"member {v!r} outside domain {sub.domain!r}")

    seen_signals = set()
    for sig in m.signals:
        if sig.name in seen_signals:
            bad(f"signal {sig.name}", "duplicate signal")
        seen_signals.add(sig.name)
        for tn in sig.param_types:
            if tn not in m.domains:
                bad(f"signal {sig.name}", f"unknown parameter type {tn!r}")

    for v in m.variables:
        if m.var_by_name.get(v.name) is not v and v.name in {w.name for w in m.variables if w is not v}:
            bad(f"var {v.name}", "duplicate variable")
        if v.type_name not in m.domains:
            bad(f"var {v.name}", f"unknown type {v.type_name!r}")
        elif v.init is not None and not value_in_domain(v.init, m.domains[v.type_name]):
            bad(f"var {v.name}", f"initial value {v.init!r} outside domain {v.type_name!r}")

    for i, t in enumerate(m.transitions):
        loc = m.transition_label(i)
        if t.source not in seen_states:
            bad(loc, f"UnknownState: source {t.source!r}")
        if t.target not in seen_states:
            bad(loc, f"UnknownState: target {t.target!r}")

        params: dict[str, str] = {}
        in_sig = m.signal_by_name.get(t.input.signal)
        if in_sig is None:
            bad(loc, f"UnknownSignal: input {t.input.signal!r}")
        elif len(in_sig.param_types) != len(t.input.params):
            bad(loc, f"input {t.input.signal!r} binds {len(t.input.params)} of "
                     f"{len(in_sig.param_types)} parameters")
        else:
            if len(set(t.input.params)) != len(t.input.params):
                bad(loc, "repeated input parameter name")
            params = dict(zip(t.input.params, in_sig.param_types))

        out_sig = m.signal_by_name.get(t.output.signal)
        if out_sig is None:
            bad(loc, f"UnknownSignal: output {t.output.signal!r}")
        elif len(out_sig.param_types) != len(t.output.args):
            bad(loc, f"output {t.output.signal!r} takes {len(out_sig.param_types)} "
                     f"arguments, got {len(t.output.args)}")
        else:
            for j, (arg, tn) in enumerate(zip(t.output.args, out_sig.param_types)):
                try:
                    at = expr_type(m, arg, params)
                except Exception as exc:
                    bad(loc, f"output argument {j + 1}: {exc}")
                    continue
                want = f"range:{tn}" if isinstance(m.type_by_name.get(tn), RangeType) else tn
                if _unify(at, want) is None:
                    bad(loc, f"TypeMismatch: output argument {j + 1} has type {at}, wants {tn}")
                elif (isinstance(arg, Lit) and isinstance(arg.value, int)
                        and not isinstance(arg.value, bool)
                        and arg.value not in m.domain_of(tn)):
                    bad(loc, f"output argument {j + 1} literal {arg.value} "
                             f"outside domain of {tn!r}")

        if t.predicate is not None:
            try:
                pt = expr_type(m, t.predicate, params)
                if pt != BOOL:
                    bad(loc, f"TypeMismatch: predicate has type {pt}, wants bool")
            except Exception as exc:
                bad(loc, f"predicate: {type(exc).__name__.split('.')[-1]}: {exc}")

        for a in t.actions:
            decl = m.var_by_name.get(a.var)
            if decl is None:
                bad(loc, f"assignment to undeclared variable {a.var!r}")
                continue
            try:
                at = expr_type(m, a.expr, params)
            except Exception as exc:
                bad(loc, f"assignment to {a.var}: {exc}")
                continue
            want = f"range:{decl.type_name}" if isinstance(m.type_by_name.get(decl.type_name), RangeType) else decl.type_name
            if _unify(at, want) is None:
                bad(loc, f"TypeMismatch: assigning {at} to {a.var} of type {decl.type_name}")
            if isinstance(a.expr, Lit) and isinstance(a.expr.value, int) and not isinstance(a.expr.value, bool):
                if a.expr.value not in m.domain_of(decl.type_name):
                    bad(loc, f"assignment literal {a.expr.value} outside domain of {decl.type_name!r}")

    return out


# ---------------------------------------------------------------------------
# runtime steps

@dataclass(frozen=True)
class Step:
    """One executed transition: what went in, what came out, and where."""

    transition_index: int
    input: ActionInstance
    output: ActionInstance
    pre: Configuration
    post: Configuration


def possible_steps(m: Efsm, cfg: Configuration) -> list[Step]:
    """Every step executable at ``cfg``, fully instantiated.

    Order is the canonical listing order used by the simulator and the
    generator alike: transition declaration order, then domain order of
    the input arguments.
    """
    out: list[Step] = []
    for ti, t in enumerate(m.transitions):
        if t.source != cfg.state:
            continue
        sig = m.signal_by_name[t.input.signal]
        pools = [m.domain_of(tn) for tn in sig.param_types]
        for combo in itertools.product(*pools):
            bindings = dict(zip(t.input.params, combo))
            if not predicate_holds(m, t, cfg, bindings):
                continue
            inp = ActionInstance(t.input.signal, combo)
            post, outp = fire(m, cfg, t, inp)
            out.append(Step(ti, inp, outp, cfg, post))
    return out


# ---------------------------------------------------------------------------
# enumeration helpers

def input_instances(m: Efsm, signal: str) -> Iterator[ActionInstance]:
    """Every concrete input of a signal, arguments in domain order."""
    sig = m.signal_by_name[signal]
    pools = [m.domain_of(tn) for tn in sig.param_types]
    for combo in itertools.product(*pools):
        yield ActionInstance(signal, combo)


def all_input_instances(m: Efsm) -> list[ActionInstance]:
    """Inputs of every declared input-capable signal, declaration order first."""
    used = []
    seen = set()
    for t in m.transitions:
        if t.input.signal not in seen:
            seen.add(t.input.signal)
            used.append(t.input.signal)
    out: list[ActionInstance] = []
    for s in used:
        out.extend(input_instances(m, s))
    return out


def iter_valuations(m: Efsm) -> Iterator[dict[str, Value]]:
    """Cartesian product of all variable domains (one empty dict if no vars)."""
    pools = [m.domain_of(v.type_name) for v in m.variables]
    names = [v.name for v in m.variables]
    for combo in itertools.product(*pools):
        yield dict(zip(names, combo))


def iter_transition_contexts(m: Efsm, t: Transition) -> Iterator[tuple[Configuration, dict[str, Value]]]:
    """Every (configuration at source, parameter binding) pair of a transition."""
    params = m.input_params(t)
    ppools = [m.domain_of(tn) for tn in params.values()]
    pnames = list(params.keys())
    for valuation in iter_valuations(m):
        cfg = Configuration(t.source, valuation)
        for combo in itertools.product(*ppools):
            yield cfg, dict(zip(pnames, combo))


def with_predicate(t: Transition, predicate: Expr | None) -> Transition:
    return replace(t, predicate=predicate)
