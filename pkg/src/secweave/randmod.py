"""Seeded random model generation for property tests.

Every model produced here passes ``validate_model`` and survives a
serialize/parse round trip: names avoid keywords, enum symbols are globally
unique, and expressions are built so the printer and the parser agree on
shape (no empty or single-child connectives).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import machine as M
from .generation import ActionPattern, TestPurpose


@dataclass(frozen=True)
class RandSpec:
    """Size caps for generated models."""

    max_states: int = 6
    max_types: int = 3
    max_values: int = 3
    max_signals: int = 4
    max_params: int = 2
    max_transitions: int = 8
    max_vars: int = 2
    max_sets: int = 2
    range_chance: float = 0.25
    predicate_depth: int = 2


def random_model(rng: random.Random, spec: RandSpec = RandSpec()) -> M.Efsm:
    states = tuple(f"s{i}" for i in range(rng.randint(1, spec.max_states)))

    types: list[M.EnumType | M.RangeType] = []
    for i in range(rng.randint(1, spec.max_types)):
        if rng.random() < spec.range_chance:
            lo = rng.randint(-2, 2)
            types.append(M.RangeType(f"d{i}", lo, lo + rng.randint(0, spec.max_values - 1)))
        else:
            size = rng.randint(1, spec.max_values)
            types.append(M.EnumType(f"d{i}", tuple(f"d{i}v{j}" for j in range(size))))
    enum_types = [t for t in types if isinstance(t, M.EnumType)]

    # sets range over enum domains only; int members are covered by hand tests
    subsets: list[M.SubsetDecl] = []
    if enum_types:
        for i in range(rng.randint(0, spec.max_sets)):
            base = rng.choice(enum_types)
            members = tuple(v for v in base.values if rng.random() < 0.5)
            subsets.append(M.SubsetDecl(f"set{i}", base.name, members))

    consts: list[M.ConstDecl] = []
    if rng.random() < 0.3:
        consts.append(M.ConstDecl("c0", rng.randint(-3, 3)))

    signals = tuple(
        M.SignalDecl(
            f"g{i}",
            tuple(rng.choice(types).name for _ in range(rng.randint(0, spec.max_params))))
        for i in range(rng.randint(1, spec.max_signals)))

    variables: list[M.VarDecl] = []
    for i in range(rng.randint(0, spec.max_vars)):
        t = rng.choice(types)
        init = rng.choice(_domain(t)) if rng.random() < 0.5 else None
        variables.append(M.VarDecl(f"v{i}", t.name, init))

    ctx = _Ctx(rng, types, tuple(subsets), tuple(consts), tuple(variables))

    transitions: list[M.Transition] = []
    for _ in range(rng.randint(0, spec.max_transitions)):
        sig = rng.choice(signals)
        params = tuple(f"p{j}" for j in range(len(sig.param_types)))
        ctx.params = dict(zip(params, sig.param_types))
        predicate = (
            _bool_expr(ctx, spec.predicate_depth) if rng.random() < 0.5 else None)
        out = rng.choice(signals)
        args = tuple(_atom(ctx, t) for t in out.param_types)
        actions = tuple(
            M.Assignment(v.name, _atom(ctx, v.type_name))
            for v in variables if rng.random() < 0.3)
        transitions.append(M.Transition(
            source=rng.choice(states),
            target=rng.choice(states),
            input=M.InputDecl(sig.name, params),
            output=M.OutputDecl(out.name, args),
            predicate=predicate,
            actions=actions))

    return M.Efsm(
        system="Rand",
        name="proc",
        states=states,
        initial_state=states[0],
        types=tuple(types),
        subsets=tuple(subsets),
        consts=tuple(consts),
        variables=tuple(variables),
        signals=signals,
        transitions=tuple(transitions))


class _Ctx:
    def __init__(self, rng, types, subsets, consts, variables):
        self.rng = rng
        self.types = types
        self.subsets = subsets
        self.consts = consts
        self.variables = variables
        self.params: dict[str, str] = {}

    def by_name(self, tname):
        return next(t for t in self.types if t.name == tname)


def _domain(t) -> tuple:
    if isinstance(t, M.EnumType):
        return t.values
    return tuple(range(t.lo, t.hi + 1))


def _atom(ctx: _Ctx, tname: str) -> M.Expr:
    """A side-effect-free expression of the given declared type."""
    rng = ctx.rng
    pool: list[M.Expr] = [M.ParamRef(p) for p, pt in ctx.params.items() if pt == tname]
    pool += [M.VarRef(v.name) for v in ctx.variables if v.type_name == tname]
    t = ctx.by_name(tname)
    if not pool or rng.random() < 0.4:
        pool.append(M.Lit(rng.choice(_domain(t))))
    return rng.choice(pool)


def _int_atom(ctx: _Ctx) -> M.Expr:
    rng = ctx.rng
    ranges = [t for t in ctx.types if isinstance(t, M.RangeType)]
    pool: list[M.Expr] = [M.Lit(rng.randint(-3, 3))]
    # consts are inlined to literals, matching how source text resolves them
    pool += [M.Lit(c.value) for c in ctx.consts]
    for t in ranges:
        pool += [M.ParamRef(p) for p, pt in ctx.params.items() if pt == t.name]
        pool += [M.VarRef(v.name) for v in ctx.variables if v.type_name == t.name]
    return rng.choice(pool)


def _leaf(ctx: _Ctx) -> M.Expr:
    rng = ctx.rng
    kinds = ["eq", "ord"]
    if ctx.subsets:
        kinds.append("member")
    kind = rng.choice(kinds)
    if kind == "member":
        s = rng.choice(ctx.subsets)
        return M.MemberOf(_atom(ctx, s.domain), s.name)
    if kind == "ord":
        op = rng.choice(("<", "<=", ">", ">="))
        return M.Compare(op, _int_atom(ctx), _int_atom(ctx))
    tname = rng.choice(ctx.types).name
    op = rng.choice(("=", "<>"))
    return M.Compare(op, _atom(ctx, tname), _atom(ctx, tname))


def _bool_expr(ctx: _Ctx, depth: int) -> M.Expr:
    rng = ctx.rng
    if depth <= 0 or rng.random() < 0.4:
        return _leaf(ctx)
    kind = rng.choice(("and", "or", "not"))
    if kind == "not":
        return M.Not(_bool_expr(ctx, depth - 1))
    items = tuple(_bool_expr(ctx, depth - 1) for _ in range(rng.randint(2, 3)))
    return M.And(items) if kind == "and" else M.Or(items)


def random_purpose(rng: random.Random, m: M.Efsm) -> TestPurpose:
    """A random objective over the model, with at least one condition set."""
    def pattern():
        sig = rng.choice(m.signals)
        if rng.random() < 0.5:
            return ActionPattern(sig.name, None)
        args = tuple(rng.choice(m.domain_of(t)) for t in sig.param_types)
        return ActionPattern(sig.name, args)

    while True:
        fields = dict(
            source=rng.choice(m.states) if rng.random() < 0.4 else None,
            destination=rng.choice(m.states) if rng.random() < 0.4 else None,
            input=pattern() if rng.random() < 0.6 else None,
            output=pattern() if rng.random() < 0.4 else None)
        if any(v is not None for v in fields.values()):
            return TestPurpose(
                instance=(m.name, 0) if rng.random() < 0.3 else None, **fields)
