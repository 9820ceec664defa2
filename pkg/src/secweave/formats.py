"""Text formats: model files, test purposes, weave configs, test cases.

Four line-oriented UTF-8 formats share one tokenizer:

* ``.mdl``       a behavioral model (system, types, sets, signals, process)
* ``.purposes``  sequences of step conditions guiding test generation
* ``.weave``     observation synthesis settings for policy weaving
* ``.tc``        emitted test cases, one ``?sig{args} !sig{args}`` per line

Parsers report failures with exact source positions.  Serializers produce
text that parses back to a structurally identical value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import machine as M
from .errors import ParseError, ResolutionError, SourceSpan
from .generation import ActionPattern, TestPurpose, TestCase, TcStep
from .weaving import ObservationRule, WeaveConfig

_MDL_KEYWORDS = frozenset({
    "system", "endsystem", "const", "type", "enum", "endenum", "range",
    "set", "of", "signal", "process", "endprocess", "var", "private",
    "state", "endstate", "init", "input", "provided", "output", "do",
    "nextstate", "and", "or", "not", "in", "true", "false",
})
_PURPOSE_KEYWORDS = frozenset({
    "purpose", "instance", "source", "destination", "input", "output",
    "true", "false",
})
_WEAVE_KEYWORDS = frozenset({"observations", "on", "off", "deny", "stay"})

_SYMBOLS = (
    ":=", "<=", ">=", "<>", "->", "..",
    "(", ")", "{", "}", ";", ",", "=", "<", ">", "-",
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "kw" | symbol text | "eof"
    text: str
    span: SourceSpan


def _tokenize(text: str, file: str, keywords: frozenset[str]) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def span() -> SourceSpan:
        return SourceSpan(file, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                raise ParseError("unterminated comment", span())
            chunk = text[i:j + 2]
            nl = chunk.count("\n")
            if nl:
                line += nl
                col = len(chunk) - chunk.rfind("\n")
            else:
                col += len(chunk)
            i = j + 2
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "kw" if word in keywords else "ident"
            tokens.append(Token(kind, word, span()))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], span()))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, span()))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", span())
    tokens.append(Token("eof", "", SourceSpan(file, line, col)))
    return tokens


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at_kw(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "kw" and t.text == word

    def accept_kw(self, word: str) -> bool:
        if self.at_kw(word):
            self.next()
            return True
        return False

    def expect_kw(self, word: str) -> Token:
        t = self.peek()
        if t.kind == "kw" and t.text == word:
            return self.next()
        raise ParseError(f"expected {word!r}, found {self._show(t)}", t.span)

    def accept(self, kind: str) -> Token | None:
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind == kind:
            return self.next()
        want = {"ident": "a name", "int": "a number"}.get(kind, repr(kind))
        raise ParseError(f"expected {want}, found {self._show(t)}", t.span)

    def ident(self) -> Token:
        return self.expect("ident")

    @staticmethod
    def _show(t: Token) -> str:
        return "end of input" if t.kind == "eof" else repr(t.text)


def _semi(s: _Stream) -> None:
    s.expect(";")


def _opt_semi(s: _Stream) -> None:
    s.accept(";")


# ---------------------------------------------------------------------------
# model format

def parse_model(text: str, file: str = "<model>") -> M.Efsm:
    """Parse model text into a machine.

    Grammar sketch (``;`` between clauses of a transition is optional)::

        system <id>;
        const <id> = <int>;                    // 0+, integer constants
        type <id> = enum <id>, ... endenum;    // or: range <int> .. <int>
        set <id> of <type> = { <value>, ... };
        signal <id>(<type>, ...);
        process <id>(1);
          var <name> <type> [private] [:= <value>];
          state <id> [init];
            input <sig>(<param>, ...)
            [provided <expr>]
            output <sig>(<arg-expr>, ...)
            [do <var> := <expr>, ...]
            nextstate <id>;
          endstate;
        endprocess;
        endsystem;

    A state may be opened more than once; its transitions accumulate in
    file order and the state's position is its first appearance.
    """
    s = _Stream(_tokenize(text, file, _MDL_KEYWORDS))
    s.expect_kw("system")
    system = s.ident().text
    _semi(s)

    types: list[M.TypeDecl] = []
    subsets: list[M.SubsetDecl] = []
    consts: list[M.ConstDecl] = []
    signals: list[M.SignalDecl] = []

    while True:
        if s.accept_kw("const"):
            name = s.ident().text
            s.expect("=")
            value = _parse_int(s)
            _semi(s)
            consts.append(M.ConstDecl(name, value))
        elif s.accept_kw("type"):
            name = s.ident().text
            s.expect("=")
            if s.accept_kw("enum"):
                values = [s.ident().text]
                while s.accept(","):
                    values.append(s.ident().text)
                s.expect_kw("endenum")
                types.append(M.EnumType(name, tuple(values)))
            elif s.accept_kw("range"):
                lo = _parse_int(s)
                s.expect("..")
                hi = _parse_int(s)
                types.append(M.RangeType(name, lo, hi))
            else:
                t = s.peek()
                raise ParseError(f"expected 'enum' or 'range', found {s._show(t)}", t.span)
            _semi(s)
        elif s.accept_kw("set"):
            name = s.ident().text
            s.expect_kw("of")
            domain = s.ident().text
            s.expect("=")
            s.expect("{")
            members: list[M.Value] = []
            if not s.peek().kind == "}":
                members.append(_parse_value_token(s))
                while s.accept(","):
                    members.append(_parse_value_token(s))
            s.expect("}")
            _semi(s)
            subsets.append(M.SubsetDecl(name, domain, tuple(members)))
        elif s.accept_kw("signal"):
            name = s.ident().text
            s.expect("(")
            param_types: list[str] = []
            if s.peek().kind != ")":
                param_types.append(s.ident().text)
                while s.accept(","):
                    param_types.append(s.ident().text)
            s.expect(")")
            _semi(s)
            signals.append(M.SignalDecl(name, tuple(param_types)))
        else:
            break

    tok = s.expect_kw("process")
    process = s.ident().text
    s.expect("(")
    count_tok = s.peek()
    count = _parse_int(s)
    if count != 1:
        raise ParseError("exactly one process instance is supported", count_tok.span)
    s.expect(")")
    _semi(s)

    const_env = {c.name: c.value for c in consts}
    var_decls: list[M.VarDecl] = []
    # resolution environments built incrementally so inits/exprs can refer back
    enum_symbols: dict[str, str] = {}
    for t in types:
        if isinstance(t, M.EnumType):
            for v in t.values:
                enum_symbols.setdefault(v, t.name)

    while s.accept_kw("var"):
        vname = s.ident().text
        vtype = s.ident().text
        s.accept_kw("private")
        init: M.Value | None = None
        if s.accept(":="):
            init = _parse_value_token(s)
        _semi(s)
        var_decls.append(M.VarDecl(vname, vtype, init))

    var_names = {v.name for v in var_decls}
    states: list[str] = []
    initial: str | None = None
    transitions: list[M.Transition] = []
    signal_by_name = {sig.name: sig for sig in signals}

    def resolve_expr_ident(tok: Token, params: dict[str, str]) -> M.Expr:
        name = tok.text
        if name in params:
            return M.ParamRef(name)
        if name in var_names:
            return M.VarRef(name)
        if name in const_env:
            return M.Lit(const_env[name])
        if name in enum_symbols:
            return M.Lit(name)
        raise ResolutionError(f"unknown name {name!r}", tok.span)

    set_names = {sub.name for sub in subsets}

    def parse_expr(params: dict[str, str]) -> M.Expr:
        return parse_or(params)

    def parse_or(params: dict[str, str]) -> M.Expr:
        items = [parse_and(params)]
        while s.accept_kw("or"):
            items.append(parse_and(params))
        return items[0] if len(items) == 1 else M.Or(tuple(items))

    def parse_and(params: dict[str, str]) -> M.Expr:
        items = [parse_not(params)]
        while s.accept_kw("and"):
            items.append(parse_not(params))
        return items[0] if len(items) == 1 else M.And(tuple(items))

    def parse_not(params: dict[str, str]) -> M.Expr:
        if s.accept_kw("not"):
            return M.Not(parse_not(params))
        return parse_rel(params)

    def parse_rel(params: dict[str, str]) -> M.Expr:
        left = parse_atom(params)
        t = s.peek()
        if t.kind in M.COMPARE_OPS:
            s.next()
            right = parse_atom(params)
            return M.Compare(t.kind, left, right)
        if s.accept_kw("in"):
            set_tok = s.ident()
            if set_tok.text not in set_names:
                raise ResolutionError(f"unknown set {set_tok.text!r}", set_tok.span)
            return M.MemberOf(left, set_tok.text)
        return left

    def parse_atom(params: dict[str, str]) -> M.Expr:
        t = s.peek()
        if s.accept("("):
            e = parse_expr(params)
            s.expect(")")
            return e
        if s.accept_kw("true"):
            return M.Lit(True)
        if s.accept_kw("false"):
            return M.Lit(False)
        if t.kind == "int" or t.kind == "-":
            return M.Lit(_parse_int(s))
        if t.kind == "ident":
            s.next()
            return resolve_expr_ident(t, params)
        raise ParseError(f"expected an expression, found {s._show(t)}", t.span)

    target_spans: list[SourceSpan] = []
    while s.at_kw("state"):
        s.next()
        st_tok = s.ident()
        st = st_tok.text
        if st not in states:
            states.append(st)
        if s.accept_kw("init"):
            if initial is not None and initial != st:
                raise ParseError(f"initial state already declared as {initial!r}", st_tok.span)
            initial = st
        _semi(s)
        while s.at_kw("input"):
            s.next()
            in_tok = s.ident()
            if in_tok.text not in signal_by_name:
                raise ResolutionError(f"unknown signal {in_tok.text!r}", in_tok.span)
            s.expect("(")
            params_list: list[str] = []
            if s.peek().kind != ")":
                params_list.append(s.ident().text)
                while s.accept(","):
                    params_list.append(s.ident().text)
            s.expect(")")
            _opt_semi(s)
            sig = signal_by_name[in_tok.text]
            if len(sig.param_types) != len(params_list):
                raise ResolutionError(
                    f"signal {sig.name!r} takes {len(sig.param_types)} parameters, "
                    f"{len(params_list)} bound", in_tok.span)
            params = dict(zip(params_list, sig.param_types))

            predicate: M.Expr | None = None
            if s.accept_kw("provided"):
                predicate = parse_expr(params)
                _opt_semi(s)

            s.expect_kw("output")
            out_tok = s.ident()
            if out_tok.text not in signal_by_name:
                raise ResolutionError(f"unknown signal {out_tok.text!r}", out_tok.span)
            s.expect("(")
            args: list[M.Expr] = []
            if s.peek().kind != ")":
                args.append(parse_expr(params))
                while s.accept(","):
                    args.append(parse_expr(params))
            s.expect(")")
            _opt_semi(s)

            actions: list[M.Assignment] = []
            if s.accept_kw("do"):
                while True:
                    var_tok = s.ident()
                    if var_tok.text not in var_names:
                        raise ResolutionError(f"unknown variable {var_tok.text!r}", var_tok.span)
                    s.expect(":=")
                    actions.append(M.Assignment(var_tok.text, parse_expr(params)))
                    if not s.accept(","):
                        break
                _opt_semi(s)

            s.expect_kw("nextstate")
            tgt_tok = s.ident()
            _semi(s)
            target_spans.append(tgt_tok.span)
            transitions.append(M.Transition(
                source=st, target=tgt_tok.text,
                input=M.InputDecl(in_tok.text, tuple(params_list)),
                output=M.OutputDecl(out_tok.text, tuple(args)),
                predicate=predicate, actions=tuple(actions)))
        s.expect_kw("endstate")
        _opt_semi(s)

    s.expect_kw("endprocess")
    _opt_semi(s)
    s.expect_kw("endsystem")
    _opt_semi(s)
    t = s.peek()
    if t.kind != "eof":
        raise ParseError(f"unexpected {s._show(t)} after endsystem", t.span)

    if not states:
        raise ParseError("process declares no states", t.span)
    if initial is None:
        raise ParseError("no state is marked init", t.span)
    known = set(states)
    for tr, span in zip(transitions, target_spans):
        if tr.target not in known:
            raise ResolutionError(f"unknown state {tr.target!r}", span)

    return M.Efsm(
        system=system, name=process,
        states=tuple(states), initial_state=initial,
        types=tuple(types), subsets=tuple(subsets), consts=tuple(consts),
        variables=tuple(var_decls), signals=tuple(signals),
        transitions=tuple(transitions))


def _parse_int(s: _Stream) -> int:
    negative = bool(s.accept("-"))
    tok = s.expect("int")
    return -int(tok.text) if negative else int(tok.text)


def _parse_value_token(s: _Stream) -> M.Value:
    t = s.peek()
    if s.accept_kw("true"):
        return True
    if s.accept_kw("false"):
        return False
    if t.kind == "int" or t.kind == "-":
        return _parse_int(s)
    return s.ident().text


# -- serialization --

_PREC = {"or": 1, "and": 2, "not": 3, "rel": 4, "atom": 5}


def expr_to_text(e: M.Expr) -> str:
    return _expr_text(e, 0)


def _expr_text(e: M.Expr, need: int) -> str:
    if isinstance(e, M.Lit):
        text, prec = M.render_value(e.value), _PREC["atom"]
    elif isinstance(e, (M.VarRef, M.ParamRef)):
        text, prec = e.name, _PREC["atom"]
    elif isinstance(e, M.Compare):
        text = f"{_expr_text(e.left, _PREC['atom'])} {e.op} {_expr_text(e.right, _PREC['atom'])}"
        prec = _PREC["rel"]
    elif isinstance(e, M.MemberOf):
        text = f"{_expr_text(e.item, _PREC['atom'])} in {e.set_name}"
        prec = _PREC["rel"]
    elif isinstance(e, M.Not):
        text = f"not {_expr_text(e.item, _PREC['not'])}"
        prec = _PREC["not"]
    elif isinstance(e, M.And):
        text = " and ".join(_expr_text(x, _PREC["not"]) for x in e.items)
        prec = _PREC["and"]
    elif isinstance(e, M.Or):
        text = " or ".join(_expr_text(x, _PREC["and"]) for x in e.items)
        prec = _PREC["or"]
    else:
        raise TypeError(f"not an expression node: {e!r}")
    return f"({text})" if prec < need else text


def serialize_model(m: M.Efsm) -> str:
    """Render a machine as model text; parsing it back restores the machine."""
    out: list[str] = [f"system {m.system};", ""]
    for t in m.types:
        if isinstance(t, M.EnumType):
            out.append(f"type {t.name} = enum {', '.join(t.values)} endenum;")
        else:
            out.append(f"type {t.name} = range {t.lo} .. {t.hi};")
    if m.types:
        out.append("")
    for sub in m.subsets:
        body = ", ".join(M.render_value(v) for v in sub.members)
        out.append(f"set {sub.name} of {sub.domain} = {{ {body} }};" if body
                   else f"set {sub.name} of {sub.domain} = {{}};")
    if m.subsets:
        out.append("")
    for c in m.consts:
        out.append(f"const {c.name} = {c.value};")
    if m.consts:
        out.append("")
    for sig in m.signals:
        out.append(f"signal {sig.name}({', '.join(sig.param_types)});")
    if m.signals:
        out.append("")
    out.append(f"process {m.name}(1);")
    out.append("")
    for v in m.variables:
        init = f" := {M.render_value(v.init)}" if v.init is not None else ""
        out.append(f"  var {v.name} {v.type_name}{init};")
    if m.variables:
        out.append("")

    index = {st: i for i, st in enumerate(m.states)}
    grouped = all(
        index[a.source] <= index[b.source]
        for a, b in zip(m.transitions, m.transitions[1:]))

    def emit_state(st: str, transitions: list[M.Transition], mark_init: bool) -> None:
        head = f"  state {st} init;" if mark_init else f"  state {st};"
        out.append(head)
        for tr in transitions:
            out.append(f"    input {tr.input.signal}({', '.join(tr.input.params)});")
            if tr.predicate is not None:
                out.append(f"    provided {expr_to_text(tr.predicate)};")
            args = ", ".join(expr_to_text(a) for a in tr.output.args)
            out.append(f"    output {tr.output.signal}({args});")
            if tr.actions:
                body = ", ".join(f"{a.var} := {expr_to_text(a.expr)}" for a in tr.actions)
                out.append(f"    do {body};")
            out.append(f"    nextstate {tr.target};")
        out.append("  endstate;")

    if grouped:
        by_state: dict[str, list[M.Transition]] = {st: [] for st in m.states}
        for tr in m.transitions:
            by_state[tr.source].append(tr)
        for st in m.states:
            emit_state(st, by_state[st], st == m.initial_state)
    else:
        # transition order is not grouped by state; declare all states
        # first, then reopen one block per run of equal sources
        for st in m.states:
            emit_state(st, [], st == m.initial_state)
        run: list[M.Transition] = []
        for tr in m.transitions:
            if run and run[-1].source != tr.source:
                emit_state(run[0].source, run, False)
                run = []
            run.append(tr)
        if run:
            emit_state(run[0].source, run, False)

    out.append("")
    out.append("endprocess;")
    out.append("endsystem;")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# test-purpose format

def parse_purposes(text: str, m: M.Efsm, file: str = "<purposes>") -> tuple[TestPurpose, ...]:
    """Parse purpose blocks against a model.

    Each block is ``purpose { <conditions> }`` with one condition per line:
    ``instance {<process>}<index>;``, ``source <state>;``,
    ``destination <state>;``, ``input <sig>[(<values>)];``,
    ``output <sig>[(<values>)];``.  Omitted conditions match anything; a
    signal without a parenthesized list matches any argument values.
    """
    s = _Stream(_tokenize(text, file, _PURPOSE_KEYWORDS))
    purposes: list[TestPurpose] = []
    while s.at_kw("purpose"):
        blk_tok = s.next()
        s.expect("{")
        instance = source = destination = None
        input_p = output_p = None
        while not s.accept("}"):
            t = s.peek()
            if s.accept_kw("instance"):
                s.expect("{")
                proc_tok = s.ident()
                s.expect("}")
                idx_tok = s.peek()
                idx = _parse_int(s)
                if proc_tok.text != m.name:
                    raise ResolutionError(f"unknown process {proc_tok.text!r}", proc_tok.span)
                if idx != 0:
                    raise ResolutionError("only instance 0 exists", idx_tok.span)
                instance = (proc_tok.text, idx)
            elif s.accept_kw("source"):
                source = _expect_state(s, m)
            elif s.accept_kw("destination"):
                destination = _expect_state(s, m)
            elif s.accept_kw("input"):
                input_p = _parse_pattern(s, m)
            elif s.accept_kw("output"):
                output_p = _parse_pattern(s, m)
            else:
                raise ParseError(f"expected a condition, found {s._show(t)}", t.span)
            _semi(s)
        _opt_semi(s)
        if instance is None and source is None and destination is None \
                and input_p is None and output_p is None:
            raise ParseError("purpose block has no conditions", blk_tok.span)
        purposes.append(TestPurpose(
            instance=instance, source=source, destination=destination,
            input=input_p, output=output_p))
    t = s.peek()
    if t.kind != "eof":
        raise ParseError(f"expected 'purpose', found {s._show(t)}", t.span)
    return tuple(purposes)


def _expect_state(s: _Stream, m: M.Efsm) -> str:
    tok = s.ident()
    if tok.text not in m.states:
        raise ResolutionError(f"unknown state {tok.text!r}", tok.span)
    return tok.text


def _parse_pattern(s: _Stream, m: M.Efsm) -> ActionPattern:
    sig_tok = s.ident()
    sig = m.signal_by_name.get(sig_tok.text)
    if sig is None:
        raise ResolutionError(f"unknown signal {sig_tok.text!r}", sig_tok.span)
    args: tuple[M.Value, ...] | None = None
    if s.accept("("):
        got: list[M.Value] = []
        if s.peek().kind != ")":
            got.append(_parse_value_token(s))
            while s.accept(","):
                got.append(_parse_value_token(s))
        close = s.expect(")")
        if len(got) != len(sig.param_types):
            raise ResolutionError(
                f"signal {sig.name!r} takes {len(sig.param_types)} arguments, "
                f"pattern has {len(got)}", close.span)
        for v, tn in zip(got, sig.param_types):
            if not M.value_in_domain(v, m.domain_of(tn)):
                raise ResolutionError(f"value {v!r} outside domain {tn!r}", close.span)
        args = tuple(got)
    return ActionPattern(sig_tok.text, args)


def serialize_purposes(purposes: tuple[TestPurpose, ...] | list[TestPurpose]) -> str:
    out: list[str] = []
    for p in purposes:
        out.append("purpose {")
        if p.instance is not None:
            out.append(f"  instance {{{p.instance[0]}}}{p.instance[1]};")
        if p.source is not None:
            out.append(f"  source {p.source};")
        if p.destination is not None:
            out.append(f"  destination {p.destination};")
        if p.input is not None:
            out.append(f"  input {_pattern_text(p.input)};")
        if p.output is not None:
            out.append(f"  output {_pattern_text(p.output)};")
        out.append("}")
    return "\n".join(out) + ("\n" if out else "")


def _pattern_text(p: ActionPattern) -> str:
    if p.args is None:
        return p.signal
    return f"{p.signal}({', '.join(M.render_value(v) for v in p.args)})"


# ---------------------------------------------------------------------------
# weave-config format

def parse_weave_config(text: str, m: M.Efsm, file: str = "<weave>") -> WeaveConfig:
    """Parse observation settings.

    Statements: ``observations on;`` / ``observations off;`` (at most one,
    default off) and ``deny <input-signal> -> <output-signal> <stay|state>;``.
    The deny output signal may be new; it is declared during weaving.
    """
    s = _Stream(_tokenize(text, file, _WEAVE_KEYWORDS))
    emit: bool | None = None
    rules: list[ObservationRule] = []
    seen: set[str] = set()
    while s.peek().kind != "eof":
        t = s.peek()
        if s.accept_kw("observations"):
            if emit is not None:
                raise ParseError("duplicate observations setting", t.span)
            if s.accept_kw("on"):
                emit = True
            elif s.accept_kw("off"):
                emit = False
            else:
                bad = s.peek()
                raise ParseError(f"expected 'on' or 'off', found {s._show(bad)}", bad.span)
            _semi(s)
        elif s.accept_kw("deny"):
            in_tok = s.ident()
            sig = m.signal_by_name.get(in_tok.text)
            if sig is None:
                raise ResolutionError(f"unknown signal {in_tok.text!r}", in_tok.span)
            if in_tok.text in seen:
                raise ParseError(f"duplicate deny mapping for {in_tok.text!r}", in_tok.span)
            seen.add(in_tok.text)
            s.expect("->")
            out_tok = s.ident()
            declared = m.signal_by_name.get(out_tok.text)
            if declared is not None and declared.param_types:
                raise ResolutionError(
                    f"deny output {out_tok.text!r} is declared with parameters", out_tok.span)
            target: str | None
            if s.accept_kw("stay"):
                target = None
            else:
                st_tok = s.ident()
                if st_tok.text not in m.states:
                    raise ResolutionError(f"unknown state {st_tok.text!r}", st_tok.span)
                target = st_tok.text
            _semi(s)
            rules.append(ObservationRule(in_tok.text, out_tok.text, target))
        else:
            raise ParseError(f"expected 'observations' or 'deny', found {s._show(t)}", t.span)
    return WeaveConfig(emit_observations=bool(emit), observation_map=tuple(rules))


def serialize_weave_config(cfg: WeaveConfig) -> str:
    out = [f"observations {'on' if cfg.emit_observations else 'off'};"]
    for r in cfg.observation_map:
        target = "stay" if r.deny_target is None else r.deny_target
        out.append(f"deny {r.input_signal} -> {r.deny_output} {target};")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# test-case format

_STEP_RE = re.compile(r"^\?(\w+)\{([^{}]*)\} !(\w+)\{([^{}]*)\}$")
_HIT_RE = re.compile(r"^// hit: purpose (\d+)$")


def emit_testcase(tc: TestCase) -> str:
    """Render a test case, one step per line; hit steps get a comment line."""
    hit_for_step = {step_idx: purpose_idx for purpose_idx, step_idx in enumerate(tc.hits)}
    lines: list[str] = []
    for i, step in enumerate(tc.steps):
        if i in hit_for_step:
            lines.append(f"// hit: purpose {hit_for_step[i] + 1}")
        lines.append(f"?{step.input.render()} !{step.output.render()}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_testcase(text: str, file: str = "<testcase>") -> TestCase:
    """Read test-case text back into steps (inverse of emit_testcase)."""
    steps: list[TcStep] = []
    hits: dict[int, int] = {}
    pending_hit: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        hm = _HIT_RE.match(line)
        if hm:
            pending_hit = int(hm.group(1)) - 1
            continue
        if line.startswith("//"):
            continue
        sm = _STEP_RE.match(line)
        if not sm:
            raise ParseError("malformed step line", SourceSpan(file, lineno, 1))
        in_sig, in_args, out_sig, out_args = sm.groups()
        steps.append(TcStep(
            M.ActionInstance(in_sig, _parse_tc_args(in_args)),
            M.ActionInstance(out_sig, _parse_tc_args(out_args))))
        if pending_hit is not None:
            hits[pending_hit] = len(steps) - 1
            pending_hit = None
    ordered = tuple(hits[i] for i in sorted(hits))
    return TestCase(steps=tuple(steps), hits=ordered)


def _parse_tc_args(text: str) -> tuple[M.Value, ...]:
    if not text:
        return ()
    out: list[M.Value] = []
    for piece in text.split(","):
        piece = piece.strip()
        if piece == "true":
            out.append(True)
        elif piece == "false":
            out.append(False)
        elif re.fullmatch(r"-?\d+", piece):
            out.append(int(piece))
        else:
            out.append(piece)
    return tuple(out)
