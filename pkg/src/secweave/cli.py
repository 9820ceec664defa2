"""Command line front end.

Exit codes: 0 success, 2 unreadable or unparsable input, 3 weave failure,
4 test generation gave up (the partial trace is still written).
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings as _warnings
from pathlib import Path

from . import formats
from . import machine as M
from . import simulation, weaving, xacml
from .errors import (
    DeadlockedCursor,
    Exhausted,
    InvalidChoice,
    MissingObservationMapping,
    NondeterministicAt,
    NothingToUndo,
    ParseError,
    SchemaError,
    UnknownParam,
    UnknownSignal,
    UnknownState,
    UnsupportedFeature,
    UnsupportedFunction,
    WeaveError,
    XmlError,
)
from .generation import GenParams, generate_objectives, generate_with_report

_INPUT_ERRORS = (
    ParseError, XmlError, SchemaError, UnsupportedFeature,
    UnsupportedFunction, UnknownState, UnknownSignal, UnknownParam,
    NondeterministicAt, ValueError, OSError)
_WEAVE_ERRORS = (WeaveError, MissingObservationMapping)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _WEAVE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="secweave",
        description="Weave access-control policies into state-machine models "
                    "and generate conformance tests.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse a model and report problems")
    v.add_argument("model", help="model file (.mdl)")
    v.set_defaults(fn=cmd_validate)

    w = sub.add_parser("weave", help="strengthen a model with a policy")
    w.add_argument("model")
    w.add_argument("policy", help="policy file (.xml)")
    w.add_argument("--config", help="weave options file (.weave)")
    w.add_argument("-o", "--output", help="woven model destination")
    w.add_argument("--report", help="weave report destination")
    w.set_defaults(fn=cmd_weave)

    s = sub.add_parser("simulate", help="step through a model interactively")
    s.add_argument("model")
    s.set_defaults(fn=cmd_simulate)

    o = sub.add_parser(
        "objectives", help="derive one objective per value of a parameter")
    o.add_argument("model")
    o.add_argument("--state", required=True, help="source state to probe")
    o.add_argument("--input", required=True, help="input signal name")
    o.add_argument("--param", required=True, help="parameter to sweep")
    o.add_argument("-o", "--output", help="purposes destination")
    o.set_defaults(fn=cmd_objectives)

    t = sub.add_parser("testgen", help="generate a test case from purposes")
    t.add_argument("model")
    t.add_argument("purposes", help="purposes file (.purposes)")
    t.add_argument("--depth-limit", type=int, default=10)
    t.add_argument("--max-jumps", type=int, default=100)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--max-steps", type=int, default=10000)
    t.add_argument("-o", "--output", help="test case destination (.tc)")
    t.set_defaults(fn=cmd_testgen)

    srv = sub.add_parser("serve", help="run the HTTP API")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument(
        "--port", type=int, default=None,
        help="defaults to $SECWEAVE_PORT, then 8000")
    srv.add_argument(
        "--state-dir",
        help="write uploaded models and weave reports into this directory")
    srv.set_defaults(fn=cmd_serve)

    return p


def _load_model(path: str) -> M.Efsm:
    return formats.parse_model(Path(path).read_text(encoding="utf-8"), file=path)


def _write_out(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        # exact bytes: reruns with the same seed must produce identical files
        Path(path).write_bytes(text.encode("utf-8"))


def cmd_validate(args) -> int:
    m = _load_model(args.model)
    diagnostics = M.validate_model(m)
    for d in diagnostics:
        print(f"{d.location}: {d.message}", file=sys.stderr)
    if diagnostics:
        return 2
    print(f"ok: {M.model_stats(m).render()} (states/transitions/signals)")
    return 0


def cmd_weave(args) -> int:
    m = _load_model(args.model)
    policy = xacml.parse_policy(Path(args.policy).read_text(encoding="utf-8"))
    if args.config:
        cfg = formats.parse_weave_config(
            Path(args.config).read_text(encoding="utf-8"), m,
            file=args.config)
    else:
        cfg = weaving.WeaveConfig()
    woven, report = weaving.weave(m, policy, cfg)
    rendered = report.render(woven)
    _write_out(args.output, formats.serialize_model(woven))
    if args.report:
        Path(args.report).write_text(rendered, encoding="utf-8")
    # keep stdout clean for the model when no -o is given
    print(rendered, file=sys.stdout if args.output else sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    s = simulation.new_session(_load_model(args.model))
    out = sys.stdout
    while True:
        out.write(simulation.render_session(s))
        out.write("choice ? ")
        out.flush()
        line = sys.stdin.readline()
        if not line:
            out.write("\n")
            return 0
        cmd = line.strip()
        if cmd in ("q", "quit"):
            return 0
        if cmd in ("u", "undo"):
            try:
                s = simulation.undo(s)
            except NothingToUndo as exc:
                out.write(f"error: {exc}\n")
        elif cmd in ("t", "testcase"):
            out.write(formats.emit_testcase(simulation.trace_to_testcase(s))
                      or "(no steps yet)\n")
        elif cmd.lstrip("-").isdigit():
            try:
                s = simulation.step(s, int(cmd))
            except InvalidChoice as exc:
                out.write(f"error: {exc}\n")
        elif cmd:
            out.write("commands: <number> step, u undo, t testcase, q quit\n")


def cmd_objectives(args) -> int:
    m = _load_model(args.model)
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        purposes = generate_objectives(m, args.state, args.input, args.param)
    for w in caught:
        print(f"note: {w.message}", file=sys.stderr)
    _write_out(args.output, formats.serialize_purposes(tuple(purposes)))
    return 0


def cmd_testgen(args) -> int:
    m = _load_model(args.model)
    seq = formats.parse_purposes(
        Path(args.purposes).read_text(encoding="utf-8"), m, file=args.purposes)
    gp = GenParams(
        depth_limit=args.depth_limit, max_jumps=args.max_jumps,
        rng_seed=args.seed, max_total_steps=args.max_steps)
    try:
        result = generate_with_report(m, seq, gp)
    except (Exhausted, DeadlockedCursor) as exc:
        partial = getattr(exc, "partial", None)
        _write_out(args.output, formats.emit_testcase(partial) if partial else "")
        print(f"error: {exc}", file=sys.stderr)
        if args.output:
            print(f"partial trace written to {args.output}", file=sys.stderr)
        return 4
    _write_out(args.output, formats.emit_testcase(result.testcase))
    if args.output:
        hit = len(result.report.hits)
        print(f"{len(result.testcase.steps)} steps, {result.report.jumps} "
              f"jumps, {hit}/{len(seq)} objectives hit")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port
    if port is None:
        port = int(os.environ.get("SECWEAVE_PORT", "8000"))
    uvicorn.run(create_app(state_dir=args.state_dir), host=args.host,
                port=port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
