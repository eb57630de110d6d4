"""Command-line entry point: check, encode, solve, oracle, scan, play, serve.

Exit codes: 0 success, 1 usage, 2 parse/validation failure, 3 solver
missing, 4 internal error.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import os
import sys
from pathlib import Path

from .circuit import tseitin_to_qdimacs, write_qcir
from .encoder import EncodingError, encode
from .oracle import Oracle, check_sanity
from .parser import BddlError, parse_domain, parse_problem, validate_instance
from .play import (
    MalformedMove,
    SessionRefused,
    render_board,
    start_session,
    submit_white_move,
)
from .semantics import Move, Side
from .solvers import (
    QDIMACS,
    SolverSpec,
    depth_scan,
    discover_solver,
    formula_stats,
    solve_with_solver,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NO_SOLVER = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits 2; we reserve that
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_USAGE)


def _load(args) -> tuple:
    dom = parse_domain(Path(args.domain).read_text("utf-8"))
    inst = parse_problem(Path(args.problem).read_text("utf-8"))
    depth = getattr(args, "depth", None)
    if depth is not None:
        if depth < 1:
            raise ValueError("--depth must be positive")
        inst = dataclasses.replace(inst, depth=depth)
    return dom, inst


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_check(args) -> int:
    dom, inst = _load(args)
    diagnostics = validate_instance(dom, inst)
    sanity = check_sanity(dom, inst, budget=args.budget)
    payload = {
        "diagnostics": [
            {"level": d.level, "code": d.code, "message": d.message} for d in diagnostics
        ],
        "sanity": {
            "status": sanity.status,
            "violations": sanity.violations,
            "nodesVisited": sanity.nodes_visited,
        },
    }
    lines = [str(d) for d in diagnostics]
    lines.append(f"sanity: {sanity.status} ({sanity.nodes_visited} states visited)")
    lines += [f"  violation: {v}" for v in sanity.violations]
    _emit(args, payload, "\n".join(lines))
    has_errors = any(d.level == "error" for d in diagnostics)
    return EXIT_PARSE if has_errors or sanity.status == "violation" else EXIT_OK


def cmd_encode(args) -> int:
    dom, inst = _load(args)
    enc = encode(dom, inst)
    buf = io.StringIO()
    if args.format == "qcir":
        write_qcir(enc.circuit, buf)
    else:
        tseitin_to_qdimacs(enc.circuit, buf)
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)
    stats = formula_stats(dom, inst, args.format)
    summary = ", ".join(f"{k}={v}" for k, v in stats.items())
    payload = {"format": args.format, "out": args.out, **stats}
    if args.out or args.json:
        _emit(args, payload, f"wrote {args.format} ({summary})")
    else:
        print(f"c {summary}", file=sys.stderr)
    return EXIT_OK


def cmd_oracle(args) -> int:
    dom, inst = _load(args)
    result = Oracle(dom, inst).solve()
    if result.black_wins:
        mv = result.principal_move
        name = dom.black_actions[mv.action_index].name
        text = (
            f"Black wins within depth {inst.depth}; principal move: "
            f"{name} at ({mv.i},{mv.j})  [{result.nodes_expanded} nodes]"
        )
    else:
        text = f"No winning strategy within depth {inst.depth}  [{result.nodes_expanded} nodes]"
    payload = {
        "blackWins": result.black_wins,
        "depth": inst.depth,
        "nodesExpanded": result.nodes_expanded,
        "principalMove": None
        if result.principal_move is None
        else {
            "action": dom.black_actions[result.principal_move.action_index].name,
            "actionIndex": result.principal_move.action_index,
            "x": result.principal_move.i,
            "y": result.principal_move.j,
        },
    }
    _emit(args, payload, text)
    return EXIT_OK


def _solver_spec(args) -> SolverSpec | None:
    if getattr(args, "use_oracle", False):
        return None
    if args.solver:
        return SolverSpec(
            executable=args.solver,
            input_format=args.format,
            timeout=args.timeout,
        )
    return discover_solver(args.config or os.environ.get("BDDLQBF_SOLVER_CONFIG"))


def cmd_solve(args) -> int:
    dom, inst = _load(args)
    spec = _solver_spec(args)
    if spec is None:
        print("no QBF solver configured (use --solver, --config, or BDDLQBF_SOLVER)", file=sys.stderr)
        return EXIT_NO_SOLVER
    verdict = solve_with_solver(dom, inst, spec)
    payload = {
        "status": verdict.status,
        "wallTime": verdict.wall_time,
        "depth": inst.depth,
    }
    _emit(args, payload, f"solver verdict: {verdict.status} ({verdict.wall_time:.2f}s)")
    return EXIT_OK if verdict.decided else EXIT_INTERNAL


def cmd_scan(args) -> int:
    dom, inst = _load(args)
    spec = _solver_spec(args)
    if spec is None and not args.use_oracle:
        print("no QBF solver configured; pass --use-oracle to scan with the internal oracle", file=sys.stderr)
        return EXIT_NO_SOLVER
    result = depth_scan(dom, inst, args.dmin, args.dmax, spec)
    lines = [
        f"depth {depth}: {verdict.status} ({verdict.wall_time:.2f}s)"
        for depth, verdict in result.rows
    ]
    if result.critical_depth is not None:
        lines.append(f"critical depth: {result.critical_depth}")
    elif result.max_refuted is not None:
        lines.append(f"refuted through depth {result.max_refuted}")
    payload = {
        "rows": [{"depth": d, "status": v.status} for d, v in result.rows],
        "criticalDepth": result.critical_depth,
        "maxRefuted": result.max_refuted,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_play(args) -> int:
    dom, inst = _load(args)
    try:
        session = start_session(dom, inst, mode="interactive")
    except SessionRefused as exc:
        print(f"refused: {exc}")
        return EXIT_OK
    print(render_board(session))
    while session.status == "awaiting-white":
        moves = session.white_moves()
        names = {a.name: idx for idx, a in enumerate(dom.white_actions)}
        listing = ", ".join(
            f"{dom.white_actions[mv.action_index].name}@({mv.i},{mv.j})" for mv, _ in moves
        )
        print(f"legal white moves: {listing}")
        try:
            line = input("white> ").strip()
        except EOFError:
            print("input closed; abandoning session")
            return EXIT_OK
        if line in ("quit", "exit"):
            return EXIT_OK
        parts = line.split()
        if len(parts) != 3 or parts[0] not in names:
            print("enter: <action-name> <x> <y>")
            continue
        try:
            move = Move(Side.WHITE, names[parts[0]], int(parts[1]), int(parts[2]))
        except ValueError:
            print("coordinates must be integers")
            continue
        try:
            submit_white_move(session, move)
        except MalformedMove as exc:
            print(f"rejected: {exc}")
            continue
        if session.diagnostic:
            print(f"illegal: {session.diagnostic}")
        print(render_board(session))
    verdict = session.verdict
    print(f"verdict: {verdict.value} ({'Valid' if session.valid else 'Invalid'} strategy)")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="bddlqbf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(p, with_depth=True):
        p.add_argument("domain", help="BDDL domain file")
        p.add_argument("problem", help="BDDL problem file")
        if with_depth:
            p.add_argument("--depth", type=int, help="override the problem depth")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("check", help="parse, validate, and sanity-check a model")
    add_model_args(p, with_depth=False)
    p.add_argument("--budget", type=int, default=200_000, help="sanity search node budget")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("encode", help="write the QBF encoding")
    add_model_args(p)
    p.add_argument("--format", choices=["qcir", "qdimacs"], default="qcir")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("oracle", help="decide the instance with the explicit-state search")
    add_model_args(p)
    p.set_defaults(func=cmd_oracle)

    def add_solver_args(p):
        p.add_argument("--solver", help="solver executable (formula path appended)")
        p.add_argument("--config", help="solver config file (key=value)")
        p.add_argument("--format", choices=["qcir", "qdimacs"], default=QDIMACS)
        p.add_argument("--timeout", type=float, default=60.0)
        p.add_argument(
            "--use-oracle", action="store_true", help="decide with the internal oracle instead"
        )

    p = sub.add_parser("solve", help="encode and run an external QBF solver")
    add_model_args(p)
    add_solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scan", help="scan depths for the critical (smallest winning) depth")
    add_model_args(p, with_depth=False)
    add_solver_args(p)
    p.add_argument("--dmin", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("play", help="play White interactively against the certified strategy")
    add_model_args(p)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("serve", help="serve the HTTP play API for the browser client")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BddlError, EncodingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
