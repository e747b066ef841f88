"""Command-line entry point: match, analyze, perft, encode, selfcheck.

Exit codes: 0 success, 1 usage error, 2 runtime error.  All output is
deterministic given flags and seeds.  SENTICHESS_WEIGHTS provides a default
weights path for neural agents.
"""

from __future__ import annotations

import argparse
import os
import sys

from sentichess.board import Board, InvalidFen, Move, apply_move, parse_fen, perft
from sentichess.encoding import dump_bytes, encode_move_pair
from sentichess.goldens import load_goldens_file, weights_checksum
from sentichess.harness import AgentInitError, AgentSpec, run_match, write_report
from sentichess.network import (
    NonFiniteActivation,
    WeightFormatError,
    forward,
    load_weights,
    load_weights_file,
)
from sentichess.pgn import UnresolvableSan, UnterminatedComment, parse_pgn
from sentichess.search import (
    ConstantEvaluator,
    MaterialDeltaEvaluator,
    NeuralEvaluator,
    SearchConfig,
    rank_root_moves,
)

WEIGHTS_ENV = "SENTICHESS_WEIGHTS"

_RUNTIME_ERRORS = (
    InvalidFen,
    UnresolvableSan,
    UnterminatedComment,
    WeightFormatError,
    NonFiniteActivation,
    AgentInitError,
    ValueError,
    OSError,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this artifact promises 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve_fen(text: str) -> Board:
    if text == "startpos":
        return Board.initial()
    return parse_fen(text)


def _resolve_weights(args) -> str:
    path = args.weights or os.environ.get(WEIGHTS_ENV)
    if not path:
        raise ValueError(f"no weights path: pass --weights or set {WEIGHTS_ENV}")
    if not os.path.isfile(path):
        raise OSError(f"weights file not found: {path}")
    return path


def _cmd_perft(args) -> int:
    board = _resolve_fen(args.fen)
    print(perft(board, args.depth, max_depth=args.max_depth))
    return 0


def _make_evaluator(args):
    if args.eval == "material":
        return MaterialDeltaEvaluator()
    if args.eval == "constant":
        return ConstantEvaluator()
    return NeuralEvaluator(load_weights_file(_resolve_weights(args)))


def _cmd_analyze(args) -> int:
    board = _resolve_fen(args.fen)
    config = SearchConfig(depth=args.depth, evaluator=_make_evaluator(args))
    for move, value in rank_root_moves(board, config):
        print(f"{move.uci()} {value:.6f}")
    return 0


def _cmd_match(args) -> int:
    weights = None
    if "sentimate" in (args.white.split(":")[0], args.black.split(":")[0]):
        weights = _resolve_weights(args)
    white = AgentSpec.parse(args.white, weights_path=weights)
    black = AgentSpec.parse(args.black, weights_path=weights)
    if os.path.isfile(args.out):
        raise ValueError(f"--out points at an existing file: {args.out}")
    report = run_match(
        white,
        black,
        n_games=args.games,
        base_seed=args.seed,
        swap_colors=args.swap_colors,
        max_fullmoves=args.adjudicate_after,
        jobs=args.jobs,
    )
    write_report(report, args.out)
    for agent_id in report.agents:
        t = report.totals[agent_id]
        print(f"{agent_id}: {t['wins']} wins, {t['draws']} draws, {t['losses']} losses")
    return 0


def _cmd_encode(args) -> int:
    if args.pgn:
        if not os.path.isfile(args.pgn):
            raise OSError(f"PGN file not found: {args.pgn}")
        with open(args.pgn, "r", encoding="utf-8") as f:
            game = parse_pgn(f.read())
        os.makedirs(args.out, exist_ok=True)
        board = Board.initial()
        for i, ply in enumerate(game.moves):
            after = apply_move(board, ply.move)
            tensor = encode_move_pair(board, after, validate=False)
            name = f"{i:04d}_{ply.move.uci()}.tensor"
            with open(os.path.join(args.out, name), "wb") as f:
                f.write(dump_bytes(tensor))
            board = after
        print(f"wrote {len(game.moves)} tensors to {args.out}")
        return 0
    if not (args.fen_before and args.fen_after):
        raise ValueError("encode needs --pgn or both --fen-before and --fen-after")
    before = parse_fen(args.fen_before)
    after = parse_fen(args.fen_after)
    tensor = encode_move_pair(before, after, validate=not args.no_validate)
    with open(args.out, "wb") as f:
        f.write(dump_bytes(tensor))
    print(f"wrote 1 tensor to {args.out}")
    return 0


def _cmd_selfcheck(args) -> int:
    with open(_resolve_weights(args), "rb") as f:
        blob = f.read()
    weights = load_weights(blob)
    fixture = load_goldens_file(args.goldens)
    checksum = weights_checksum(blob)
    if checksum != fixture.weights_sha256:
        raise ValueError(
            f"weights checksum {checksum[:12]}... does not match goldens "
            f"{fixture.weights_sha256[:12]}..."
        )
    worst = 0.0
    failures = 0
    for i, case in enumerate(fixture.cases):
        out = forward(weights, case.tensor)
        delta = max(abs(out.good - case.good), abs(out.bad - case.bad))
        worst = max(worst, delta)
        status = "ok" if delta <= args.tolerance else "FAIL"
        if status == "FAIL":
            failures += 1
        print(f"case {i:03d}: delta={delta:.3e} {status}")
    print(f"{len(fixture.cases)} cases, max delta {worst:.3e}, tolerance {args.tolerance:g}")
    if failures:
        print(f"{failures} cases out of tolerance", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sentichess", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("perft", help="count legal-move-tree leaves")
    p.add_argument("--fen", default="startpos", help="position ('startpos' accepted)")
    p.add_argument("--depth", type=int, required=True, help="depth in plies")
    p.add_argument("--max-depth", type=int, default=6, help="safety cap (default 6)")
    p.set_defaults(func=_cmd_perft)

    p = sub.add_parser("analyze", help="rank root moves by search value")
    p.add_argument("--fen", default="startpos")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--eval", choices=("neural", "material", "constant"), default="material")
    p.add_argument("--weights", help=f"SMW1 weights (default ${WEIGHTS_ENV})")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("match", help="play an agent-vs-agent match")
    p.add_argument("--white", required=True, help="agent spec, e.g. material:1, random, sentimate:1")
    p.add_argument("--black", required=True)
    p.add_argument("--games", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--swap-colors", action="store_true")
    p.add_argument("--adjudicate-after", type=int, default=40, metavar="FULLMOVES")
    p.add_argument("--out", required=True, help="report directory")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--weights", help=f"SMW1 weights for sentimate agents (default ${WEIGHTS_ENV})")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("encode", help="dump move-pair tensors")
    p.add_argument("--pgn", help="PGN file; dumps every ply to --out directory")
    p.add_argument("--fen-before", help="single-pair mode: position before the move")
    p.add_argument("--fen-after", help="single-pair mode: position after the move")
    p.add_argument("--no-validate", action="store_true", help="skip legal-transition check")
    p.add_argument("--out", required=True, help="output directory (--pgn) or file")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("selfcheck", help="verify weights against goldens")
    p.add_argument("--weights", help=f"SMW1 weights (default ${WEIGHTS_ENV})")
    p.add_argument("--goldens", required=True, help="golden fixture file")
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.set_defaults(func=_cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _RUNTIME_ERRORS as exc:
        print(f"sentichess: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
