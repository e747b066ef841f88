"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.
"""

import os
import random
import time

import numpy as np

from sentichess.board import Board, Move, apply_move, legal_moves, parse_fen, perft
from sentichess.cli import main
from sentichess.encoding import encode_move_pair, encode_state
from sentichess.goldens import load_goldens_file
from sentichess.harness import AgentSpec, run_match
from sentichess.network import forward, load_weights_file, random_weights
from sentichess.search import ConstantEvaluator, MaterialDeltaEvaluator, SearchConfig, abms_search
from conftest import random_positions
from reference import minimax_root, naive_forward

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def _report(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_perft_correctness():
    expected = {1: 20, 2: 400, 3: 8902, 4: 197281}
    board = Board.initial()
    start = time.perf_counter()
    got = {d: perft(board, d) for d in (1, 2, 3, 4)}
    elapsed = time.perf_counter() - start
    ok = got == expected and elapsed < 5.0
    _report("perft", ok, f"counts {got}, {elapsed:.2f}s (< 5s)")


def test_encoding_paper_example_and_properties():
    queen_board = parse_fen("4k3/8/8/8/4Q3/8/8/4K3 w - - 0 1")
    planes = encode_state(queen_board)
    cell_ok = planes[3, 4, 4] == 1.0 and planes[:, :, 4].sum() == 1.0

    before = Board.initial()
    after = apply_move(before, Move.from_uci("e2e4"))
    pair = encode_move_pair(before, after)
    diff_ok = int((pair[:, :, :13] != pair[:, :, 13:]).sum()) == 66

    positions = random_positions(seed=424242, count=1000)
    prop_ok = True
    for board in positions:
        p = encode_state(board)
        if not set(np.unique(p)) <= {-1.0, 0.0, 1.0}:
            prop_ok = False
            break
        if (p[:, :, 0:6] < 0).any() or (p[:, :, 6:12] > 0).any():
            prop_ok = False
            break
        turn = p[:, :, 12]
        if not (turn == turn[0, 0]).all() or turn[0, 0] not in (-1.0, 1.0):
            prop_ok = False
            break
        if np.abs(p[:, :, 0:12]).sum() != sum(1 for q in board.squares if q):
            prop_ok = False
            break
    ok = cell_ok and diff_ok and prop_ok
    _report(
        "encoding",
        ok,
        f"queen-on-e4 cell {'ok' if cell_ok else 'BAD'}, e2e4 diff 66 {'ok' if diff_ok else 'BAD'}, "
        f"properties over {len(positions)} positions {'ok' if prop_ok else 'BAD'}",
    )


def test_inference_oracle_and_goldens():
    rng = random.Random(31337)
    worst = 0.0
    boards = random_positions(seed=31337, count=100)
    for i, board in enumerate(boards):
        weights = random_weights(4, 4, seed=i)
        moves = legal_moves(board)
        move = moves[rng.randrange(len(moves))]
        tensor = encode_move_pair(board, apply_move(board, move))
        got = forward(weights, tensor)
        want_good, want_bad = naive_forward(weights, tensor)
        worst = max(worst, abs(got.good - want_good), abs(got.bad - want_bad))
    oracle_ok = worst <= 1e-5

    weights = load_weights_file(os.path.join(FIXTURES, "eval_f4.smw1"))
    fixture = load_goldens_file(os.path.join(FIXTURES, "goldens_f4.smg1"))
    golden_worst = 0.0
    for case in fixture.cases:
        out = forward(weights, case.tensor)
        golden_worst = max(golden_worst, abs(out.good - case.good), abs(out.bad - case.bad))
    golden_ok = len(fixture.cases) == 32 and golden_worst <= 1e-5

    ok = oracle_ok and golden_ok
    _report(
        "inference-oracle",
        ok,
        f"100 seeded pairs max delta {worst:.2e} (<= 1e-5), "
        f"32 golden cases max delta {golden_worst:.2e} (<= 1e-5)",
    )


def test_abms_matches_oracle():
    evaluator = MaterialDeltaEvaluator()
    positions = random_positions(seed=777, count=200, max_plies=70)
    start = time.perf_counter()
    checked = 0
    ok = True
    for board in positions:
        for depth in (1, 2, 3):
            move, value, nodes = minimax_root(board, evaluator, depth)
            result = abms_search(board, SearchConfig(depth, evaluator))
            if result.root_score != value or result.nodes_visited > nodes:
                ok = False
                break
            checked += 1
        if not ok:
            break
    elapsed = time.perf_counter() - start

    tie = abms_search(Board.initial(), SearchConfig(1, ConstantEvaluator()))
    tie_ok = tie.best_move.uci() == "a2a3"
    ok = ok and tie_ok
    _report(
        "abms",
        ok,
        f"{checked}/600 (position, depth) cases exact, tie-break "
        f"{'a2a3' if tie_ok else tie.best_move.uci()}, {elapsed:.0f}s",
    )


def test_match_protocol():
    start = time.perf_counter()
    report = run_match(
        AgentSpec.parse("material:1"),
        AgentSpec.parse("random"),
        n_games=100,
        base_seed=1000,
    )
    elapsed = time.perf_counter() - start
    wins = report.totals["material:1"]["wins"]
    wins_ok = wins >= 70
    horizon_ok = True
    trace_ok = True
    for game in report.games:
        if game.material_trace[0] != (39, 39):
            trace_ok = False
        if game.termination.startswith("adjudicated"):
            if game.termination != "adjudicated-40" or len(game.moves) != 80:
                horizon_ok = False
        elif len(game.moves) > 80:
            horizon_ok = False
    time_ok = elapsed < 120.0
    ok = wins_ok and horizon_ok and trace_ok and time_ok
    _report(
        "match-protocol",
        ok,
        f"material:1 won {wins}/100 (>= 70), horizon-at-40 {'ok' if horizon_ok else 'BAD'}, "
        f"traces start (39,39) {'ok' if trace_ok else 'BAD'}, {elapsed:.0f}s (< 120s)",
    )


def test_match_determinism(tmp_path):
    argv = [
        "match",
        "--white", "material:1",
        "--black", "random",
        "--games", "10",
        "--seed", "99",
        "--swap-colors",
    ]
    dir_a = tmp_path / "run_a"
    dir_b = tmp_path / "run_b"
    code_a = main(argv + ["--out", str(dir_a)])
    code_b = main(argv + ["--out", str(dir_b)])
    names = ["report.json", "material_trace.csv", "heatmaps.csv", "games.pgn"]
    identical = all((dir_a / n).read_bytes() == (dir_b / n).read_bytes() for n in names)
    ok = code_a == 0 and code_b == 0 and identical
    _report("determinism", ok, f"two identical runs -> byte-identical {names}")
