"""Agent-vs-agent match play with material adjudication and reporting.

Games start from the initial position and stop at checkmate, stalemate, a
draw rule, or an adjudication horizon of full moves (default 40), at which
point the side with more material wins.  Every game records its seed, move
list, per-ply material trace, and termination so reports are reproducible
bit for bit.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from sentichess.board import (
    BLACK,
    KING,
    ROOK,
    WHITE,
    Board,
    GameStatus,
    Move,
    apply_move,
    emit_fen,
    game_status,
    legal_moves,
    position_key,
)
from sentichess.encoding import CHANNEL_KINDS, material_score
from sentichess.network import load_weights_file
from sentichess.pgn import game_to_pgn
from sentichess.search import (
    MaterialDeltaEvaluator,
    NeuralEvaluator,
    SearchConfig,
    abms_search,
)

_MASK64 = (1 << 64) - 1


class AgentInitError(RuntimeError):
    """Agent could not be constructed (bad spec, unloadable weights, ...)."""


class SplitMix64:
    """SplitMix64 PRNG; the documented source of all match randomness."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randrange(self, n: int) -> int:
        # Rejection sampling keeps the draw unbiased.
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n


@dataclass(frozen=True)
class AgentSpec:
    """How to build one player: sentimate (neural), material, or random."""

    kind: str
    depth: int = 1
    weights_path: Optional[str] = None
    agent_id: str = ""

    KINDS = ("sentimate", "material", "random")

    def __post_init__(self):
        if self.kind not in AgentSpec.KINDS:
            raise AgentInitError(f"unknown agent kind {self.kind!r}")
        if self.kind != "random" and self.depth < 1:
            raise AgentInitError("search agents need depth >= 1")
        if not self.agent_id:
            object.__setattr__(self, "agent_id", self._default_id())

    def _default_id(self) -> str:
        if self.kind == "random":
            return "random"
        return f"{self.kind}:{self.depth}"

    @classmethod
    def parse(cls, text: str, weights_path: Optional[str] = None) -> "AgentSpec":
        """Parse CLI form: 'random', 'material:2', 'sentimate:1'."""
        parts = text.split(":")
        kind = parts[0]
        if kind not in cls.KINDS:
            raise AgentInitError(f"unknown agent kind {kind!r}")
        depth = 1
        if len(parts) > 1:
            try:
                depth = int(parts[1])
            except ValueError:
                raise AgentInitError(f"bad depth in agent spec {text!r}") from None
        return cls(kind=kind, depth=depth, weights_path=weights_path, agent_id=text)


def make_agent(spec: AgentSpec, game_seed: int, color: int):
    """Build a move-choosing callable.  The random agent draws from its own
    SplitMix64 stream derived from the game seed and its color."""
    if spec.kind == "random":
        rng = SplitMix64((game_seed << 1) | (0 if color == WHITE else 1))

        def pick_random(board: Board) -> Move:
            moves = legal_moves(board)
            return moves[rng.randrange(len(moves))]

        return pick_random

    if spec.kind == "material":
        config = SearchConfig(depth=spec.depth, evaluator=MaterialDeltaEvaluator())
    else:
        if not spec.weights_path:
            raise AgentInitError("sentimate agent needs a weights path")
        try:
            weights = load_weights_file(spec.weights_path)
        except OSError as exc:
            raise AgentInitError(f"cannot read weights: {exc}") from exc
        config = SearchConfig(depth=spec.depth, evaluator=NeuralEvaluator(weights))

    def pick_search(board: Board) -> Move:
        return abms_search(board, config).best_move

    return pick_search


@dataclass
class GameRecord:
    white_id: str
    black_id: str
    moves: list  # canonical move texts
    material_trace: list  # (white score, black score) per position, len(moves)+1
    outcome: str  # "white" | "black" | "draw"
    termination: str  # "checkmate" | "stalemate" | "draw-rule" | "adjudicated-N"
    seed: int
    final_fen: str


def adjudicate(board: Board) -> str:
    """Outcome at the horizon: higher material wins, equal is a draw."""
    white = material_score(board, WHITE)
    black = material_score(board, BLACK)
    if white > black:
        return "white"
    if black > white:
        return "black"
    return "draw"


def play_game(
    white: AgentSpec, black: AgentSpec, seed: int, max_fullmoves: int = 40
) -> GameRecord:
    """Play one game to termination or the adjudication horizon."""
    agents = {
        WHITE: make_agent(white, seed, WHITE),
        BLACK: make_agent(black, seed, BLACK),
    }
    board = Board.initial()
    history = [position_key(board)]
    moves = []
    trace = [(material_score(board, WHITE), material_score(board, BLACK))]

    outcome = None
    termination = None
    while True:
        status = game_status(board, history)
        if status.is_over:
            if status.kind == GameStatus.CHECKMATE:
                outcome = "white" if status.winner == WHITE else "black"
                termination = "checkmate"
            elif status.kind == GameStatus.STALEMATE:
                outcome = "draw"
                termination = "stalemate"
            else:
                outcome = "draw"
                termination = "draw-rule"
            break
        if len(moves) >= 2 * max_fullmoves:
            outcome = adjudicate(board)
            termination = f"adjudicated-{max_fullmoves}"
            break
        move = agents[board.side_to_move](board)
        board = apply_move(board, move)
        moves.append(move.uci())
        history.append(position_key(board))
        trace.append((material_score(board, WHITE), material_score(board, BLACK)))

    return GameRecord(
        white_id=white.agent_id,
        black_id=black.agent_id,
        moves=moves,
        material_trace=trace,
        outcome=outcome,
        termination=termination,
        seed=seed,
        final_fen=emit_fen(board),
    )


@dataclass
class MatchReport:
    agents: list  # two agent ids, first is the heatmap subject
    n_games: int
    base_seed: int
    swap_colors: bool
    max_fullmoves: int
    games: list = field(default_factory=list)
    totals: dict = field(default_factory=dict)  # id -> {"wins","draws","losses"}
    mean_material: dict = field(default_factory=dict)  # id -> list of per-ply means
    heatmaps: Optional[np.ndarray] = None  # (2 colors, 6 kinds, 8 ranks, 8 files)


def _play_indexed(args):
    index, white, black, seed, max_fullmoves = args
    return index, play_game(white, black, seed, max_fullmoves)


def run_match(
    white: AgentSpec,
    black: AgentSpec,
    n_games: int,
    base_seed: int,
    swap_colors: bool = False,
    max_fullmoves: int = 40,
    jobs: int = 1,
) -> MatchReport:
    """Play n games (seed = base_seed + index), optionally alternating colors.

    Games may run in parallel; aggregation sorts on game index so the report
    is identical regardless of execution order.
    """
    if n_games < 1:
        raise ValueError("n_games must be >= 1")
    tasks = []
    for i in range(n_games):
        w, b = (black, white) if (swap_colors and i % 2 == 1) else (white, black)
        tasks.append((i, w, b, base_seed + i, max_fullmoves))

    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            indexed = list(pool.map(_play_indexed, tasks))
        indexed.sort(key=lambda pair: pair[0])
        games = [record for _, record in indexed]
    else:
        games = [_play_indexed(task)[1] for task in tasks]

    report = MatchReport(
        agents=[white.agent_id, black.agent_id],
        n_games=n_games,
        base_seed=base_seed,
        swap_colors=swap_colors,
        max_fullmoves=max_fullmoves,
        games=games,
    )
    totals = {
        white.agent_id: {"wins": 0, "draws": 0, "losses": 0},
        black.agent_id: {"wins": 0, "draws": 0, "losses": 0},
    }
    per_agent_traces = {white.agent_id: [], black.agent_id: []}
    for record in games:
        if record.outcome == "draw":
            totals[record.white_id]["draws"] += 1
            totals[record.black_id]["draws"] += 1
        else:
            winner = record.white_id if record.outcome == "white" else record.black_id
            loser = record.black_id if record.outcome == "white" else record.white_id
            totals[winner]["wins"] += 1
            totals[loser]["losses"] += 1
        per_agent_traces[record.white_id].append([w for w, _ in record.material_trace])
        per_agent_traces[record.black_id].append([b for _, b in record.material_trace])
    report.totals = totals
    for agent_id, traces in per_agent_traces.items():
        longest = max(len(t) for t in traces)
        means = []
        for ply in range(longest):
            values = [t[ply] for t in traces if len(t) > ply]
            means.append(sum(values) / len(values))
        report.mean_material[agent_id] = means
    report.heatmaps = piece_heatmaps(games, white.agent_id)
    return report


_KIND_INDEX = {kind: i for i, kind in enumerate(CHANNEL_KINDS)}


def piece_heatmaps(games, agent_id: str) -> np.ndarray:
    """Destination-square counts of the agent's moves: (color, kind, rank, file).

    Each of the agent's moves increments the cell of the piece it moved;
    castling also increments the rook's destination.
    """
    maps = np.zeros((2, 6, 8, 8), dtype=np.int64)
    for record in games:
        plays_white = record.white_id == agent_id
        plays_black = record.black_id == agent_id
        if not (plays_white or plays_black):
            continue
        board = Board.initial()
        for text in record.moves:
            move = Move.from_uci(text)
            color = board.side_to_move
            counted = (color == WHITE and plays_white) or (color == BLACK and plays_black)
            if counted:
                piece = board.squares[move.from_sq]
                kind = piece if piece > 0 else -piece
                color_idx = 0 if color == WHITE else 1
                maps[color_idx, _KIND_INDEX[kind], move.to_sq >> 3, move.to_sq & 7] += 1
                if kind == KING and abs(move.to_sq - move.from_sq) == 2:
                    rook_to = (
                        move.to_sq - 1 if move.to_sq > move.from_sq else move.to_sq + 1
                    )
                    maps[color_idx, _KIND_INDEX[ROOK], rook_to >> 3, rook_to & 7] += 1
            board = apply_move(board, move)
    return maps


# ---------------------------------------------------------------------------
# Report serialization.  Everything below is deterministic given the report.


def report_to_json(report: MatchReport) -> str:
    doc = {
        "agents": report.agents,
        "n_games": report.n_games,
        "base_seed": report.base_seed,
        "swap_colors": report.swap_colors,
        "max_fullmoves": report.max_fullmoves,
        "totals": report.totals,
        "mean_material": {
            agent: [round(v, 6) for v in means]
            for agent, means in report.mean_material.items()
        },
        "heatmap_agent": report.agents[0],
        "games": [
            {
                "index": i,
                "white": g.white_id,
                "black": g.black_id,
                "seed": g.seed,
                "outcome": g.outcome,
                "termination": g.termination,
                "plies": len(g.moves),
                "final_fen": g.final_fen,
            }
            for i, g in enumerate(report.games)
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def material_trace_csv(report: MatchReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["game", "ply", "white", "black"])
    for i, game in enumerate(report.games):
        for ply, (w, b) in enumerate(game.material_trace):
            writer.writerow([i, ply, w, b])
    return buf.getvalue()


_KIND_LETTERS = "pnbrqk"


def heatmaps_csv(report: MatchReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["color", "kind", "file", "rank", "count"])
    maps = report.heatmaps
    for color_idx, color in enumerate("wb"):
        for kind_idx, kind in enumerate(_KIND_LETTERS):
            for rank in range(8):
                for file in range(8):
                    writer.writerow(
                        [color, kind, "abcdefgh"[file], rank + 1, int(maps[color_idx, kind_idx, rank, file])]
                    )
    return buf.getvalue()


_RESULT_TEXT = {"white": "1-0", "black": "0-1", "draw": "1/2-1/2"}


def games_pgn(report: MatchReport) -> str:
    chunks = []
    for i, game in enumerate(report.games):
        tags = {
            "Event": "sentichess match",
            "Round": str(i + 1),
            "White": game.white_id,
            "Black": game.black_id,
            "Result": _RESULT_TEXT[game.outcome],
            "Seed": str(game.seed),
            "Termination": game.termination,
        }
        moves = [Move.from_uci(text) for text in game.moves]
        chunks.append(game_to_pgn(tags, moves))
    return "\n".join(chunks)


def write_report(report: MatchReport, out_dir) -> None:
    """Write report.json, material_trace.csv, heatmaps.csv, and games.pgn."""
    os.makedirs(out_dir, exist_ok=True)
    outputs = {
        "report.json": report_to_json(report),
        "material_trace.csv": material_trace_csv(report),
        "heatmaps.csv": heatmaps_csv(report),
        "games.pgn": games_pgn(report),
    }
    for name, text in outputs.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as f:
            f.write(text)
