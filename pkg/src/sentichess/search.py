"""Alpha-beta move search that evaluates (previous state, current state) pairs.

The tree alternates max levels (root side to move) and min levels.  Each
node carries its parent position down the tree so depth-limit leaves can be
scored as a move pair by the configured evaluator.  Evaluators return the
probability the transition was good for its mover; leaf values are flipped
to the root's scale (v if the mover is the root side, else 1 - v), keeping
every score in [0, 1].  Terminal nodes anywhere score 1.0 when the root
side has mated, 0.0 when it is mated, 0.5 for stalemate.  Ties at the root
break toward the lexicographically least move text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from sentichess.board import (
    Board,
    Move,
    WHITE,
    _apply_tuple,
    _legal_tuples,
    _move_sort_key,
    _sorted_tuples,
    is_in_check,
)
from sentichess.encoding import encode_move_pair, material_balance
from sentichess.network import NetworkWeights, forward


class NoLegalMoves(ValueError):
    """Search was asked to pick a move in a terminal position."""


Evaluator = Callable[[Board, Board], float]


class ConstantEvaluator:
    """Scores every transition the same; useful for tie-break and plumbing tests."""

    def __init__(self, value: float = 0.5):
        self.value = value

    def __call__(self, before: Board, after: Board) -> float:
        return self.value


class MaterialDeltaEvaluator:
    """Sigmoid of the mover's material gain: v = 1 / (1 + exp(-gain / 3)).

    Quiet moves sit at 0.5; winning a knight scores about 0.73.  Serves as
    the deterministic baseline opponent and the search-test oracle.
    """

    def __call__(self, before: Board, after: Board) -> float:
        gain = material_balance(before, after)
        if before.side_to_move != WHITE:
            gain = -gain
        return 1.0 / (1.0 + math.exp(-gain / 3.0))


class NeuralEvaluator:
    """Goodness head of the evaluation CNN over the encoded move pair."""

    def __init__(self, weights: NetworkWeights):
        self.weights = weights

    def __call__(self, before: Board, after: Board) -> float:
        return forward(self.weights, encode_move_pair(before, after, validate=False)).good


@dataclass(frozen=True)
class SearchConfig:
    """Search depth plus the move-pair evaluator; tie-break is fixed."""

    depth: int
    evaluator: Evaluator

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("search depth must be >= 1")


@dataclass
class SearchResult:
    best_move: Move
    root_score: float
    nodes_visited: int = 0
    leaf_evaluations: int = 0
    pruned: int = 0


def leaf_value(evaluator: Evaluator, before: Board, after: Board, root_color: int) -> float:
    """Evaluator goodness for the mover, flipped onto the root's scale."""
    v = evaluator(before, after)
    return v if before.side_to_move == root_color else 1.0 - v


def _terminal_score(board: Board, root_color: int) -> float:
    if is_in_check(board):
        return 0.0 if board.side_to_move == root_color else 1.0
    return 0.5


class _Searcher:
    def __init__(self, config: SearchConfig, root_color: int):
        self.evaluator = config.evaluator
        self.root_color = root_color
        self.nodes = 0
        self.leaves = 0
        self.pruned = 0

    def visit(self, board: Board, parent: Board, depth: int, alpha: float, beta: float) -> float:
        self.nodes += 1
        if depth == 0:
            if not _legal_tuples(board, first_only=True):
                return _terminal_score(board, self.root_color)
            self.leaves += 1
            return leaf_value(self.evaluator, parent, board, self.root_color)
        tuples = _legal_tuples(board)
        if not tuples:
            return _terminal_score(board, self.root_color)
        tuples.sort(key=_move_sort_key)
        maximizing = board.side_to_move == self.root_color
        if maximizing:
            best = -math.inf
            for frm, to, promo in tuples:
                child = _apply_tuple(board, frm, to, promo)
                best = max(best, self.visit(child, board, depth - 1, alpha, beta))
                alpha = max(alpha, best)
                if best >= beta:
                    self.pruned += 1
                    break
            return best
        best = math.inf
        for frm, to, promo in tuples:
            child = _apply_tuple(board, frm, to, promo)
            best = min(best, self.visit(child, board, depth - 1, alpha, beta))
            beta = min(beta, best)
            if best <= alpha:
                self.pruned += 1
                break
        return best


def abms_search(root: Board, config: SearchConfig) -> SearchResult:
    """Pick the move maximizing the depth-limited move-pair alpha-beta value."""
    tuples = _sorted_tuples(root)
    if not tuples:
        raise NoLegalMoves("no legal moves for side to move")
    searcher = _Searcher(config, root.side_to_move)
    searcher.nodes += 1  # the root itself
    best_move = None
    best = -math.inf
    for frm, to, promo in tuples:
        child = _apply_tuple(root, frm, to, promo)
        value = searcher.visit(child, root, config.depth - 1, best, math.inf)
        if value > best:
            best = value
            best_move = Move(frm, to, promo)
    return SearchResult(
        best_move=best_move,
        root_score=best,
        nodes_visited=searcher.nodes,
        leaf_evaluations=searcher.leaves,
        pruned=searcher.pruned,
    )


def rank_root_moves(root: Board, config: SearchConfig) -> list:
    """Exact value of every root move, best first (ties by move text).

    Unlike abms_search, each root move's subtree is searched with a full
    window so the reported per-move scores are exact, not bounds.
    """
    tuples = _sorted_tuples(root)
    if not tuples:
        raise NoLegalMoves("no legal moves for side to move")
    searcher = _Searcher(config, root.side_to_move)
    ranked = []
    for frm, to, promo in tuples:
        child = _apply_tuple(root, frm, to, promo)
        value = searcher.visit(child, root, config.depth - 1, -math.inf, math.inf)
        ranked.append((Move(frm, to, promo), value))
    # Stable sort keeps move-text order among equal scores.
    ranked.sort(key=lambda pair: -pair[1])
    return ranked
