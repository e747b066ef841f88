"""Synthetic material-sign task: the trainer's learnability smoke test.

Each example is a raw board pair (not necessarily one legal move apart):
starting from a random position, either nothing changes, an opponent piece
vanishes, or one of the mover's own pieces vanishes.  The label is good
exactly when the mover's material delta is >= 0, so the task is learnable
by construction from the piece planes plus the turn plane.
"""

from __future__ import annotations

import random

import numpy as np

from sentichess.board import BLACK, WHITE, Board, apply_move, emit_fen, legal_moves

from sentichess_pipeline.tensorize import pair_tensor

_PIECE_VALUES = {1: 1, 2: 3, 3: 3, 4: 5, 5: 9, 6: 0}


def _random_position(rng: random.Random, max_plies: int = 50) -> Board:
    board = Board.initial()
    for _ in range(rng.randrange(max_plies + 1)):
        moves = legal_moves(board)
        if not moves:
            return Board.initial()
        board = apply_move(board, moves[rng.randrange(len(moves))])
    return board


def material_sign_dataset(n: int, seed: int):
    """(tensors (n, 8, 8, 26), one-hot labels (n, 2)); roughly class-balanced."""
    rng = random.Random(seed)
    tensors = []
    labels = []
    while len(tensors) < n:
        before = _random_position(rng)
        mover = before.side_to_move
        kind_of_change = rng.randrange(4)  # 0: quiet, 1: capture, 2-3: own loss
        squares = list(before.squares)
        delta = 0
        if kind_of_change:
            lose_own = kind_of_change >= 2
            target_color = mover if lose_own else -mover
            candidates = [
                sq
                for sq, p in enumerate(squares)
                if p != 0 and (p > 0) == (target_color == WHITE) and abs(p) != 6
            ]
            if not candidates:
                continue
            sq = candidates[rng.randrange(len(candidates))]
            value = _PIECE_VALUES[abs(squares[sq])]
            squares[sq] = 0
            delta = -value if lose_own else value
        after = Board(
            squares,
            -mover,
            before.castling,
            -1,
            before.halfmove_clock,
            before.fullmove_number + (1 if mover == BLACK else 0),
        )
        tensors.append(pair_tensor(emit_fen(before), emit_fen(after)))
        labels.append((1.0, 0.0) if delta >= 0 else (0.0, 1.0))
    return np.stack(tensors), np.array(labels, dtype=np.float32)
