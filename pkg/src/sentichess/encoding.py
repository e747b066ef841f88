"""Bit-plane tensors for boards and move pairs, plus material scores.

A single position becomes an 8x8x13 float32 grid: channels 0-5 hold +1 for
white pawns, knights, bishops, rooks, queens, kings; channels 6-11 hold -1
for the same black piece kinds; channel 12 is a uniform turn plane (+1 white
to move, -1 black).  Cell (row, col) is (rank-1, file-1), so a white queen
on e4 puts +1 at row 3, col 4 of the white-queen channel.  A move pair is
the pre-move grid stacked with the post-move grid: 8x8x26.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from sentichess.board import (
    BISHOP,
    KING,
    KNIGHT,
    PAWN,
    QUEEN,
    ROOK,
    WHITE,
    Board,
    _legal_tuples,
    _apply_tuple,
)

# Channel layout within one 13-channel state grid.
CHANNEL_KINDS = (PAWN, KNIGHT, BISHOP, ROOK, QUEEN, KING)
_KIND_CHANNEL = {kind: i for i, kind in enumerate(CHANNEL_KINDS)}
TURN_CHANNEL = 12
STATE_CHANNELS = 13
PAIR_CHANNELS = 26

MATERIAL_VALUES = {QUEEN: 9, ROOK: 5, KNIGHT: 3, BISHOP: 3, PAWN: 1, KING: 0}

# value indexed by piece code + 6 (black..empty..white)
_VALUE_BY_CODE = [0] * 13
for _kind, _val in MATERIAL_VALUES.items():
    _VALUE_BY_CODE[6 + _kind] = _val
    _VALUE_BY_CODE[6 - _kind] = _val

DUMP_HEADER = b"8 8 26\n"


class IllegalTransition(ValueError):
    """Raised when no single legal move connects a validated board pair."""


def encode_state(board: Board) -> np.ndarray:
    """Encode one position as the 8x8x13 signed bit-plane grid."""
    planes = np.zeros((8, 8, STATE_CHANNELS), dtype=np.float32)
    for sq, piece in enumerate(board.squares):
        if piece == 0:
            continue
        if piece > 0:
            planes[sq >> 3, sq & 7, _KIND_CHANNEL[piece]] = 1.0
        else:
            planes[sq >> 3, sq & 7, 6 + _KIND_CHANNEL[-piece]] = -1.0
    planes[:, :, TURN_CHANNEL] = 1.0 if board.side_to_move == WHITE else -1.0
    return planes


def encode_move_pair(before: Board, after: Board, validate: bool = True) -> np.ndarray:
    """Stack pre- and post-move grids into the 8x8x26 evaluator input.

    With validate=True the pair must be connected by exactly one legal move;
    raw dataset pairs can skip the check with validate=False.
    """
    if validate and not _transition_exists(before, after):
        raise IllegalTransition("no legal move connects the two positions")
    return np.concatenate((encode_state(before), encode_state(after)), axis=2)


def _transition_exists(before: Board, after: Board) -> bool:
    if after.side_to_move != -before.side_to_move:
        return False
    target = (
        after.squares,
        after.castling,
        after.en_passant,
        after.halfmove_clock,
        after.fullmove_number,
    )
    for frm, to, promo in _legal_tuples(before):
        b = _apply_tuple(before, frm, to, promo)
        if (b.squares, b.castling, b.en_passant, b.halfmove_clock, b.fullmove_number) == target:
            return True
    return False


def material_score(board: Board, color: int) -> int:
    """Sum of piece values (Q9 R5 N3 B3 P1, king 0) for one side."""
    if color == WHITE:
        return sum(_VALUE_BY_CODE[6 + p] for p in board.squares if p > 0)
    return sum(_VALUE_BY_CODE[6 + p] for p in board.squares if p < 0)


def material_balance(before: Board, after: Board) -> int:
    """Signed material change (white minus black) across a transition."""
    b_sq = before.squares
    a_sq = after.squares
    delta = 0
    for i in range(64):
        a = a_sq[i]
        b = b_sq[i]
        if a != b:
            delta += (_VALUE_BY_CODE[6 + a] if a > 0 else -_VALUE_BY_CODE[6 + a]) - (
                _VALUE_BY_CODE[6 + b] if b > 0 else -_VALUE_BY_CODE[6 + b]
            )
    return delta


def write_tensor_dump(tensor: np.ndarray, path_or_file) -> None:
    """Write an 8x8x26 tensor: ASCII header line then float32 LE, channel fastest."""
    if tensor.shape != (8, 8, PAIR_CHANNELS):
        raise ValueError(f"expected shape (8, 8, 26), got {tensor.shape}")
    data = DUMP_HEADER + np.ascontiguousarray(tensor, dtype="<f4").tobytes()
    if hasattr(path_or_file, "write"):
        path_or_file.write(data)
    else:
        with open(path_or_file, "wb") as f:
            f.write(data)


def dump_bytes(tensor: np.ndarray) -> bytes:
    if tensor.shape != (8, 8, PAIR_CHANNELS):
        raise ValueError(f"expected shape (8, 8, 26), got {tensor.shape}")
    return DUMP_HEADER + np.ascontiguousarray(tensor, dtype="<f4").tobytes()


def read_tensor_dump(data: bytes) -> np.ndarray:
    """Inverse of dump_bytes; validates header and length."""
    if not data.startswith(DUMP_HEADER):
        raise ValueError("bad tensor dump header, expected '8 8 26'")
    body = data[len(DUMP_HEADER) :]
    count = 8 * 8 * PAIR_CHANNELS
    if len(body) != count * 4:
        raise ValueError(f"tensor dump body has {len(body)} bytes, expected {count * 4}")
    return np.frombuffer(body, dtype="<f4").reshape(8, 8, PAIR_CHANNELS).copy()
