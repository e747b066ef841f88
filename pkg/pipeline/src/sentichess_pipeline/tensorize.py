"""Trainer-side move-pair tensors, built straight from FEN text.

This is intentionally a second implementation of the engine's encoding (its
own FEN reading and plane construction): the two are held bit-identical by
cross-component tests over the shared dump format, which is only meaningful
if neither side borrows the other's code.
"""

from __future__ import annotations

import numpy as np

# Channel order within one 13-channel half: white P N B R Q K, black same, turn.
_WHITE_CHANNEL = {"P": 0, "N": 1, "B": 2, "R": 3, "Q": 4, "K": 5}
_BLACK_CHANNEL = {"p": 6, "n": 7, "b": 8, "r": 9, "q": 10, "k": 11}

DUMP_HEADER = b"8 8 26\n"


class BadRecord(ValueError):
    """Record whose FEN fields cannot be turned into tensors."""


def state_planes_from_fen(fen: str) -> np.ndarray:
    """8x8x13 signed planes for one FEN: (rank-1, file-1) cells, turn plane last."""
    fields = fen.split()
    if len(fields) < 2:
        raise BadRecord(f"FEN needs placement and side to move: {fen!r}")
    placement, side = fields[0], fields[1]
    ranks = placement.split("/")
    if len(ranks) != 8 or side not in ("w", "b"):
        raise BadRecord(f"malformed FEN {fen!r}")
    planes = np.zeros((8, 8, 13), dtype=np.float32)
    for rank_index, rank_text in enumerate(ranks):
        row = 7 - rank_index
        col = 0
        for ch in rank_text:
            if ch.isdigit():
                col += int(ch)
                continue
            if col >= 8:
                raise BadRecord(f"rank overflow in {fen!r}")
            if ch in _WHITE_CHANNEL:
                planes[row, col, _WHITE_CHANNEL[ch]] = 1.0
            elif ch in _BLACK_CHANNEL:
                planes[row, col, _BLACK_CHANNEL[ch]] = -1.0
            else:
                raise BadRecord(f"bad piece letter {ch!r} in {fen!r}")
            col += 1
        if col != 8:
            raise BadRecord(f"short rank in {fen!r}")
    planes[:, :, 12] = 1.0 if side == "w" else -1.0
    return planes


def pair_tensor(fen_before: str, fen_after: str) -> np.ndarray:
    return np.concatenate(
        (state_planes_from_fen(fen_before), state_planes_from_fen(fen_after)), axis=2
    )


def dump_bytes(tensor: np.ndarray) -> bytes:
    """Serialize to the shared dump format: header line + float32 LE, channel fastest."""
    if tensor.shape != (8, 8, 26):
        raise ValueError(f"expected (8, 8, 26), got {tensor.shape}")
    return DUMP_HEADER + np.ascontiguousarray(tensor, dtype="<f4").tobytes()


def read_dump(data: bytes) -> np.ndarray:
    if not data.startswith(DUMP_HEADER):
        raise ValueError("bad dump header")
    body = np.frombuffer(data[len(DUMP_HEADER) :], dtype="<f4")
    if body.size != 8 * 8 * 26:
        raise ValueError(f"dump has {body.size} values, expected 1664")
    return body.reshape(8, 8, 26).copy()


LABEL_GOOD = 0
LABEL_BAD = 1


def tensorize(records, verify_replay: bool = True):
    """Records to (tensors (N,8,8,26) float32, one-hot labels (N,2) float32).

    Records whose move does not replay between the two FENs under the
    engine's rules are dropped (they indicate corpus corruption).
    """
    tensors = []
    labels = []
    for record in records:
        if verify_replay and not _replays(record):
            continue
        try:
            tensors.append(pair_tensor(record.fen_before, record.fen_after))
        except BadRecord:
            continue
        labels.append(
            (1.0, 0.0) if record.sentiment == "good" else (0.0, 1.0)
        )
    if not tensors:
        return (
            np.zeros((0, 8, 8, 26), dtype=np.float32),
            np.zeros((0, 2), dtype=np.float32),
        )
    return np.stack(tensors), np.array(labels, dtype=np.float32)


def _replays(record) -> bool:
    from sentichess.board import IllegalMove, InvalidFen, Move, apply_move, emit_fen, parse_fen

    try:
        before = parse_fen(record.fen_before)
        after = apply_move(before, Move.from_uci(record.uci))
        return emit_fen(after) == record.fen_after
    except (InvalidFen, IllegalMove, ValueError):
        return False
