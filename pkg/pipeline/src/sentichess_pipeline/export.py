"""SMW1 weight export and golden fixture emission.

The byte writer here is the pipeline's own (the engine has its own reader
and writer); the two meeting bit-exactly over the wire is part of the
cross-component contract.  Layout per tensor: u16 LE name length, UTF-8
name, u8 dtype (0 = float32), u8 ndim, ndim x u32 LE dims, float32 LE
payload, preceded by the magic "SMW1" and a u32 LE tensor count.  Kernels
are written (kh, kw, in, out) and dense weights (in, out).
"""

from __future__ import annotations

import hashlib
import random
import struct

import numpy as np

from sentichess.board import Board, apply_move, emit_fen, legal_moves

from sentichess_pipeline.tensorize import dump_bytes, pair_tensor
from sentichess_pipeline.train import TrainedEval

SMW1_MAGIC = b"SMW1"


def weights_to_smw1(trained: TrainedEval) -> bytes:
    model = trained.model
    named = {
        # torch Conv2d kernels are (out, in, kh, kw); the wire wants (kh, kw, in, out)
        "conv1.weight": model.conv1.weight.detach().permute(2, 3, 1, 0).numpy(),
        "conv1.bias": model.conv1.bias.detach().numpy(),
        "conv2.weight": model.conv2.weight.detach().permute(2, 3, 1, 0).numpy(),
        "conv2.bias": model.conv2.bias.detach().numpy(),
        # torch Linear weights are (out, in); the wire wants (in, out)
        "fc1.weight": model.fc1.weight.detach().t().numpy(),
        "fc1.bias": model.fc1.bias.detach().numpy(),
        "fc2.weight": model.fc2.weight.detach().t().numpy(),
        "fc2.bias": model.fc2.bias.detach().numpy(),
        "out.weight": model.out.weight.detach().t().numpy(),
        "out.bias": model.out.bias.detach().numpy(),
    }
    parts = [SMW1_MAGIC, struct.pack("<I", len(named))]
    for name, arr in named.items():
        encoded = name.encode("utf-8")
        parts.append(struct.pack("<H", len(encoded)))
        parts.append(encoded)
        parts.append(struct.pack("<BB", 0, arr.ndim))
        parts.append(struct.pack(f"<{arr.ndim}I", *arr.shape))
        parts.append(np.ascontiguousarray(arr, dtype="<f4").tobytes())
    return b"".join(parts)


def export_weights(trained: TrainedEval, path) -> bytes:
    """Write the SMW1 file; returns the bytes for checksumming."""
    blob = weights_to_smw1(trained)
    with open(path, "wb") as f:
        f.write(blob)
    return blob


def random_move_tensors(n: int, seed: int) -> list:
    """n valid move-pair tensors from seeded random playouts."""
    rng = random.Random(seed)
    tensors = []
    while len(tensors) < n:
        board = Board.initial()
        for _ in range(rng.randrange(61)):
            moves = legal_moves(board)
            if not moves:
                break
            board = apply_move(board, moves[rng.randrange(len(moves))])
        moves = legal_moves(board)
        if not moves:
            continue
        after = apply_move(board, moves[rng.randrange(len(moves))])
        tensors.append(pair_tensor(emit_fen(board), emit_fen(after)))
    return tensors


def emit_goldens(trained: TrainedEval, n: int, seed: int, path, weight_blob: bytes) -> None:
    """Write the SMG1 fixture: n seeded tensors with this model's outputs."""
    tensors = random_move_tensors(n, seed)
    probs = trained.probabilities(np.stack(tensors))
    sha = hashlib.sha256(weight_blob).hexdigest()
    lines = [f"SMG1 {n} {seed} {sha}"]
    for tensor, (good, bad) in zip(tensors, probs):
        lines.append(f"{dump_bytes(tensor).hex()} {good:.10e} {bad:.10e}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
