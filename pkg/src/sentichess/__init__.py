"""Chess engine whose evaluator scores move pairs with a small CNN."""

from sentichess.board import (
    BLACK,
    WHITE,
    Board,
    GameStatus,
    IllegalMove,
    InvalidFen,
    Move,
    apply_move,
    emit_fen,
    game_status,
    legal_moves,
    parse_fen,
    perft,
)

__version__ = "0.1.0"

__all__ = [
    "BLACK",
    "WHITE",
    "Board",
    "GameStatus",
    "IllegalMove",
    "InvalidFen",
    "Move",
    "apply_move",
    "emit_fen",
    "game_status",
    "legal_moves",
    "parse_fen",
    "perft",
    "__version__",
]
