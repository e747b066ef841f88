import pytest

from sentichess.board import Board, apply_move, legal_moves, parse_fen, perft
from conftest import random_positions

KIWIPETE = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1"


@pytest.mark.parametrize("depth,expected", [(0, 1), (1, 20), (2, 400), (3, 8902)])
def test_startpos(depth, expected):
    assert perft(Board.initial(), depth) == expected


# Published reference counts for positions that stress castling, pins,
# promotions and en passant.
@pytest.mark.parametrize(
    "fen,depth,expected",
    [
        (KIWIPETE, 1, 48),
        (KIWIPETE, 2, 2039),
        (KIWIPETE, 3, 97862),
        ("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1", 4, 43238),
        ("r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1", 3, 9467),
        ("rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8", 3, 62379),
        ("r4rk1/1pp1qppp/p1np1n2/2b1p1B1/2B1P1b1/P1NP1N2/1PP1QPPP/R4RK1 w - - 0 10", 3, 89890),
    ],
)
def test_reference_positions(fen, depth, expected):
    assert perft(parse_fen(fen), depth) == expected


def test_recursion_property():
    # perft(b, d) must equal the sum of perft over all children at d-1.
    for board in random_positions(seed=5, count=12, max_plies=40):
        children = [apply_move(board, m) for m in legal_moves(board)]
        assert perft(board, 2) == sum(perft(c, 1) for c in children)
        assert perft(board, 1) == len(children)


def test_depth_cap():
    with pytest.raises(ValueError):
        perft(Board.initial(), 7)
    perft(Board.initial(), 3, max_depth=3)
    with pytest.raises(ValueError):
        perft(Board.initial(), -1)
