import random

import pytest

from sentichess.board import Board, apply_move, has_legal_move, legal_moves


def random_position(rng: random.Random, max_plies: int) -> Board:
    """Board reached by a random playout of up to max_plies from the start.

    Stops early if the game ends; always returns a position with at least
    one legal move.
    """
    board = Board.initial()
    plies = rng.randrange(max_plies + 1)
    for _ in range(plies):
        moves = legal_moves(board)
        if not moves:
            break
        board = apply_move(board, moves[rng.randrange(len(moves))])
    if not has_legal_move(board):
        return random_position(rng, max_plies)
    return board


def random_positions(seed: int, count: int, max_plies: int = 60):
    rng = random.Random(seed)
    return [random_position(rng, max_plies) for _ in range(count)]


@pytest.fixture(scope="session")
def playout_positions():
    """A modest shared batch of random legal positions for property tests."""
    return random_positions(seed=2024, count=120)
