import io
import random

import numpy as np
import pytest

from sentichess.board import (
    BLACK,
    KING,
    WHITE,
    Board,
    Move,
    apply_move,
    legal_moves,
    parse_fen,
)
from sentichess.encoding import (
    IllegalTransition,
    dump_bytes,
    encode_move_pair,
    encode_state,
    material_balance,
    material_score,
    read_tensor_dump,
    write_tensor_dump,
)
from conftest import random_positions


class TestEncodeState:
    def test_white_queen_on_e4(self):
        # e4 is file 5, rank 4 (1-indexed): row 3, col 4; white queen channel is 4.
        board = parse_fen("4k3/8/8/8/4Q3/8/8/4K3 w - - 0 1")
        planes = encode_state(board)
        assert planes[3, 4, 4] == 1.0
        assert planes[:, :, 4].sum() == 1.0

    def test_initial_pawn_rows(self):
        planes = encode_state(Board.initial())
        assert (planes[1, :, 0] == 1.0).all()
        assert planes[:, :, 0].sum() == 8.0
        assert (planes[6, :, 6] == -1.0).all()
        assert planes[:, :, 6].sum() == -8.0

    def test_turn_plane(self):
        white_turn = encode_state(Board.initial())
        assert (white_turn[:, :, 12] == 1.0).all()
        black_turn = encode_state(apply_move(Board.initial(), Move.from_uci("e2e4")))
        assert (black_turn[:, :, 12] == -1.0).all()

    def test_plane_invariants_on_random_positions(self, playout_positions):
        for board in playout_positions:
            planes = encode_state(board)
            assert set(np.unique(planes)) <= {-1.0, 0.0, 1.0}
            assert (planes[:, :, 0:6] >= 0).all()
            assert (planes[:, :, 6:12] <= 0).all()
            piece_count = sum(1 for p in board.squares if p != 0)
            assert np.abs(planes[:, :, 0:12]).sum() == piece_count
            turn = planes[:, :, 12]
            assert (turn == turn[0, 0]).all()

    def test_distinct_positions_distinct_planes(self):
        a = encode_state(Board.initial())
        b = encode_state(apply_move(Board.initial(), Move.from_uci("e2e4")))
        assert not np.array_equal(a, b)


class TestEncodeMovePair:
    def test_e2e4_differs_in_66_cells(self):
        before = Board.initial()
        after = apply_move(before, Move.from_uci("e2e4"))
        pair = encode_move_pair(before, after)
        assert pair.shape == (8, 8, 26)
        assert pair.size == 1664
        diff = (pair[:, :, :13] != pair[:, :, 13:]).sum()
        assert diff == 66  # 2 pawn cells + 64 turn cells

    def test_halves_match_encode_state(self):
        before = Board.initial()
        after = apply_move(before, Move.from_uci("g1f3"))
        pair = encode_move_pair(before, after)
        assert np.array_equal(pair[:, :, :13], encode_state(before))
        assert np.array_equal(pair[:, :, 13:], encode_state(after))

    def test_illegal_transition_rejected(self):
        before = Board.initial()
        # Same placement but an impossible side-to-move sequence.
        wrong_mover = parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR b KQkq - 0 1")
        after = apply_move(wrong_mover, Move.from_uci("a7a6"))
        with pytest.raises(IllegalTransition):
            encode_move_pair(before, after)
        encode_move_pair(before, after, validate=False)  # raw mode passes through

    def test_unrelated_positions_rejected(self):
        before = Board.initial()
        after = parse_fen("4k3/8/8/8/8/8/8/4K3 b - - 0 1")
        with pytest.raises(IllegalTransition):
            encode_move_pair(before, after)

    def test_piece_cell_change_budget(self, playout_positions):
        # Non-castling, non-en-passant moves touch at most 4 piece-channel
        # cells; the turn planes always flip in all 64 cells.
        rng = random.Random(3)
        for board in playout_positions[:50]:
            moves = legal_moves(board)
            move = moves[rng.randrange(len(moves))]
            piece = board.squares[move.from_sq]
            kind = piece if piece > 0 else -piece
            is_castle = kind == KING and abs(move.to_sq - move.from_sq) == 2
            is_ep = kind == 1 and move.to_sq == board.en_passant
            after = apply_move(board, move)
            pair = encode_move_pair(board, after)
            piece_diff = (pair[:, :, 0:12] != pair[:, :, 13:25]).sum()
            turn_diff = (pair[:, :, 12] != pair[:, :, 25]).sum()
            assert turn_diff == 64
            if not (is_castle or is_ep):
                assert piece_diff <= 4


class TestMaterial:
    def test_initial_is_39(self):
        board = Board.initial()
        assert material_score(board, WHITE) == 39
        assert material_score(board, BLACK) == 39

    def test_missing_knight(self):
        board = parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/R1BQKBNR w KQkq - 0 1")
        assert material_score(board, WHITE) == 36
        assert material_score(board, BLACK) == 39

    def test_kings_are_worthless(self):
        board = parse_fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1")
        assert material_score(board, WHITE) == 0
        assert material_score(board, BLACK) == 0

    def test_capture_decrements_exactly(self, playout_positions):
        rng = random.Random(17)
        for board in playout_positions[:40]:
            moves = legal_moves(board)
            move = moves[rng.randrange(len(moves))]
            after = apply_move(board, move)
            for color in (WHITE, BLACK):
                before_score = material_score(board, color)
                after_score = material_score(after, color)
                if color == board.side_to_move:
                    assert after_score >= before_score  # promotion may add value
                else:
                    assert 0 <= before_score - after_score <= 9

    def test_material_balance_matches_scores(self, playout_positions):
        rng = random.Random(23)
        for board in playout_positions[:40]:
            moves = legal_moves(board)
            move = moves[rng.randrange(len(moves))]
            after = apply_move(board, move)
            expected = (material_score(after, WHITE) - material_score(after, BLACK)) - (
                material_score(board, WHITE) - material_score(board, BLACK)
            )
            assert material_balance(board, after) == expected


class TestDumpFormat:
    def test_round_trip(self):
        before = Board.initial()
        after = apply_move(before, Move.from_uci("d2d4"))
        tensor = encode_move_pair(before, after)
        data = dump_bytes(tensor)
        assert data.startswith(b"8 8 26\n")
        assert len(data) == 7 + 1664 * 4
        assert np.array_equal(read_tensor_dump(data), tensor)

    def test_write_to_file_object(self):
        tensor = encode_move_pair(
            Board.initial(), apply_move(Board.initial(), Move.from_uci("e2e4"))
        )
        buf = io.BytesIO()
        write_tensor_dump(tensor, buf)
        assert buf.getvalue() == dump_bytes(tensor)

    def test_bad_header_rejected(self):
        with pytest.raises(ValueError):
            read_tensor_dump(b"8 8 13\n" + b"\x00" * (1664 * 4))

    def test_truncated_rejected(self):
        with pytest.raises(ValueError):
            read_tensor_dump(b"8 8 26\n" + b"\x00" * 100)

    def test_channel_fastest_layout(self):
        tensor = np.zeros((8, 8, 26), dtype=np.float32)
        tensor[0, 0, 1] = 1.0  # second value in the flat stream
        data = dump_bytes(tensor)
        floats = np.frombuffer(data[7:], dtype="<f4")
        assert floats[1] == 1.0
        assert floats.sum() == 1.0
