import numpy as np
import pytest

from sentichess.board import BLACK, WHITE, Board, Move, apply_move, parse_fen
from sentichess.harness import (
    AgentInitError,
    AgentSpec,
    GameRecord,
    SplitMix64,
    adjudicate,
    games_pgn,
    heatmaps_csv,
    material_trace_csv,
    piece_heatmaps,
    play_game,
    report_to_json,
    run_match,
    write_report,
)
from sentichess.pgn import parse_pgn


class TestSplitMix64:
    def test_known_stream_is_stable(self):
        rng = SplitMix64(0)
        first = rng.next_u64()
        assert first == SplitMix64(0).next_u64()
        assert first != SplitMix64(1).next_u64()

    def test_randrange_bounds(self):
        rng = SplitMix64(7)
        draws = [rng.randrange(13) for _ in range(200)]
        assert min(draws) >= 0
        assert max(draws) < 13
        assert len(set(draws)) > 5


class TestAgentSpec:
    def test_parse_forms(self):
        assert AgentSpec.parse("random").kind == "random"
        spec = AgentSpec.parse("material:2")
        assert (spec.kind, spec.depth) == ("material", 2)
        assert spec.agent_id == "material:2"

    def test_bad_kind(self):
        with pytest.raises(AgentInitError):
            AgentSpec.parse("stockfish")

    def test_bad_depth(self):
        with pytest.raises(AgentInitError):
            AgentSpec.parse("material:x")
        with pytest.raises(AgentInitError):
            AgentSpec(kind="material", depth=0)

    def test_sentimate_needs_weights(self):
        with pytest.raises(AgentInitError):
            play_game(AgentSpec.parse("sentimate:1"), AgentSpec.parse("random"), seed=1)

    def test_sentimate_missing_file(self):
        spec = AgentSpec.parse("sentimate:1", weights_path="/nonexistent/w.smw1")
        with pytest.raises(AgentInitError):
            play_game(spec, AgentSpec.parse("random"), seed=1)


class TestAdjudicate:
    def test_equal_material_draws(self):
        assert adjudicate(Board.initial()) == "draw"

    def test_white_ahead(self):
        assert adjudicate(parse_fen("4k3/8/8/8/8/8/8/QQ2K3 w - - 0 1")) == "white"

    def test_black_ahead(self):
        assert adjudicate(parse_fen("q3k3/8/8/8/8/8/8/4K3 w - - 0 1")) == "black"

    def test_bare_kings_draw(self):
        assert adjudicate(parse_fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1")) == "draw"


class TestPlayGame:
    def test_random_game_deterministic(self):
        white = AgentSpec.parse("random")
        black = AgentSpec.parse("random")
        a = play_game(white, black, seed=42)
        b = play_game(white, black, seed=42)
        assert a == b
        assert len(a.moves) <= 80
        assert a.material_trace[0] == (39, 39)
        assert len(a.material_trace) == len(a.moves) + 1
        c = play_game(white, black, seed=43)
        assert c.moves != a.moves

    def test_adjudication_at_horizon(self):
        # Two random agents rarely end inside 6 full moves.
        record = play_game(AgentSpec.parse("random"), AgentSpec.parse("random"), seed=5, max_fullmoves=6)
        if record.termination.startswith("adjudicated"):
            assert record.termination == "adjudicated-6"
            assert len(record.moves) == 12

    def test_checkmate_outcome_mapping(self):
        found = False
        for seed in range(25):
            record = play_game(
                AgentSpec.parse("material:1"), AgentSpec.parse("random"), seed=seed
            )
            if record.termination == "checkmate":
                found = True
                assert record.outcome in ("white", "black")
            if record.termination.startswith("adjudicated"):
                assert len(record.moves) == 80
        assert found, "expected at least one checkmate in 25 games"

    def test_moves_replay_legally(self):
        record = play_game(AgentSpec.parse("random"), AgentSpec.parse("random"), seed=9)
        board = Board.initial()
        for text in record.moves:
            board = apply_move(board, Move.from_uci(text))  # raises if illegal
        from sentichess.board import emit_fen

        assert emit_fen(board) == record.final_fen

    def test_material_trace_monotone_except_promotion(self):
        for seed in (1, 2, 3):
            record = play_game(AgentSpec.parse("random"), AgentSpec.parse("random"), seed=seed)
            board = Board.initial()
            for i, text in enumerate(record.moves):
                move = Move.from_uci(text)
                promoting = move.promotion is not None
                w0, b0 = record.material_trace[i]
                w1, b1 = record.material_trace[i + 1]
                if not promoting:
                    assert w1 <= w0
                    assert b1 <= b0
                board = apply_move(board, move)


class TestRunMatch:
    def test_totals_sum(self):
        report = run_match(
            AgentSpec.parse("material:1"), AgentSpec.parse("random"), n_games=5, base_seed=3
        )
        for agent_id, t in report.totals.items():
            assert t["wins"] + t["draws"] + t["losses"] == 5

    def test_report_deterministic(self):
        args = (AgentSpec.parse("material:1"), AgentSpec.parse("random"))
        a = run_match(*args, n_games=4, base_seed=11, swap_colors=True)
        b = run_match(*args, n_games=4, base_seed=11, swap_colors=True)
        assert report_to_json(a) == report_to_json(b)
        assert material_trace_csv(a) == material_trace_csv(b)
        assert heatmaps_csv(a) == heatmaps_csv(b)
        assert games_pgn(a) == games_pgn(b)

    def test_parallel_matches_serial(self):
        args = (AgentSpec.parse("material:1"), AgentSpec.parse("random"))
        serial = run_match(*args, n_games=4, base_seed=2, jobs=1)
        parallel = run_match(*args, n_games=4, base_seed=2, jobs=2)
        assert report_to_json(serial) == report_to_json(parallel)

    def test_deterministic_agents_only_two_games_under_swap(self):
        # Both sides deterministic searchers: with color swapping, at most
        # two distinct games can occur, and repeats are move-for-move exact.
        report = run_match(
            AgentSpec.parse("material:1"),
            AgentSpec.parse("material:2"),
            n_games=4,
            base_seed=0,
            swap_colors=True,
            max_fullmoves=12,
        )
        move_lists = {tuple(g.moves) for g in report.games}
        assert len(move_lists) <= 2
        assert report.games[0].moves == report.games[2].moves
        assert report.games[1].moves == report.games[3].moves

    def test_swap_colors_alternates_ids(self):
        report = run_match(
            AgentSpec.parse("material:1"),
            AgentSpec.parse("random"),
            n_games=4,
            base_seed=5,
            swap_colors=True,
            max_fullmoves=5,
        )
        assert [g.white_id for g in report.games] == [
            "material:1",
            "random",
            "material:1",
            "random",
        ]

    def test_mean_material_lengths(self):
        report = run_match(
            AgentSpec.parse("random"), AgentSpec.parse("random"), n_games=3, base_seed=8,
            max_fullmoves=10,
        )
        longest = max(len(g.material_trace) for g in report.games)
        for agent_id in report.agents:
            assert len(report.mean_material[agent_id]) == longest
            assert report.mean_material[agent_id][0] == 39.0


class TestPieceHeatmaps:
    def test_knight_tour_counts(self):
        record = GameRecord(
            white_id="subject",
            black_id="other",
            moves=["g1f3", "a7a6", "f3g5", "b7b6"],
            material_trace=[(39, 39)] * 5,
            outcome="draw",
            termination="adjudicated-2",
            seed=0,
            final_fen="",
        )
        maps = piece_heatmaps([record], "subject")
        knight = maps[0, 1]  # white knights
        assert knight[2, 5] == 1  # f3
        assert knight[4, 6] == 1  # g5
        assert maps.sum() == 2

    def test_pawn_opening(self):
        record = GameRecord(
            white_id="subject",
            black_id="other",
            moves=["e2e4"],
            material_trace=[(39, 39)] * 2,
            outcome="draw",
            termination="adjudicated-1",
            seed=0,
            final_fen="",
        )
        maps = piece_heatmaps([record], "subject")
        assert maps[0, 0, 3, 4] == 1  # white pawn to e4
        assert maps.sum() == 1

    def test_empty_games(self):
        assert piece_heatmaps([], "subject").sum() == 0

    def test_castling_counts_rook_too(self):
        moves = ["e2e4", "e7e5", "g1f3", "b8c6", "f1c4", "g8f6", "e1g1", "h7h6"]
        record = GameRecord(
            white_id="subject",
            black_id="other",
            moves=moves,
            material_trace=[(39, 39)] * (len(moves) + 1),
            outcome="draw",
            termination="adjudicated-4",
            seed=0,
            final_fen="",
        )
        maps = piece_heatmaps([record], "subject")
        assert maps[0, 5, 0, 6] == 1  # king to g1
        assert maps[0, 3, 0, 5] == 1  # rook to f1
        white_moves = 4
        assert maps.sum() == white_moves + 1  # one castling

    def test_total_matches_agent_moves(self):
        report = run_match(
            AgentSpec.parse("material:1"), AgentSpec.parse("random"), n_games=3, base_seed=21
        )
        agent = report.agents[0]
        expected = 0
        for g in report.games:
            board = Board.initial()
            for text in g.moves:
                move = Move.from_uci(text)
                mover_is_agent = (
                    g.white_id == agent
                    if board.side_to_move == WHITE
                    else g.black_id == agent
                )
                if mover_is_agent:
                    expected += 1
                    piece = board.squares[move.from_sq]
                    if abs(piece) == 6 and abs(move.to_sq - move.from_sq) == 2:
                        expected += 1
                board = apply_move(board, move)
        assert report.heatmaps.sum() == expected


class TestReportFiles:
    def test_write_report(self, tmp_path):
        report = run_match(
            AgentSpec.parse("random"), AgentSpec.parse("random"), n_games=2, base_seed=1,
            max_fullmoves=8,
        )
        out = tmp_path / "report"
        write_report(report, out)
        assert sorted(p.name for p in out.iterdir()) == [
            "games.pgn",
            "heatmaps.csv",
            "material_trace.csv",
            "report.json",
        ]
        trace = (out / "material_trace.csv").read_text().splitlines()
        assert trace[0] == "game,ply,white,black"
        assert trace[1] == "0,0,39,39"
        heat = (out / "heatmaps.csv").read_text().splitlines()
        assert heat[0] == "color,kind,file,rank,count"
        assert len(heat) == 1 + 2 * 6 * 64

    def test_pgn_replays(self):
        report = run_match(
            AgentSpec.parse("random"), AgentSpec.parse("random"), n_games=2, base_seed=4,
            max_fullmoves=6,
        )
        text = games_pgn(report)
        second_game = text.index("[Event", 1)
        for chunk, record in zip((text[:second_game], text[second_game:]), report.games):
            parsed = parse_pgn(chunk)
            assert [m.move.uci() for m in parsed.moves] == record.moves
            assert parsed.tags["White"] == record.white_id
            assert parsed.tags["Seed"] == str(record.seed)
