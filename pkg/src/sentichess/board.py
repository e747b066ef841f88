"""Chess rules: position representation, FEN, legal move generation, perft.

Squares are integers 0..63 with a1=0, b1=1, ..., h8=63 (rank-major from
white's side).  Pieces are signed ints: positive white, negative black,
abs value is the piece kind.  All operations are pure: boards are never
mutated, apply_move returns a fresh Board.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

WHITE = 1
BLACK = -1

PAWN = 1
KNIGHT = 2
BISHOP = 3
ROOK = 4
QUEEN = 5
KING = 6

KIND_TO_CHAR = {PAWN: "p", KNIGHT: "n", BISHOP: "b", ROOK: "r", QUEEN: "q", KING: "k"}
CHAR_TO_KIND = {v: k for k, v in KIND_TO_CHAR.items()}

# FEN piece letters: uppercase white, lowercase black.
PIECE_TO_CHAR = {k: c.upper() for k, c in KIND_TO_CHAR.items()}
PIECE_TO_CHAR.update({-k: c for k, c in KIND_TO_CHAR.items()})
CHAR_TO_PIECE = {c: p for p, c in PIECE_TO_CHAR.items()}

# Castling rights bit mask.
CASTLE_WK = 1
CASTLE_WQ = 2
CASTLE_BK = 4
CASTLE_BQ = 8

STARTPOS_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class InvalidFen(ValueError):
    """Raised for malformed or invariant-violating FEN text."""

    def __init__(self, message: str, field: Optional[int] = None):
        self.field = field
        if field is not None:
            message = f"{message} (FEN field {field})"
        super().__init__(message)


class IllegalMove(ValueError):
    """Raised when a move is not legal in the given position."""


def file_of(sq: int) -> int:
    return sq & 7


def rank_of(sq: int) -> int:
    return sq >> 3


def square_name(sq: int) -> str:
    return chr(ord("a") + (sq & 7)) + str((sq >> 3) + 1)


def parse_square(name: str) -> int:
    if len(name) != 2 or name[0] not in "abcdefgh" or name[1] not in "12345678":
        raise ValueError(f"invalid square name: {name!r}")
    return (int(name[1]) - 1) * 8 + (ord(name[0]) - ord("a"))


_PROMO_KINDS = (QUEEN, ROOK, BISHOP, KNIGHT)


@dataclass(frozen=True)
class Move:
    """One move in long-algebraic form: from-square, to-square, optional promotion kind."""

    from_sq: int
    to_sq: int
    promotion: Optional[int] = None

    def __post_init__(self):
        if self.from_sq == self.to_sq:
            raise ValueError("move must change square")
        if self.promotion is not None and self.promotion not in _PROMO_KINDS:
            raise ValueError(f"invalid promotion kind: {self.promotion}")

    def uci(self) -> str:
        text = square_name(self.from_sq) + square_name(self.to_sq)
        if self.promotion is not None:
            text += KIND_TO_CHAR[self.promotion]
        return text

    @classmethod
    def from_uci(cls, text: str) -> "Move":
        if len(text) not in (4, 5):
            raise ValueError(f"invalid move text: {text!r}")
        frm = parse_square(text[0:2])
        to = parse_square(text[2:4])
        promo = None
        if len(text) == 5:
            kind = CHAR_TO_KIND.get(text[4])
            if kind not in _PROMO_KINDS:
                raise ValueError(f"invalid promotion letter: {text[4]!r}")
            promo = kind
        return cls(frm, to, promo)


@dataclass(frozen=True)
class GameStatus:
    """Game outcome classification; winner is set only for checkmate."""

    kind: str
    winner: Optional[int] = None

    ONGOING = "ongoing"
    CHECKMATE = "checkmate"
    STALEMATE = "stalemate"
    DRAW_FIFTY = "draw-fifty-move"
    DRAW_THREEFOLD = "draw-threefold"
    DRAW_MATERIAL = "draw-insufficient-material"

    @property
    def is_over(self) -> bool:
        return self.kind != GameStatus.ONGOING

    @property
    def is_draw(self) -> bool:
        return self.is_over and self.kind != GameStatus.CHECKMATE


# ---------------------------------------------------------------------------
# Precomputed geometry.  Direction order: N, S, E, W, NE, NW, SE, SW.
# Directions 0-3 are rook lines, 4-7 bishop lines.

_DIR_DELTAS = ((0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, 1), (1, -1), (-1, -1))


def _build_rays():
    rays = []
    for sq in range(64):
        f, r = sq & 7, sq >> 3
        per_dir = []
        for df, dr in _DIR_DELTAS:
            line = []
            nf, nr = f + df, r + dr
            while 0 <= nf < 8 and 0 <= nr < 8:
                line.append(nr * 8 + nf)
                nf += df
                nr += dr
            per_dir.append(tuple(line))
        rays.append(tuple(per_dir))
    return tuple(rays)


def _build_jumps(offsets):
    table = []
    for sq in range(64):
        f, r = sq & 7, sq >> 3
        targets = []
        for df, dr in offsets:
            nf, nr = f + df, r + dr
            if 0 <= nf < 8 and 0 <= nr < 8:
                targets.append(nr * 8 + nf)
        table.append(tuple(targets))
    return tuple(table)


RAYS = _build_rays()
KNIGHT_TARGETS = _build_jumps(
    ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))
)
KING_TARGETS = _build_jumps(_DIR_DELTAS)

# BETWEEN[a*64+b]: squares strictly between two aligned squares, else empty.
_BETWEEN = [()] * 4096
for _a in range(64):
    for _d in range(8):
        _ray = RAYS[_a][_d]
        for _i, _b in enumerate(_ray):
            _BETWEEN[_a * 64 + _b] = _ray[:_i]
BETWEEN = tuple(_BETWEEN)
del _BETWEEN, _a, _d, _ray


@dataclass
class Board:
    """Full chess position: placement, side to move, castling, en passant, clocks."""

    squares: list  # 64 signed piece codes, 0 = empty
    side_to_move: int  # WHITE or BLACK
    castling: int  # CASTLE_* bit mask
    en_passant: int  # target square of a capture en passant, -1 = none
    halfmove_clock: int
    fullmove_number: int

    @classmethod
    def initial(cls) -> "Board":
        return parse_fen(STARTPOS_FEN)

    def piece_at(self, sq: int) -> int:
        return self.squares[sq]

    def king_square(self, color: int) -> int:
        return self.squares.index(KING if color == WHITE else -KING)


def parse_fen(text: str) -> Board:
    """Parse a six-field FEN string into a Board, validating position invariants."""
    fields = text.split()
    if len(fields) != 6:
        raise InvalidFen(f"expected 6 fields, got {len(fields)}")
    placement, stm_text, castling_text, ep_text, half_text, full_text = fields

    ranks = placement.split("/")
    if len(ranks) != 8:
        raise InvalidFen(f"expected 8 ranks, got {len(ranks)}", field=0)
    squares = [0] * 64
    for rank_idx, rank_text in enumerate(ranks):
        rank = 7 - rank_idx  # FEN lists rank 8 first
        file = 0
        for ch in rank_text:
            if ch.isdigit():
                if ch == "0":
                    raise InvalidFen("zero-length empty run", field=0)
                file += int(ch)
            else:
                piece = CHAR_TO_PIECE.get(ch)
                if piece is None:
                    raise InvalidFen(f"invalid piece letter {ch!r}", field=0)
                if file >= 8:
                    raise InvalidFen(f"rank {rank + 1} longer than 8 squares", field=0)
                squares[rank * 8 + file] = piece
                file += 1
        if file != 8:
            raise InvalidFen(f"rank {rank + 1} has {file} squares", field=0)

    if squares.count(KING) != 1 or squares.count(-KING) != 1:
        raise InvalidFen("each side must have exactly one king", field=0)
    for sq in list(range(0, 8)) + list(range(56, 64)):
        if abs(squares[sq]) == PAWN:
            raise InvalidFen("pawn on back rank", field=0)

    if stm_text == "w":
        stm = WHITE
    elif stm_text == "b":
        stm = BLACK
    else:
        raise InvalidFen(f"side to move must be 'w' or 'b', got {stm_text!r}", field=1)

    castling = 0
    if castling_text != "-":
        mask_for = {"K": CASTLE_WK, "Q": CASTLE_WQ, "k": CASTLE_BK, "q": CASTLE_BQ}
        for ch in castling_text:
            bit = mask_for.get(ch)
            if bit is None or castling & bit:
                raise InvalidFen(f"invalid castling rights {castling_text!r}", field=2)
            castling |= bit
    # Rights imply king and rook still on their home squares.
    for bit, king_sq, rook_sq, king_pc, rook_pc in (
        (CASTLE_WK, 4, 7, KING, ROOK),
        (CASTLE_WQ, 4, 0, KING, ROOK),
        (CASTLE_BK, 60, 63, -KING, -ROOK),
        (CASTLE_BQ, 60, 56, -KING, -ROOK),
    ):
        if castling & bit and (squares[king_sq] != king_pc or squares[rook_sq] != rook_pc):
            raise InvalidFen("castling right without king/rook on home squares", field=2)

    if ep_text == "-":
        ep = -1
    else:
        try:
            ep = parse_square(ep_text)
        except ValueError:
            raise InvalidFen(f"invalid en passant square {ep_text!r}", field=3) from None
        want_rank = 5 if stm == WHITE else 2  # rank 6 after black's double push, rank 3 after white's
        if rank_of(ep) != want_rank:
            raise InvalidFen("en passant square on wrong rank", field=3)
        if squares[ep] != 0:
            raise InvalidFen("en passant square not empty", field=3)

    try:
        halfmove = int(half_text)
        if halfmove < 0:
            raise ValueError
    except ValueError:
        raise InvalidFen(f"invalid halfmove clock {half_text!r}", field=4) from None
    try:
        fullmove = int(full_text)
        if fullmove < 1:
            raise ValueError
    except ValueError:
        raise InvalidFen(f"invalid fullmove number {full_text!r}", field=5) from None

    return Board(squares, stm, castling, ep, halfmove, fullmove)


def emit_fen(board: Board) -> str:
    """Serialize a Board to canonical six-field FEN."""
    return " ".join(
        (
            _placement_text(board.squares),
            "w" if board.side_to_move == WHITE else "b",
            _castling_text(board.castling),
            "-" if board.en_passant < 0 else square_name(board.en_passant),
            str(board.halfmove_clock),
            str(board.fullmove_number),
        )
    )


def _placement_text(squares) -> str:
    ranks = []
    for rank in range(7, -1, -1):
        run = 0
        parts = []
        for sq in range(rank * 8, rank * 8 + 8):
            p = squares[sq]
            if p == 0:
                run += 1
            else:
                if run:
                    parts.append(str(run))
                    run = 0
                parts.append(PIECE_TO_CHAR[p])
        if run:
            parts.append(str(run))
        ranks.append("".join(parts))
    return "/".join(ranks)


def _castling_text(mask: int) -> str:
    if not mask:
        return "-"
    out = ""
    if mask & CASTLE_WK:
        out += "K"
    if mask & CASTLE_WQ:
        out += "Q"
    if mask & CASTLE_BK:
        out += "k"
    if mask & CASTLE_BQ:
        out += "q"
    return out


def position_key(board: Board) -> str:
    """Repetition key: placement, side to move, castling, en passant (no clocks)."""
    return " ".join(
        (
            _placement_text(board.squares),
            "w" if board.side_to_move == WHITE else "b",
            _castling_text(board.castling),
            "-" if board.en_passant < 0 else square_name(board.en_passant),
        )
    )


# ---------------------------------------------------------------------------
# Attack detection.


def _square_attacked(squares, sq, by_white: bool, skip_sq: int = -1) -> bool:
    """Is sq attacked by the given color?  skip_sq is treated as empty (moving king)."""
    if by_white:
        pawn, knight, bishop, rook, queen, king = PAWN, KNIGHT, BISHOP, ROOK, QUEEN, KING
        # White pawns attack from one rank below.
        f = sq & 7
        if sq >= 8:
            if f > 0 and squares[sq - 9] == PAWN:
                return True
            if f < 7 and squares[sq - 7] == PAWN:
                return True
    else:
        pawn, knight, bishop, rook, queen, king = -PAWN, -KNIGHT, -BISHOP, -ROOK, -QUEEN, -KING
        f = sq & 7
        if sq < 56:
            if f > 0 and squares[sq + 7] == pawn:
                return True
            if f < 7 and squares[sq + 9] == pawn:
                return True
    for t in KNIGHT_TARGETS[sq]:
        if squares[t] == knight:
            return True
    for t in KING_TARGETS[sq]:
        if squares[t] == king:
            return True
    rays = RAYS[sq]
    for d in range(4):
        for t in rays[d]:
            p = squares[t]
            if p == 0 or t == skip_sq:
                continue
            if p == rook or p == queen:
                return True
            break
    for d in range(4, 8):
        for t in rays[d]:
            p = squares[t]
            if p == 0 or t == skip_sq:
                continue
            if p == bishop or p == queen:
                return True
            break
    return False


def _checkers(squares, king_sq, by_white: bool):
    """Squares of enemy pieces giving check (at most two matter)."""
    found = []
    if by_white:
        f = king_sq & 7
        if king_sq >= 8:
            if f > 0 and squares[king_sq - 9] == PAWN:
                found.append(king_sq - 9)
            if f < 7 and squares[king_sq - 7] == PAWN:
                found.append(king_sq - 7)
        knight, bishop, rook, queen = KNIGHT, BISHOP, ROOK, QUEEN
    else:
        f = king_sq & 7
        if king_sq < 56:
            if f > 0 and squares[king_sq + 7] == -PAWN:
                found.append(king_sq + 7)
            if f < 7 and squares[king_sq + 9] == -PAWN:
                found.append(king_sq + 9)
        knight, bishop, rook, queen = -KNIGHT, -BISHOP, -ROOK, -QUEEN
    for t in KNIGHT_TARGETS[king_sq]:
        if squares[t] == knight:
            found.append(t)
    rays = RAYS[king_sq]
    for d in range(4):
        for t in rays[d]:
            p = squares[t]
            if p == 0:
                continue
            if p == rook or p == queen:
                found.append(t)
            break
    for d in range(4, 8):
        for t in rays[d]:
            p = squares[t]
            if p == 0:
                continue
            if p == bishop or p == queen:
                found.append(t)
            break
    return found


def is_in_check(board: Board) -> bool:
    """Is the side to move in check?"""
    king_sq = board.king_square(board.side_to_move)
    return _square_attacked(board.squares, king_sq, board.side_to_move == BLACK)


# ---------------------------------------------------------------------------
# Legal move generation.  Pin- and check-aware, no make/unmake in the common
# path; en passant is validated by simulation (the one case where a capture
# can expose the king along a rank).


def _ep_is_legal(board: Board, frm: int, ep_sq: int, king_sq: int) -> bool:
    squares = list(board.squares)
    captured_sq = ep_sq - 8 if board.side_to_move == WHITE else ep_sq + 8
    squares[ep_sq] = squares[frm]
    squares[frm] = 0
    squares[captured_sq] = 0
    return not _square_attacked(squares, king_sq, board.side_to_move == BLACK)


def _legal_tuples(board: Board, first_only: bool = False):
    """All strictly legal moves as (from, to, promotion-kind-or-None) tuples."""
    squares = board.squares
    stm = board.side_to_move
    white = stm == WHITE
    own_king = KING if white else -KING
    king_sq = squares.index(own_king)
    enemy_white = not white
    checkers = _checkers(squares, king_sq, enemy_white)
    moves = []

    if len(checkers) < 2:
        # Absolutely pinned pieces and the line each may stay on.
        pinned = {}
        king_rays = RAYS[king_sq]
        for d in range(8):
            blocker = -1
            for t in king_rays[d]:
                p = squares[t]
                if p == 0:
                    continue
                if blocker < 0:
                    if (p > 0) == white:
                        blocker = t
                        continue
                    break
                if (p > 0) == white:
                    break
                kind = -p if p < 0 else p
                if kind == QUEEN or kind == (ROOK if d < 4 else BISHOP):
                    pinned[blocker] = frozenset(BETWEEN[king_sq * 64 + t]) | {t}
                break

        if checkers:
            c = checkers[0]
            allowed = frozenset(BETWEEN[king_sq * 64 + c]) | {c}
        else:
            allowed = None

        ep_sq = board.en_passant
        pawn_dir = 8 if white else -8
        start_rank = 1 if white else 6
        promo_rank = 6 if white else 1
        for frm in range(64):
            p = squares[frm]
            if p == 0 or (p > 0) != white:
                continue
            kind = p if white else -p
            if kind == KING:
                continue
            pin_line = pinned.get(frm)
            if kind == PAWN:
                rank = frm >> 3
                file = frm & 7
                fwd = frm + pawn_dir
                if squares[fwd] == 0:
                    ok = (pin_line is None or fwd in pin_line) and (
                        allowed is None or fwd in allowed
                    )
                    if ok:
                        if rank == promo_rank:
                            for promo in _PROMO_KINDS:
                                moves.append((frm, fwd, promo))
                        else:
                            moves.append((frm, fwd, None))
                    if rank == start_rank:
                        fwd2 = fwd + pawn_dir
                        if squares[fwd2] == 0 and (
                            pin_line is None or fwd2 in pin_line
                        ) and (allowed is None or fwd2 in allowed):
                            moves.append((frm, fwd2, None))
                for df in (-1, 1):
                    if not 0 <= file + df < 8:
                        continue
                    t = fwd + df
                    q = squares[t]
                    if q != 0 and (q > 0) != white:
                        if (pin_line is None or t in pin_line) and (
                            allowed is None or t in allowed
                        ):
                            if rank == promo_rank:
                                for promo in _PROMO_KINDS:
                                    moves.append((frm, t, promo))
                            else:
                                moves.append((frm, t, None))
                    elif t == ep_sq and _ep_is_legal(board, frm, t, king_sq):
                        moves.append((frm, t, None))
            elif kind == KNIGHT:
                if pin_line is not None:
                    continue  # a pinned knight can never stay on the pin line
                for t in KNIGHT_TARGETS[frm]:
                    q = squares[t]
                    if (q == 0 or (q > 0) != white) and (allowed is None or t in allowed):
                        moves.append((frm, t, None))
            else:
                if kind == BISHOP:
                    dirs = range(4, 8)
                elif kind == ROOK:
                    dirs = range(4)
                else:
                    dirs = range(8)
                frm_rays = RAYS[frm]
                for d in dirs:
                    for t in frm_rays[d]:
                        q = squares[t]
                        if q == 0:
                            if (pin_line is None or t in pin_line) and (
                                allowed is None or t in allowed
                            ):
                                moves.append((frm, t, None))
                            continue
                        if (q > 0) != white and (pin_line is None or t in pin_line) and (
                            allowed is None or t in allowed
                        ):
                            moves.append((frm, t, None))
                        break
            if first_only and moves:
                return moves

    # King moves (also the only option under double check).
    for t in KING_TARGETS[king_sq]:
        q = squares[t]
        if q != 0 and (q > 0) == white:
            continue
        if not _square_attacked(squares, t, enemy_white, skip_sq=king_sq):
            moves.append((king_sq, t, None))
            if first_only:
                return moves

    if not checkers:
        if white:
            if (
                board.castling & CASTLE_WK
                and squares[5] == 0
                and squares[6] == 0
                and not _square_attacked(squares, 5, False)
                and not _square_attacked(squares, 6, False)
            ):
                moves.append((4, 6, None))
            if (
                board.castling & CASTLE_WQ
                and squares[1] == 0
                and squares[2] == 0
                and squares[3] == 0
                and not _square_attacked(squares, 2, False)
                and not _square_attacked(squares, 3, False)
            ):
                moves.append((4, 2, None))
        else:
            if (
                board.castling & CASTLE_BK
                and squares[61] == 0
                and squares[62] == 0
                and not _square_attacked(squares, 61, True)
                and not _square_attacked(squares, 62, True)
            ):
                moves.append((60, 62, None))
            if (
                board.castling & CASTLE_BQ
                and squares[57] == 0
                and squares[58] == 0
                and squares[59] == 0
                and not _square_attacked(squares, 58, True)
                and not _square_attacked(squares, 59, True)
            ):
                moves.append((60, 58, None))
    return moves


# Sort key reproducing lexicographic order of the long-algebraic move text.
_PROMO_ORDER = {None: -1, BISHOP: 0, KNIGHT: 1, QUEEN: 2, ROOK: 3}


def _move_sort_key(t):
    frm, to, promo = t
    return (frm & 7, frm >> 3, to & 7, to >> 3, _PROMO_ORDER[promo])


def _sorted_tuples(board: Board):
    return sorted(_legal_tuples(board), key=_move_sort_key)


def legal_moves(board: Board) -> list:
    """All strictly legal moves, sorted by their long-algebraic text."""
    return [Move(frm, to, promo) for frm, to, promo in _sorted_tuples(board)]


def has_legal_move(board: Board) -> bool:
    return bool(_legal_tuples(board, first_only=True))


def _apply_tuple(board: Board, frm: int, to: int, promo) -> Board:
    """Apply a known-legal move; no legality check."""
    squares = list(board.squares)
    p = squares[frm]
    white = p > 0
    kind = p if white else -p
    captured = squares[to] != 0
    castling = board.castling
    new_ep = -1

    if kind == PAWN:
        if to == board.en_passant and not captured:
            squares[to - 8 if white else to + 8] = 0
            captured = True
        elif to - frm in (16, -16):
            new_ep = (frm + to) >> 1
    elif kind == KING:
        castling &= ~(CASTLE_WK | CASTLE_WQ) if white else ~(CASTLE_BK | CASTLE_BQ)
        if to - frm == 2:  # king side: rook h->f
            squares[to + 1] = 0
            squares[to - 1] = ROOK if white else -ROOK
        elif frm - to == 2:  # queen side: rook a->d
            squares[to - 2] = 0
            squares[to + 1] = ROOK if white else -ROOK

    if castling:
        for sq in (frm, to):
            if sq == 0:
                castling &= ~CASTLE_WQ
            elif sq == 7:
                castling &= ~CASTLE_WK
            elif sq == 56:
                castling &= ~CASTLE_BQ
            elif sq == 63:
                castling &= ~CASTLE_BK

    squares[to] = (promo if white else -promo) if promo else p
    squares[frm] = 0

    return Board(
        squares,
        -board.side_to_move,
        castling,
        new_ep,
        0 if (kind == PAWN or captured) else board.halfmove_clock + 1,
        board.fullmove_number + (0 if white else 1),
    )


def apply_move(board: Board, move: Move) -> Board:
    """Apply a legal move, returning the successor position.

    Raises IllegalMove if the move is not in legal_moves(board).
    """
    key = (move.from_sq, move.to_sq, move.promotion)
    if key not in _legal_tuples(board):
        raise IllegalMove(f"illegal move {move.uci()} in {emit_fen(board)}")
    return _apply_tuple(board, *key)


def game_status(board: Board, history) -> GameStatus:
    """Classify the position given the list of repetition keys seen so far.

    The history must include the current position's key.  When several draw
    conditions hold at once the first of fifty-move, threefold, insufficient
    material is reported.
    """
    if not has_legal_move(board):
        if is_in_check(board):
            return GameStatus(GameStatus.CHECKMATE, winner=-board.side_to_move)
        return GameStatus(GameStatus.STALEMATE)
    if board.halfmove_clock >= 100:
        return GameStatus(GameStatus.DRAW_FIFTY)
    if history.count(position_key(board)) >= 3:
        return GameStatus(GameStatus.DRAW_THREEFOLD)
    if _insufficient_material(board.squares):
        return GameStatus(GameStatus.DRAW_MATERIAL)
    return GameStatus(GameStatus.ONGOING)


def _insufficient_material(squares) -> bool:
    # No mate is possible, even with cooperation: bare kings, a lone minor,
    # or bishops (any number, either side) all on one square color.
    knights = 0
    bishops = 0
    bishop_colors = set()
    for sq, p in enumerate(squares):
        if p == 0:
            continue
        kind = p if p > 0 else -p
        if kind in (PAWN, ROOK, QUEEN):
            return False
        if kind == KNIGHT:
            knights += 1
        elif kind == BISHOP:
            bishops += 1
            bishop_colors.add(((sq >> 3) + (sq & 7)) & 1)
    if knights + bishops <= 1:
        return True
    return knights == 0 and len(bishop_colors) == 1


def perft(board: Board, depth: int, max_depth: int = 6) -> int:
    """Count leaf nodes of the legal-move tree at exactly `depth` plies."""
    if depth < 0:
        raise ValueError("perft depth must be >= 0")
    if depth > max_depth:
        raise ValueError(f"perft depth {depth} exceeds cap {max_depth}")
    return _perft(board, depth)


def _perft(board: Board, depth: int) -> int:
    if depth == 0:
        return 1
    tuples = _legal_tuples(board)
    if depth == 1:
        return len(tuples)
    total = 0
    for frm, to, promo in tuples:
        total += _perft(_apply_tuple(board, frm, to, promo), depth - 1)
    return total
