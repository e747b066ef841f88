"""PGN import (single game, brace comments) and SAN conversion.

The movetext subset understood here: tag pairs, move numbers, SAN tokens,
{comments} attached to the preceding move, NAGs ($n, skipped) and
parenthesized variations (skipped, counted).  Games end at a result token
or end of input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from sentichess.board import (
    BISHOP,
    KING,
    KNIGHT,
    PAWN,
    QUEEN,
    ROOK,
    WHITE,
    Board,
    Move,
    apply_move,
    has_legal_move,
    is_in_check,
    legal_moves,
    square_name,
)

_SAN_LETTER_TO_KIND = {"N": KNIGHT, "B": BISHOP, "R": ROOK, "Q": QUEEN, "K": KING}
_KIND_TO_SAN_LETTER = {v: k for k, v in _SAN_LETTER_TO_KIND.items()}

_SAN_RE = re.compile(
    r"^([NBRQK])?([a-h])?([1-8])?(x)?([a-h][1-8])(?:=([NBRQ]))?[+#]?$"
)
_CASTLE_RE = re.compile(r"^(O-O-O|O-O|0-0-0|0-0)[+#]?$")
_TAG_RE = re.compile(r'\[\s*(\w+)\s+"((?:[^"\\]|\\.)*)"\s*\]')
_RESULT_TOKENS = {"1-0", "0-1", "1/2-1/2", "*"}


class UnresolvableSan(ValueError):
    """SAN token that is illegal or ambiguous against the current position."""

    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(f"{message} (move index {index})")


class UnterminatedComment(ValueError):
    """Brace comment with no closing brace."""


@dataclass(frozen=True)
class PgnMove:
    """One resolved ply: the move, its source SAN token, and any comment."""

    move: Move
    san: str
    comment: Optional[str] = None


@dataclass
class ParsedGame:
    tags: dict = field(default_factory=dict)
    moves: list = field(default_factory=list)  # list of PgnMove
    variations_skipped: int = 0


def san_to_move(board: Board, san: str, index: int = 0) -> Move:
    """Resolve a SAN token against the position, raising UnresolvableSan on failure."""
    m = _CASTLE_RE.match(san)
    if m:
        queen_side = m.group(1) in ("O-O-O", "0-0-0")
        king_sq = 4 if board.side_to_move == WHITE else 60
        target = king_sq - 2 if queen_side else king_sq + 2
        move = Move(king_sq, target)
        if move in legal_moves(board):
            return move
        raise UnresolvableSan(f"illegal castling {san!r}", index)

    m = _SAN_RE.match(san)
    if not m:
        raise UnresolvableSan(f"unrecognized SAN {san!r}", index)
    letter, from_file, from_rank, capture, dest, promo_letter = m.groups()
    kind = _SAN_LETTER_TO_KIND.get(letter, PAWN)
    to_sq = (int(dest[1]) - 1) * 8 + (ord(dest[0]) - ord("a"))
    promo = _SAN_LETTER_TO_KIND[promo_letter] if promo_letter else None
    # Plain SAN pawn captures must name the source file ("exd5").
    if kind == PAWN and capture and not from_file:
        raise UnresolvableSan(f"pawn capture without source file {san!r}", index)

    candidates = []
    for move in legal_moves(board):
        piece = board.squares[move.from_sq]
        if (piece if piece > 0 else -piece) != kind:
            continue
        if move.to_sq != to_sq or move.promotion != promo:
            continue
        if kind == KING and abs(move.to_sq - move.from_sq) == 2:
            continue  # castling never written as Kg1
        if from_file and (move.from_sq & 7) != ord(from_file) - ord("a"):
            continue
        if from_rank and (move.from_sq >> 3) != int(from_rank) - 1:
            continue
        candidates.append(move)
    if len(candidates) == 1:
        return candidates[0]
    if not candidates:
        raise UnresolvableSan(f"no legal move matches {san!r}", index)
    raise UnresolvableSan(f"ambiguous SAN {san!r}", index)


def move_to_san(board: Board, move: Move) -> str:
    """Render a legal move in minimally disambiguated SAN."""
    piece = board.squares[move.from_sq]
    kind = piece if piece > 0 else -piece
    is_capture = board.squares[move.to_sq] != 0 or (
        kind == PAWN and move.to_sq == board.en_passant
    )
    if kind == KING and move.to_sq - move.from_sq == 2:
        text = "O-O"
    elif kind == KING and move.from_sq - move.to_sq == 2:
        text = "O-O-O"
    elif kind == PAWN:
        text = ""
        if is_capture:
            text += square_name(move.from_sq)[0] + "x"
        text += square_name(move.to_sq)
        if move.promotion:
            text += "=" + _KIND_TO_SAN_LETTER[move.promotion]
    else:
        others = [
            mv
            for mv in legal_moves(board)
            if mv.to_sq == move.to_sq
            and mv.from_sq != move.from_sq
            and abs(board.squares[mv.from_sq]) == kind
        ]
        disamb = ""
        if others:
            same_file = any((mv.from_sq & 7) == (move.from_sq & 7) for mv in others)
            same_rank = any((mv.from_sq >> 3) == (move.from_sq >> 3) for mv in others)
            if not same_file:
                disamb = square_name(move.from_sq)[0]
            elif not same_rank:
                disamb = square_name(move.from_sq)[1]
            else:
                disamb = square_name(move.from_sq)
        text = _KIND_TO_SAN_LETTER[kind] + disamb
        if is_capture:
            text += "x"
        text += square_name(move.to_sq)
    after = apply_move(board, move)
    if is_in_check(after):
        text += "#" if not has_legal_move(after) else "+"
    return text


def _split_movetext(text: str):
    """Tokenize movetext into SAN tokens and comments; drop variations and NAGs.

    Yields ("san", token) and ("comment", text) items plus a final
    ("variations", count).
    """
    i = 0
    n = len(text)
    variations = 0
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "{":
            end = text.find("}", i + 1)
            if end < 0:
                raise UnterminatedComment("comment opened but never closed")
            yield ("comment", text[i + 1 : end].strip())
            i = end + 1
        elif ch == "(":
            depth = 1
            i += 1
            while i < n and depth:
                if text[i] == "(":
                    depth += 1
                elif text[i] == ")":
                    depth -= 1
                elif text[i] == "{":
                    end = text.find("}", i + 1)
                    if end < 0:
                        raise UnterminatedComment("comment opened but never closed")
                    i = end
                i += 1
            variations += 1
        elif ch == ";":  # rest-of-line comment
            end = text.find("\n", i)
            i = n if end < 0 else end + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "{};()":
                j += 1
            token = text[i:j]
            i = j
            if token.startswith("$"):
                continue
            if token in _RESULT_TOKENS:
                break
            # Strip leading move numbers, possibly glued to the move ("1.e4").
            token = re.sub(r"^\d+\.+", "", token)
            if not token or token.isdigit() or token == "...":
                continue
            yield ("san", token)
    yield ("variations", variations)


def parse_pgn(text: str, start: Optional[Board] = None) -> ParsedGame:
    """Parse one PGN game: tag mapping plus resolved moves with their comments.

    Comments attach to the move they follow; a comment before the first move
    is dropped.  Variations are skipped and counted.
    """
    game = ParsedGame()
    pos = 0
    for m in _TAG_RE.finditer(text):
        # Tags must all precede the movetext; stop at the first non-tag content.
        between = text[pos : m.start()]
        if between.strip():
            break
        game.tags[m.group(1)] = m.group(2).replace('\\"', '"').replace("\\\\", "\\")
        pos = m.end()
    movetext = text[pos:]

    board = start if start is not None else Board.initial()
    if "FEN" in game.tags and start is None:
        from sentichess.board import parse_fen

        board = parse_fen(game.tags["FEN"])

    for item, payload in _split_movetext(movetext):
        if item == "variations":
            game.variations_skipped = payload
        elif item == "comment":
            if game.moves:
                prev = game.moves[-1]
                joined = payload if prev.comment is None else f"{prev.comment} {payload}"
                game.moves[-1] = PgnMove(prev.move, prev.san, joined)
        else:
            move = san_to_move(board, payload, index=len(game.moves))
            game.moves.append(PgnMove(move, payload))
            board = apply_move(board, move)
    return game


def game_to_pgn(tags: dict, moves, start: Optional[Board] = None) -> str:
    """Render a move sequence as a single PGN game with the given tags."""
    lines = [f'[{key} "{value}"]' for key, value in tags.items()]
    board = start if start is not None else Board.initial()
    tokens = []
    for move in moves:
        if board.side_to_move == WHITE:
            tokens.append(f"{board.fullmove_number}.")
        tokens.append(move_to_san(board, move))
        board = apply_move(board, move)
    result = tags.get("Result", "*")
    tokens.append(result)
    body, line = [], ""
    for token in tokens:
        if line and len(line) + 1 + len(token) > 80:
            body.append(line)
            line = token
        else:
            line = f"{line} {token}".strip()
    if line:
        body.append(line)
    return "\n".join(lines) + "\n\n" + "\n".join(body) + "\n"
