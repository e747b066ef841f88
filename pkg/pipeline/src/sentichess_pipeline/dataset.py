"""SentiChess dataset emission: commented games in, labeled move records out.

Each commented move that survives cleaning and the quality filter becomes
one line-record with the positions before and after the move (recomputed by
replaying the game with the engine's rules), both move notations, the
cleaned comment, and the sentiment label with its probability.  Unparseable
games are skipped and counted, never fatal.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass
from typing import Optional

from sentichess.board import Board, apply_move, emit_fen
from sentichess.pgn import parse_pgn

from sentichess_pipeline.cleaning import clean_commentary
from sentichess_pipeline.textmodel import TextClassifier, QUALITY_LABELS, label_sentiment

log = logging.getLogger(__name__)

RECORD_FIELDS = (
    "fen_before",
    "fen_after",
    "uci",
    "san",
    "comment",
    "quality_prob",
    "sentiment",
    "sentiment_prob",
    "source",
)


@dataclass(frozen=True)
class SentiChessRecord:
    fen_before: str
    fen_after: str
    uci: str
    san: str
    comment: str
    quality_prob: float
    sentiment: str
    sentiment_prob: float
    source: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "SentiChessRecord":
        doc = json.loads(line)
        return cls(**{name: doc[name] for name in RECORD_FIELDS})


@dataclass
class BuildStats:
    games_seen: int = 0
    games_skipped: int = 0
    comments_seen: int = 0
    records_emitted: int = 0


def split_games(text: str) -> list:
    """Split a multi-game PGN file on '[Event' tag lines that start a new game."""
    chunks = []
    current = []
    seen_movetext = False
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("[Event") and seen_movetext:
            chunks.append("\n".join(current))
            current = []
            seen_movetext = False
        current.append(line)
        if stripped and not stripped.startswith("["):
            seen_movetext = True
    if any(line.strip() for line in current):
        chunks.append("\n".join(current))
    return chunks


def build_sentichess(
    corpus_texts,
    quality_model: TextClassifier,
    sentiment_model: TextClassifier,
    tau: float = 0.8,
    stats: Optional[BuildStats] = None,
):
    """Yield SentiChessRecords from (source_name, pgn_text) pairs, in order.

    tau is the minimum probability of the quality class; records below it
    are dropped.  Games that fail to parse are skipped and counted.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    if stats is None:
        stats = BuildStats()
    for source, text in corpus_texts:
        for game_text in split_games(text):
            stats.games_seen += 1
            try:
                game = parse_pgn(game_text)
            except Exception as exc:  # malformed SAN, comments, tags...
                stats.games_skipped += 1
                log.warning("skipping unparseable game in %s: %s", source, exc)
                continue
            board = Board.initial()
            for ply in game.moves:
                after = apply_move(board, ply.move)
                if ply.comment is not None:
                    stats.comments_seen += 1
                    record = _record_for(
                        board, after, ply, source, quality_model, sentiment_model, tau
                    )
                    if record is not None:
                        stats.records_emitted += 1
                        yield record
                board = after


def _record_for(board, after, ply, source, quality_model, sentiment_model, tau):
    cleaned = clean_commentary(ply.comment)
    if cleaned is None:
        return None
    quality_prob = quality_model.prob_of(cleaned, QUALITY_LABELS[0])
    if quality_prob < tau:
        return None
    sentiment, sentiment_prob = label_sentiment(sentiment_model, cleaned)
    return SentiChessRecord(
        fen_before=emit_fen(board),
        fen_after=emit_fen(after),
        uci=ply.move.uci(),
        san=ply.san,
        comment=cleaned,
        quality_prob=quality_prob,
        sentiment=sentiment,
        sentiment_prob=sentiment_prob,
        source=source,
    )


def write_dataset(records, path) -> int:
    """Write records as one JSON object per line; returns the line count."""
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(record.to_json() + "\n")
            count += 1
    return count


def read_dataset(path) -> list:
    with open(path, "r", encoding="utf-8") as f:
        return [SentiChessRecord.from_json(line) for line in f if line.strip()]
