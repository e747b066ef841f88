import json
import os

import pytest

from sentichess_pipeline.textmodel import TextConfig, train_quality, train_sentiment

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
QUALITY_FIXTURE = os.path.join(FIXTURES, "quality_fixture.jsonl")
SENTIMENT_FIXTURE = os.path.join(FIXTURES, "sentiment_fixture.jsonl")
CORPUS_FILES = (
    os.path.join(FIXTURES, "corpus", "games_a.pgn"),
    os.path.join(FIXTURES, "corpus", "games_b.pgn"),
)

# Frozen training seeds for the committed fixtures.
QUALITY_SEED = 1
SENTIMENT_SEED = 0


def load_examples(path):
    with open(path, "r", encoding="utf-8") as f:
        return [
            (json.loads(line)["text"], json.loads(line)["label"])
            for line in f
            if line.strip()
        ]


def corpus_texts():
    out = []
    for path in CORPUS_FILES:
        with open(path, "r", encoding="utf-8") as f:
            out.append((os.path.basename(path), f.read()))
    return out


@pytest.fixture(scope="session")
def quality_model():
    model, metrics = train_quality(
        load_examples(QUALITY_FIXTURE),
        TextConfig(seed=QUALITY_SEED, holdout_fraction=0.2),
    )
    return model, metrics


@pytest.fixture(scope="session")
def sentiment_model():
    model, metrics = train_sentiment(
        load_examples(SENTIMENT_FIXTURE), TextConfig(seed=SENTIMENT_SEED)
    )
    return model, metrics
