"""Commentary pipeline and evaluator training for the sentichess engine."""

from sentichess_pipeline.cleaning import clean_commentary
from sentichess_pipeline.dataset import BuildStats, SentiChessRecord, build_sentichess
from sentichess_pipeline.textmodel import (
    TextClassifier,
    TextConfig,
    classify_quality,
    label_sentiment,
    train_quality,
    train_sentiment,
)
from sentichess_pipeline.tensorize import tensorize
from sentichess_pipeline.train import TrainingConfig, train_eval

__version__ = "0.1.0"

__all__ = [
    "BuildStats",
    "SentiChessRecord",
    "TextClassifier",
    "TextConfig",
    "TrainingConfig",
    "build_sentichess",
    "classify_quality",
    "clean_commentary",
    "label_sentiment",
    "tensorize",
    "train_eval",
    "train_quality",
    "train_sentiment",
    "__version__",
]
