"""Binary text classifiers for commentary: quality filtering and sentiment.

One bi-directional LSTM architecture serves both tasks.  Annotation glyphs
(!, !!, ?, ??, !?, ?!) are mapped to dedicated vocabulary tokens before
embedding so they survive tokenization and carry their own weights.  The
embedding layer is pluggable: the default is a small trainable embedding;
any provider object with a `dim` and `vectors(tokens)` can stand in for a
pretrained one.  Training and inference are deterministic under a fixed
seed, and saved artifacts are byte-stable.
"""

from __future__ import annotations

import io
import json
import re
import struct
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import torch
from torch import nn

ARTIFACT_MAGIC = b"SMC1"

QUALITY_LABELS = ("quality", "non-quality")
SENTIMENT_LABELS = ("good", "bad")

# Longest first so "!?" is not read as "!" then "?".
_GLYPH_TOKENS = {
    "!!": "<glyph_brilliant>",
    "??": "<glyph_blunder>",
    "!?": "<glyph_interesting>",
    "?!": "<glyph_dubious>",
    "!": "<glyph_excellent>",
    "?": "<glyph_mistake>",
}
_GLYPH_RE = re.compile(r"(\!\!|\?\?|\!\?|\?\!|\!|\?)")

PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"


class EmptyClass(ValueError):
    """Training set is missing one of the two classes."""


class InsufficientData(ValueError):
    """Too few training examples to fit anything meaningful."""


def tokenize(text: str) -> list:
    """Whitespace tokens, lowercased, with annotation glyphs as reserved tokens."""
    spaced = _GLYPH_RE.sub(r" \1 ", text)
    tokens = []
    for raw in spaced.split():
        mapped = _GLYPH_TOKENS.get(raw)
        tokens.append(mapped if mapped else raw.lower())
    return tokens


class TrainableEmbedding:
    """Default provider: embeddings are parameters learned with the model."""

    name = "trainable"

    def __init__(self, dim: int = 32):
        self.dim = dim


class HashEmbedding:
    """Deterministic fixed vectors derived from token hashes.

    A stand-in for pretrained vectors in offline tests: nothing is learned
    in the embedding, only downstream weights.
    """

    name = "hash"

    def __init__(self, dim: int = 32, seed: int = 0):
        self.dim = dim
        self.seed = seed

    def vectors(self, tokens) -> np.ndarray:
        out = np.zeros((len(tokens), self.dim), dtype=np.float32)
        for i, token in enumerate(tokens):
            h = abs(hash((self.seed, token))) % (2**32)
            rng = np.random.default_rng(h)
            out[i] = rng.standard_normal(self.dim).astype(np.float32) * 0.3
        return out


@dataclass
class TextConfig:
    embed_dim: int = 32
    hidden: int = 32
    epochs: int = 80
    learning_rate: float = 5e-3
    seed: int = 0
    holdout_fraction: float = 0.0
    embedding: object = field(default_factory=TrainableEmbedding)

    def __post_init__(self):
        if isinstance(self.embedding, TrainableEmbedding):
            self.embedding.dim = self.embed_dim


class _BiLstmNet(nn.Module):
    def __init__(self, vocab_size: Optional[int], embed_dim: int, hidden: int):
        super().__init__()
        self.embed = (
            nn.Embedding(vocab_size, embed_dim, padding_idx=0) if vocab_size else None
        )
        self.lstm = nn.LSTM(embed_dim, hidden, batch_first=True, bidirectional=True)
        self.head = nn.Linear(2 * hidden, 2)

    def forward(self, x, lengths):
        if self.embed is not None:
            x = self.embed(x)
        packed = nn.utils.rnn.pack_padded_sequence(
            x, lengths, batch_first=True, enforce_sorted=False
        )
        _, (hidden, _) = self.lstm(packed)
        final = torch.cat((hidden[0], hidden[1]), dim=1)
        return self.head(final)


class TextClassifier:
    """A trained binary classifier: tokenizer config, embeddings, LSTM, head."""

    def __init__(self, labels, vocab, config_meta, net, majority_label, majority_prob,
                 embedding_provider=None):
        self.labels = tuple(labels)
        self.vocab = vocab  # token -> id (empty when embeddings are external)
        self.config_meta = config_meta  # plain dict, JSON-safe
        self.net = net
        self.majority_label = majority_label
        self.majority_prob = majority_prob
        self.embedding_provider = embedding_provider
        self.net.eval()

    def _encode(self, tokens):
        if self.vocab:
            ids = [self.vocab.get(t, 1) for t in tokens]
            x = torch.tensor([ids], dtype=torch.long)
        else:
            x = torch.from_numpy(self.embedding_provider.vectors(tokens)[None, :, :])
        return x, torch.tensor([len(tokens)], dtype=torch.long)

    def predict(self, text: str):
        """(label, probability of that label); empty input falls back to the prior."""
        tokens = tokenize(text)
        if not tokens:
            return self.majority_label, self.majority_prob
        with torch.no_grad():
            x, lengths = self._encode(tokens)
            logits = self.net(x, lengths)[0]
            probs = torch.softmax(logits.double(), dim=0).numpy()
        idx = int(probs.argmax())
        return self.labels[idx], float(probs[idx])

    def prob_of(self, text: str, label: str) -> float:
        got, prob = self.predict(text)
        return prob if got == label else 1.0 - prob

    # -- artifact IO: JSON header + named float32 tensors, byte-stable --

    def save_bytes(self) -> bytes:
        header = {
            "labels": list(self.labels),
            "vocab": self.vocab,
            "config": self.config_meta,
            "majority_label": self.majority_label,
            "majority_prob": self.majority_prob,
        }
        header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
        buf = io.BytesIO()
        buf.write(ARTIFACT_MAGIC)
        buf.write(struct.pack("<I", len(header_bytes)))
        buf.write(header_bytes)
        state = self.net.state_dict()
        buf.write(struct.pack("<I", len(state)))
        for name in sorted(state):
            tensor = state[name].detach().cpu().numpy().astype("<f4")
            encoded = name.encode("utf-8")
            buf.write(struct.pack("<H", len(encoded)))
            buf.write(encoded)
            buf.write(struct.pack("<B", tensor.ndim))
            buf.write(struct.pack(f"<{tensor.ndim}I", *tensor.shape))
            buf.write(np.ascontiguousarray(tensor).tobytes())
        return buf.getvalue()

    def save(self, path) -> None:
        with open(path, "wb") as f:
            f.write(self.save_bytes())

    @classmethod
    def load_bytes(cls, data: bytes, embedding_provider=None) -> "TextClassifier":
        if data[:4] != ARTIFACT_MAGIC:
            raise ValueError("bad classifier artifact magic")
        (header_len,) = struct.unpack_from("<I", data, 4)
        header = json.loads(data[8 : 8 + header_len].decode("utf-8"))
        offset = 8 + header_len
        (count,) = struct.unpack_from("<I", data, offset)
        offset += 4
        state = {}
        for _ in range(count):
            (name_len,) = struct.unpack_from("<H", data, offset)
            offset += 2
            name = data[offset : offset + name_len].decode("utf-8")
            offset += name_len
            ndim = data[offset]
            offset += 1
            dims = struct.unpack_from(f"<{ndim}I", data, offset)
            offset += 4 * ndim
            n = int(np.prod(dims)) if dims else 1
            arr = np.frombuffer(data[offset : offset + 4 * n], dtype="<f4").reshape(dims)
            offset += 4 * n
            state[name] = torch.from_numpy(arr.copy())
        meta = header["config"]
        vocab = header["vocab"]
        net = _BiLstmNet(
            vocab_size=len(vocab) if vocab else None,
            embed_dim=meta["embed_dim"],
            hidden=meta["hidden"],
        )
        net.load_state_dict(state)
        if not vocab and embedding_provider is None:
            embedding_provider = HashEmbedding(meta["embed_dim"], meta.get("provider_seed", 0))
        return cls(
            labels=header["labels"],
            vocab=vocab,
            config_meta=meta,
            net=net,
            majority_label=header["majority_label"],
            majority_prob=header["majority_prob"],
            embedding_provider=embedding_provider,
        )

    @classmethod
    def load(cls, path, embedding_provider=None) -> "TextClassifier":
        with open(path, "rb") as f:
            return cls.load_bytes(f.read(), embedding_provider)


@dataclass
class TrainingMetrics:
    train_accuracy: float
    holdout_accuracy: Optional[float]
    examples: int


def _build_vocab(token_lists) -> dict:
    counts = {}
    for tokens in token_lists:
        for t in tokens:
            counts[t] = counts.get(t, 0) + 1
    ordered = sorted(counts, key=lambda t: (-counts[t], t))
    vocab = {PAD_TOKEN: 0, UNK_TOKEN: 1}
    for t in ordered:
        vocab[t] = len(vocab)
    return vocab


def train_text_classifier(examples, labels, config: TextConfig):
    """Fit the bi-LSTM on (text, label) pairs; returns (classifier, metrics).

    Deterministic for a given config: same seeds, same batch order, same
    artifact bytes.
    """
    labels = tuple(labels)
    if len(examples) < 10:
        raise InsufficientData(f"need at least 10 examples, got {len(examples)}")
    per_class = {label: 0 for label in labels}
    for _, label in examples:
        if label not in per_class:
            raise ValueError(f"unknown label {label!r}, expected one of {labels}")
        per_class[label] += 1
    if min(per_class.values()) == 0:
        missing = [l for l, n in per_class.items() if n == 0]
        raise EmptyClass(f"no examples for class {missing[0]!r}")
    if min(per_class.values()) < 2:
        raise EmptyClass("need at least 2 examples per class")
    counts = sorted(per_class.values())
    if counts[-1] >= 5 * counts[0]:
        warnings.warn(
            f"class imbalance {per_class}; training proceeds but accuracy may suffer",
            stacklevel=2,
        )

    torch.manual_seed(config.seed)
    torch.use_deterministic_algorithms(True)
    torch.set_num_threads(1)
    rng = np.random.default_rng(config.seed)

    token_lists = [tokenize(text) for text, _ in examples]
    targets = [labels.index(label) for _, label in examples]

    order = rng.permutation(len(examples))
    n_holdout = int(round(config.holdout_fraction * len(examples)))
    holdout_idx = list(order[:n_holdout])
    train_idx = list(order[n_holdout:])

    trainable = isinstance(config.embedding, TrainableEmbedding)
    if trainable:
        vocab = _build_vocab(token_lists[i] for i in train_idx)
        net = _BiLstmNet(len(vocab), config.embed_dim, config.hidden)

        def encode_batch(indices):
            seqs = [token_lists[i] or [UNK_TOKEN] for i in indices]
            lengths = torch.tensor([len(s) for s in seqs], dtype=torch.long)
            width = int(lengths.max())
            ids = torch.zeros((len(seqs), width), dtype=torch.long)
            for row, seq in enumerate(seqs):
                for col, token in enumerate(seq):
                    ids[row, col] = vocab.get(token, 1)
            return ids, lengths

    else:
        provider = config.embedding
        vocab = {}
        net = _BiLstmNet(None, provider.dim, config.hidden)

        def encode_batch(indices):
            seqs = [token_lists[i] or [UNK_TOKEN] for i in indices]
            lengths = torch.tensor([len(s) for s in seqs], dtype=torch.long)
            width = int(lengths.max())
            batch = np.zeros((len(seqs), width, provider.dim), dtype=np.float32)
            for row, seq in enumerate(seqs):
                batch[row, : len(seq)] = provider.vectors(seq)
            return torch.from_numpy(batch), lengths

    target_tensor = torch.tensor(targets, dtype=torch.long)
    optimizer = torch.optim.Adam(net.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()

    x_train, len_train = encode_batch(train_idx)
    y_train = target_tensor[train_idx]
    net.train()
    for _ in range(config.epochs):
        optimizer.zero_grad()
        logits = net(x_train, len_train)
        loss = loss_fn(logits, y_train)
        loss.backward()
        optimizer.step()
    net.eval()

    def accuracy(indices):
        if not indices:
            return None
        x, lengths = encode_batch(indices)
        with torch.no_grad():
            pred = net(x, lengths).argmax(dim=1)
        want = target_tensor[indices]
        return float((pred == want).float().mean())

    majority_idx = max(range(len(labels)), key=lambda i: per_class[labels[i]])
    meta = {
        "embed_dim": config.embed_dim if trainable else config.embedding.dim,
        "hidden": config.hidden,
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "seed": config.seed,
        "provider": getattr(config.embedding, "name", "trainable"),
        "provider_seed": getattr(config.embedding, "seed", 0),
    }
    classifier = TextClassifier(
        labels=labels,
        vocab=vocab,
        config_meta=meta,
        net=net,
        majority_label=labels[majority_idx],
        majority_prob=per_class[labels[majority_idx]] / len(examples),
        embedding_provider=None if trainable else config.embedding,
    )
    metrics = TrainingMetrics(
        train_accuracy=accuracy(train_idx),
        holdout_accuracy=accuracy(holdout_idx),
        examples=len(examples),
    )
    return classifier, metrics


# -- task-specific wrappers ------------------------------------------------


def train_quality(examples, config: Optional[TextConfig] = None):
    """Quality vs non-quality commentary classifier with a held-out report."""
    if config is None:
        config = TextConfig(holdout_fraction=0.2)
    return train_text_classifier(examples, QUALITY_LABELS, config)


def classify_quality(model: TextClassifier, text: str):
    """(label, probability).  Empty input is non-quality at the majority prior."""
    if not tokenize(text):
        return QUALITY_LABELS[1], model.majority_prob
    return model.predict(text)


def train_sentiment(examples, config: Optional[TextConfig] = None):
    if config is None:
        config = TextConfig()
    return train_text_classifier(examples, SENTIMENT_LABELS, config)


def label_sentiment(model: TextClassifier, text: str):
    return model.predict(text)
