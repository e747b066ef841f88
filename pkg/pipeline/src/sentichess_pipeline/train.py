"""Training for the move-evaluation CNN.

The architecture mirrors the engine's inference contract exactly: 5x5 conv
(same padding, elu), 3x3 conv (same padding, elu), dropout 0.25, flatten in
(row, col, channel) order with channel fastest, dense 500 (elu), dense 200
(elu), dense 2.  Class index 0 is "good".  Training minimizes two-class
cross-entropy and is deterministic under a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn
from torch.nn import functional as F


class EmptyClass(ValueError):
    """Both classes are required to train the evaluator."""


class DivergedTraining(RuntimeError):
    """Loss went non-finite."""


@dataclass
class TrainingConfig:
    f1: int = 8
    f2: int = 8
    learning_rate: float = 1e-3
    batch_size: int = 64
    epochs: int = 20
    dropout: float = 0.25
    seed: int = 0
    validation_fraction: float = 0.1

    def __post_init__(self):
        if self.dropout != 0.25:
            raise ValueError("dropout is fixed at 0.25")
        if min(self.f1, self.f2, self.batch_size, self.epochs) < 1:
            raise ValueError("f1, f2, batch_size, epochs must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise ValueError("validation fraction must be in [0, 1)")


class MoveEvalNet(nn.Module):
    def __init__(self, f1: int, f2: int, dropout: float = 0.25):
        super().__init__()
        self.conv1 = nn.Conv2d(26, f1, kernel_size=5, padding=2)
        self.conv2 = nn.Conv2d(f1, f2, kernel_size=3, padding=1)
        self.drop = nn.Dropout(dropout)
        self.fc1 = nn.Linear(64 * f2, 500)
        self.fc2 = nn.Linear(500, 200)
        self.out = nn.Linear(200, 2)
        for layer in (self.conv1, self.conv2, self.fc1, self.fc2, self.out):
            nn.init.kaiming_normal_(layer.weight, nonlinearity="relu")
            nn.init.zeros_(layer.bias)

    def forward(self, x):
        # x: (batch, 26, 8, 8)
        x = F.elu(self.conv1(x))
        x = F.elu(self.conv2(x))
        x = self.drop(x)
        x = x.permute(0, 2, 3, 1).reshape(x.shape[0], -1)  # channel fastest
        x = F.elu(self.fc1(x))
        x = F.elu(self.fc2(x))
        return self.out(x)


@dataclass
class TrainedEval:
    model: MoveEvalNet
    config: TrainingConfig
    train_accuracy: float
    validation_accuracy: float

    def probabilities(self, tensors: np.ndarray) -> np.ndarray:
        """(N, 2) softmax outputs for (N, 8, 8, 26) inputs, dropout off."""
        self.model.eval()
        with torch.no_grad():
            x = torch.from_numpy(np.ascontiguousarray(tensors, dtype=np.float32))
            x = x.permute(0, 3, 1, 2)
            logits = self.model(x)
            return torch.softmax(logits.double(), dim=1).numpy()


def train_eval(tensors: np.ndarray, labels: np.ndarray, config: TrainingConfig) -> TrainedEval:
    """Fit the evaluator on (N, 8, 8, 26) tensors and (N, 2) one-hot labels."""
    if tensors.ndim != 4 or tensors.shape[1:] != (8, 8, 26):
        raise ValueError(f"expected (N, 8, 8, 26) tensors, got {tensors.shape}")
    targets = np.argmax(labels, axis=1) if labels.ndim == 2 else labels.astype(np.int64)
    n_good = int((targets == 0).sum())
    n_bad = int((targets == 1).sum())
    if n_good == 0 or n_bad == 0:
        raise EmptyClass(f"need both classes, got good={n_good} bad={n_bad}")

    torch.manual_seed(config.seed)
    torch.use_deterministic_algorithms(True)
    torch.set_num_threads(1)

    x_all = torch.from_numpy(np.ascontiguousarray(tensors, dtype=np.float32)).permute(0, 3, 1, 2)
    y_all = torch.from_numpy(targets.astype(np.int64))

    generator = torch.Generator().manual_seed(config.seed)
    order = torch.randperm(len(x_all), generator=generator)
    n_val = int(round(config.validation_fraction * len(x_all)))
    val_idx = order[:n_val]
    train_idx = order[n_val:]
    if len(train_idx) == 0:
        raise ValueError("validation fraction leaves no training data")

    model = MoveEvalNet(config.f1, config.f2, config.dropout)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()

    model.train()
    for _ in range(config.epochs):
        perm = train_idx[torch.randperm(len(train_idx), generator=generator)]
        for start in range(0, len(perm), config.batch_size):
            batch = perm[start : start + config.batch_size]
            optimizer.zero_grad()
            logits = model(x_all[batch])
            loss = loss_fn(logits, y_all[batch])
            if not torch.isfinite(loss):
                raise DivergedTraining(f"non-finite loss at lr={config.learning_rate}")
            loss.backward()
            optimizer.step()
    model.eval()

    def accuracy(indices) -> float:
        if len(indices) == 0:
            return float("nan")
        with torch.no_grad():
            pred = model(x_all[indices]).argmax(dim=1)
        return float((pred == y_all[indices]).float().mean())

    return TrainedEval(
        model=model,
        config=config,
        train_accuracy=accuracy(train_idx),
        validation_accuracy=accuracy(val_idx),
    )


def init_eval(config: TrainingConfig) -> TrainedEval:
    """Randomly initialized, untrained evaluator (for fixtures and goldens)."""
    torch.manual_seed(config.seed)
    torch.use_deterministic_algorithms(True)
    model = MoveEvalNet(config.f1, config.f2, config.dropout)
    model.eval()
    return TrainedEval(
        model=model, config=config, train_accuracy=float("nan"), validation_accuracy=float("nan")
    )
