"""Move-evaluation CNN: SMW1 weight container and forward-pass inference.

Architecture over an 8x8x26 move tensor: 5x5 conv (same padding, elu),
3x3 conv (same padding, elu), flatten row-major with channel fastest,
dense 500 (elu), dense 200 (elu), dense 2, softmax.  No pooling anywhere,
so the spatial size stays 8x8; dropout exists only at training time.
Output index 0 is the probability the move is good for the mover, index 1
that it is bad.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SMW1_MAGIC = b"SMW1"
DTYPE_FLOAT32 = 0

REQUIRED_TENSORS = (
    "conv1.weight",
    "conv1.bias",
    "conv2.weight",
    "conv2.bias",
    "fc1.weight",
    "fc1.bias",
    "fc2.weight",
    "fc2.bias",
    "out.weight",
    "out.bias",
)

IN_CHANNELS = 26
FC1_SIZE = 500
FC2_SIZE = 200
NUM_CLASSES = 2
DEFAULT_F1 = 64
DEFAULT_F2 = 128


class WeightFormatError(ValueError):
    """Base for SMW1 container problems."""


class BadMagic(WeightFormatError):
    pass


class UnknownDtype(WeightFormatError):
    pass


class MissingTensor(WeightFormatError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"missing tensor {name!r}")


class DimMismatch(WeightFormatError):
    def __init__(self, name: str, expected, found):
        self.name = name
        self.expected = tuple(expected)
        self.found = tuple(found)
        super().__init__(f"tensor {name!r}: expected dims {self.expected}, found {self.found}")


class TruncatedFile(WeightFormatError):
    pass


class NonFiniteActivation(ArithmeticError):
    """Inference produced inf/nan, which signals corrupt weights."""


class EvalOutput(NamedTuple):
    good: float
    bad: float


@dataclass(frozen=True)
class NetworkWeights:
    """All tensors of the evaluation net; immutable once loaded.

    Kernels are (kh, kw, in, out); dense weights are (in, out) with y = xW + b.
    """

    conv1_kernel: np.ndarray
    conv1_bias: np.ndarray
    conv2_kernel: np.ndarray
    conv2_bias: np.ndarray
    fc1_weight: np.ndarray
    fc1_bias: np.ndarray
    fc2_weight: np.ndarray
    fc2_bias: np.ndarray
    out_weight: np.ndarray
    out_bias: np.ndarray

    @property
    def filters1(self) -> int:
        return self.conv1_kernel.shape[3]

    @property
    def filters2(self) -> int:
        return self.conv2_kernel.shape[3]


def elu(x):
    """Exponential linear unit with alpha=1: x for x >= 0, exp(x)-1 below."""
    return np.where(np.asarray(x) >= 0, x, np.expm1(np.minimum(x, 0.0)))


def softmax(logits: np.ndarray) -> np.ndarray:
    """Exp-normalize with max subtraction for stability."""
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def _check_tensors(tensors: dict) -> NetworkWeights:
    for name in REQUIRED_TENSORS:
        if name not in tensors:
            raise MissingTensor(name)
    c1 = tensors["conv1.weight"]
    if c1.ndim != 4 or c1.shape[0] != 5 or c1.shape[1] != 5 or c1.shape[2] != IN_CHANNELS:
        raise DimMismatch("conv1.weight", (5, 5, IN_CHANNELS, -1), c1.shape)
    f1 = c1.shape[3]
    c2 = tensors["conv2.weight"]
    if c2.ndim != 4 or c2.shape[:3] != (3, 3, f1):
        raise DimMismatch("conv2.weight", (3, 3, f1, -1), c2.shape)
    f2 = c2.shape[3]
    expected = {
        "conv1.bias": (f1,),
        "conv2.bias": (f2,),
        "fc1.weight": (64 * f2, FC1_SIZE),
        "fc1.bias": (FC1_SIZE,),
        "fc2.weight": (FC1_SIZE, FC2_SIZE),
        "fc2.bias": (FC2_SIZE,),
        "out.weight": (FC2_SIZE, NUM_CLASSES),
        "out.bias": (NUM_CLASSES,),
    }
    for name, shape in expected.items():
        if tensors[name].shape != shape:
            raise DimMismatch(name, shape, tensors[name].shape)
    for name in REQUIRED_TENSORS:
        if not np.isfinite(tensors[name]).all():
            raise WeightFormatError(f"tensor {name!r} contains non-finite values")
        tensors[name].flags.writeable = False
    return NetworkWeights(
        conv1_kernel=tensors["conv1.weight"],
        conv1_bias=tensors["conv1.bias"],
        conv2_kernel=tensors["conv2.weight"],
        conv2_bias=tensors["conv2.bias"],
        fc1_weight=tensors["fc1.weight"],
        fc1_bias=tensors["fc1.bias"],
        fc2_weight=tensors["fc2.weight"],
        fc2_bias=tensors["fc2.bias"],
        out_weight=tensors["out.weight"],
        out_bias=tensors["out.bias"],
    )


def load_weights(data: bytes) -> NetworkWeights:
    """Parse an SMW1 byte blob into validated, immutable weights."""
    if len(data) < 8:
        raise TruncatedFile("file shorter than header")
    if data[:4] != SMW1_MAGIC:
        raise BadMagic(f"bad magic {data[:4]!r}")
    (count,) = struct.unpack_from("<I", data, 4)
    offset = 8
    tensors = {}
    for _ in range(count):
        if offset + 2 > len(data):
            raise TruncatedFile("truncated tensor name length")
        (name_len,) = struct.unpack_from("<H", data, offset)
        offset += 2
        if offset + name_len + 2 > len(data):
            raise TruncatedFile("truncated tensor header")
        name = data[offset : offset + name_len].decode("utf-8")
        offset += name_len
        dtype = data[offset]
        ndim = data[offset + 1]
        offset += 2
        if dtype != DTYPE_FLOAT32:
            raise UnknownDtype(f"tensor {name!r} has dtype {dtype}")
        if offset + 4 * ndim > len(data):
            raise TruncatedFile(f"truncated dims for {name!r}")
        dims = struct.unpack_from(f"<{ndim}I", data, offset)
        offset += 4 * ndim
        n_elems = 1
        for d in dims:
            n_elems *= d
        end = offset + 4 * n_elems
        if end > len(data):
            raise TruncatedFile(f"truncated data for {name!r}")
        arr = np.frombuffer(data[offset:end], dtype="<f4").reshape(dims).copy()
        offset = end
        tensors[name] = arr
    return _check_tensors(tensors)


def load_weights_file(path) -> NetworkWeights:
    with open(path, "rb") as f:
        return load_weights(f.read())


def save_weights(weights: NetworkWeights) -> bytes:
    """Serialize weights to the SMW1 byte layout (exact inverse of load_weights)."""
    named = {
        "conv1.weight": weights.conv1_kernel,
        "conv1.bias": weights.conv1_bias,
        "conv2.weight": weights.conv2_kernel,
        "conv2.bias": weights.conv2_bias,
        "fc1.weight": weights.fc1_weight,
        "fc1.bias": weights.fc1_bias,
        "fc2.weight": weights.fc2_weight,
        "fc2.bias": weights.fc2_bias,
        "out.weight": weights.out_weight,
        "out.bias": weights.out_bias,
    }
    parts = [SMW1_MAGIC, struct.pack("<I", len(named))]
    for name, arr in named.items():
        encoded = name.encode("utf-8")
        parts.append(struct.pack("<H", len(encoded)))
        parts.append(encoded)
        parts.append(struct.pack("<BB", DTYPE_FLOAT32, arr.ndim))
        parts.append(struct.pack(f"<{arr.ndim}I", *arr.shape))
        parts.append(np.ascontiguousarray(arr, dtype="<f4").tobytes())
    return b"".join(parts)


def save_weights_file(weights: NetworkWeights, path) -> None:
    with open(path, "wb") as f:
        f.write(save_weights(weights))


def random_weights(f1: int = DEFAULT_F1, f2: int = DEFAULT_F2, seed: int = 0) -> NetworkWeights:
    """Small random weights, mostly for fixtures and smoke tests."""
    rng = np.random.default_rng(seed)

    def t(*shape, scale):
        return (rng.standard_normal(shape) * scale).astype(np.float32)

    tensors = {
        "conv1.weight": t(5, 5, IN_CHANNELS, f1, scale=0.05),
        "conv1.bias": t(f1, scale=0.05),
        "conv2.weight": t(3, 3, f1, f2, scale=0.05),
        "conv2.bias": t(f2, scale=0.05),
        "fc1.weight": t(64 * f2, FC1_SIZE, scale=0.02),
        "fc1.bias": t(FC1_SIZE, scale=0.02),
        "fc2.weight": t(FC1_SIZE, FC2_SIZE, scale=0.02),
        "fc2.bias": t(FC2_SIZE, scale=0.02),
        "out.weight": t(FC2_SIZE, NUM_CLASSES, scale=0.1),
        "out.bias": t(NUM_CLASSES, scale=0.1),
    }
    return _check_tensors(tensors)


def _conv_same(x: np.ndarray, kernel: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Stride-1 cross-correlation with zero 'same' padding; x is (8, 8, C)."""
    kh, kw, _, n_out = kernel.shape
    ph, pw = kh // 2, kw // 2
    padded = np.zeros((8 + 2 * ph, 8 + 2 * pw, x.shape[2]), dtype=np.float32)
    padded[ph : ph + 8, pw : pw + 8, :] = x
    out = np.tile(bias, (8, 8, 1)).astype(np.float32)
    for i in range(kh):
        for j in range(kw):
            window = padded[i : i + 8, j : j + 8, :]
            out += window @ kernel[i, j]
    return out


def forward(weights: NetworkWeights, move_tensor: np.ndarray) -> EvalOutput:
    """Run the evaluation net over one 8x8x26 move tensor."""
    x = np.asarray(move_tensor, dtype=np.float32)
    if x.shape != (8, 8, IN_CHANNELS):
        raise ValueError(f"expected input shape (8, 8, 26), got {x.shape}")
    with np.errstate(over="ignore", invalid="ignore"):  # non-finites are caught below
        x = elu(_conv_same(x, weights.conv1_kernel, weights.conv1_bias))
        x = elu(_conv_same(x, weights.conv2_kernel, weights.conv2_bias))
        x = x.reshape(-1)  # (row, col, channel), channel fastest
        x = elu(x @ weights.fc1_weight + weights.fc1_bias)
        x = elu(x @ weights.fc2_weight + weights.fc2_bias)
        logits = x @ weights.out_weight + weights.out_bias
    if not np.isfinite(logits).all():
        raise NonFiniteActivation("non-finite logits; weights are corrupt")
    probs = softmax(logits)
    return EvalOutput(good=float(probs[0]), bad=float(probs[1]))
