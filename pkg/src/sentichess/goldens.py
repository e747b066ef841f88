"""Golden fixture files: frozen move tensors with expected evaluator outputs.

Text format, one case per line after the header:

    SMG1 <n_cases> <generator_seed> <weights_sha256_hex>
    <tensor_dump_hex> <good> <bad>

The tensor hex encodes a full dump (header plus float32 payload); good/bad
are decimal with at least nine significant digits.  The sha256 ties the
fixture to the exact weight bytes it was computed with.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from sentichess.encoding import dump_bytes, read_tensor_dump

GOLDENS_MAGIC = "SMG1"


@dataclass
class GoldenCase:
    tensor: np.ndarray
    good: float
    bad: float


@dataclass
class GoldenFixture:
    seed: int
    weights_sha256: str
    cases: list


def weights_checksum(weight_bytes: bytes) -> str:
    return hashlib.sha256(weight_bytes).hexdigest()


def format_goldens(fixture: GoldenFixture) -> str:
    lines = [f"{GOLDENS_MAGIC} {len(fixture.cases)} {fixture.seed} {fixture.weights_sha256}"]
    for case in fixture.cases:
        lines.append(f"{dump_bytes(case.tensor).hex()} {case.good:.10e} {case.bad:.10e}")
    return "\n".join(lines) + "\n"


def parse_goldens(text: str) -> GoldenFixture:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty goldens file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != GOLDENS_MAGIC:
        raise ValueError(f"bad goldens header: {lines[0]!r}")
    n_cases, seed, sha = int(header[1]), int(header[2]), header[3]
    if len(lines) - 1 != n_cases:
        raise ValueError(f"goldens file declares {n_cases} cases, has {len(lines) - 1}")
    cases = []
    for line in lines[1:]:
        hex_dump, good_text, bad_text = line.split()
        tensor = read_tensor_dump(bytes.fromhex(hex_dump))
        cases.append(GoldenCase(tensor=tensor, good=float(good_text), bad=float(bad_text)))
    return GoldenFixture(seed=seed, weights_sha256=sha, cases=cases)


def load_goldens_file(path) -> GoldenFixture:
    with open(path, "r", encoding="utf-8") as f:
        return parse_goldens(f.read())
