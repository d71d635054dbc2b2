"""
Deterministic random streams with named substreams.

Each pipeline stage gets its own stream from (seed, label), and each chunk of
chunked work gets its own generator from (seed, label, chunk_index). The
bit generator is Philox-4x64-10, a counter-based generator, keyed by a
SHA-256 digest, so a stream never depends on how work was scheduled.
"""

import hashlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

SEED_LIMIT = 2**64


@dataclass(frozen=True)
class RngSeed:
    """Seed plus a slash-separated stream label, e.g. "root/det0"."""

    seed: int
    stream_label: str = "root"

    def __post_init__(self):
        seed = int(self.seed)
        if not 0 <= seed < SEED_LIMIT:
            raise ValueError(f"seed must be in [0, 2**64), got {self.seed}")
        if not self.stream_label:
            raise ValueError("stream_label must be non-empty")
        object.__setattr__(self, "seed", seed)

    def child(self, label: str) -> "RngSeed":
        """Derive the substream for a named stage."""
        if not label or "/" in label:
            raise ValueError(f"invalid stream label {label!r}")
        return RngSeed(self.seed, f"{self.stream_label}/{label}")

    def key(self, chunk_index: Optional[int] = None) -> int:
        """128-bit Philox key for this stream (and chunk)."""
        chunk = "" if chunk_index is None else str(int(chunk_index))
        digest = hashlib.sha256(f"{self.seed}:{self.stream_label}:{chunk}".encode("utf-8")).digest()
        return int.from_bytes(digest[:16], byteorder="little")

    def generator(self, chunk_index: Optional[int] = None) -> np.random.Generator:
        """Fresh generator positioned at counter zero."""
        return np.random.Generator(np.random.Philox(key=self.key(chunk_index)))
