"""Deterministic randomness for proof generation.

Every proving operation takes a caller-supplied seed so transcripts are
reproducible.  Nonce reuse across different statements would leak witnesses,
so the stream key mixes the seed with a per-use domain and the statement
being proven; an internal block counter then yields as many values as one
proof needs.
"""

from __future__ import annotations

import hashlib

__all__ = ["DeterministicRng"]


class DeterministicRng:
    """SHA-256 counter-mode byte stream keyed by (domain, seed, context)."""

    def __init__(self, seed: bytes, domain: bytes = b"", context: bytes = b"") -> None:
        h = hashlib.sha256()
        for part in (domain, seed, context):
            h.update(len(part).to_bytes(8, "big"))
            h.update(part)
        self._key = h.digest()
        self._counter = 0

    def take(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            block = hashlib.sha256(
                self._key + self._counter.to_bytes(8, "big")
            ).digest()
            self._counter += 1
            out.extend(block)
        return bytes(out[:n])

    def scalar(self, q: int) -> int:
        """Uniform-enough integer in [0, q): oversample 16 bytes then reduce."""
        width = (q.bit_length() + 7) // 8 + 16
        return int.from_bytes(self.take(width), "big") % q

    def nonzero_scalar(self, q: int) -> int:
        while True:
            x = self.scalar(q)
            if x != 0:
                return x
