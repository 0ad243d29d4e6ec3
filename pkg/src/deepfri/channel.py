"""Replayable verifier randomness.

Each draw hashes (seed, tag, counter) with BLAKE2b, so a transcript's
challenges are a pure function of its seed and the order of requests.
"""
import hashlib

from .field import GF


class Channel:
    def __init__(self, seed: int = 0, tag: str = ""):
        self.seed = int(seed) & (2**64 - 1)
        self.tag = tag
        self.counter = 0

    def _block(self) -> int:
        h = hashlib.blake2b(digest_size=16)
        h.update(self.seed.to_bytes(8, "little"))
        h.update(self.tag.encode())
        h.update(self.counter.to_bytes(8, "little"))
        self.counter += 1
        return int.from_bytes(h.digest(), "little")

    def bits(self, k: int) -> int:
        out, have = 0, 0
        while have < k:
            out |= self._block() << have
            have += 128
        return out & ((1 << k) - 1)

    def below(self, m: int) -> int:
        """Uniform integer in [0, m) by rejection."""
        if m <= 0:
            raise ValueError("empty range")
        k = max(1, (m - 1).bit_length())
        while True:
            v = self.bits(k)
            if v < m:
                return v

    def element(self, field: GF) -> int:
        return self.bits(field.n)

    def child(self, tag: str) -> "Channel":
        """Independent channel for a sub-protocol (domain-separated by tag)."""
        return Channel(self.seed, f"{self.tag}/{tag}")

    def __repr__(self):
        return f"Channel(seed={self.seed}, tag={self.tag!r}, counter={self.counter})"
