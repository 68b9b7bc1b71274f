"""Deterministic, platform-independent randomness.

A ``SeededRng`` is a SHAKE-256 keystream. The key is
``SHA-256(b"modlat-rng/v1" || material)`` where ``material`` is the 8-byte
big-endian seed (or raw bytes). Block ``i`` of the stream is
``SHAKE-256(key || i as 8-byte big-endian)`` truncated to 4096 bytes.

Field elements are drawn as big-endian ``uint32`` words with rejection of
words ``>= 2**32 - (2**32 mod q)``, so the stream is unbiased and the
same bytes give the same matrices on every platform and numpy version.
"""
from __future__ import annotations

import hashlib

import numpy as np

_BLOCK = 4096
_DOMAIN = b"modlat-rng/v1"


def _material(seed: int | bytes) -> bytes:
    if isinstance(seed, (bytes, bytearray)):
        return bytes(seed)
    if seed < 0 or seed >= 1 << 64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed).to_bytes(8, "big")


class SeededRng:
    def __init__(self, seed: int | bytes):
        self._key = hashlib.sha256(_DOMAIN + _material(seed)).digest()
        self._block = 0
        self._buf = b""
        self._pos = 0

    @classmethod
    def from_parts(cls, *parts: bytes) -> "SeededRng":
        """Keystream keyed by a length-prefixed concatenation of byte strings."""
        h = hashlib.sha256()
        for p in parts:
            h.update(len(p).to_bytes(4, "big"))
            h.update(p)
        return cls(h.digest())

    def child(self, index: int) -> "SeededRng":
        """Independent stream for trial ``index``; does not advance this one."""
        return SeededRng(hashlib.sha256(self._key + int(index).to_bytes(8, "big")).digest())

    def bytes(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            if self._pos == len(self._buf):
                self._buf = hashlib.shake_256(self._key + self._block.to_bytes(8, "big")).digest(_BLOCK)
                self._block += 1
                self._pos = 0
            take = min(n - len(out), len(self._buf) - self._pos)
            out += self._buf[self._pos:self._pos + take]
            self._pos += take
        return bytes(out)

    def field_elements(self, count: int, q: int) -> np.ndarray:
        """``count`` independent uniform integers in ``[0, q)`` as int64."""
        if count == 0:
            return np.zeros(0, dtype=np.int64)
        limit = (1 << 32) - ((1 << 32) % q)
        parts = []
        have = 0
        while have < count:
            need = count - have
            # overdraw a little so a single pass usually suffices
            words = np.frombuffer(self.bytes(4 * (need + need // 8 + 4)), dtype=">u4").astype(np.int64)
            words = words[words < limit]
            parts.append(words[:need] % q)
            have += min(need, words.size)
        return np.concatenate(parts)

    def randbelow(self, k: int) -> int:
        if k <= 0:
            raise ValueError("randbelow needs a positive bound")
        return int(self.field_elements(1, k)[0]) if k < (1 << 31) else self._big_below(k)

    def _big_below(self, k: int) -> int:
        nbytes = (k.bit_length() + 7) // 8 + 8
        while True:
            x = int.from_bytes(self.bytes(nbytes), "big")
            lim = (1 << (8 * nbytes)) - ((1 << (8 * nbytes)) % k)
            if x < lim:
                return x % k

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``."""
        return lo + self.randbelow(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def bit(self) -> int:
        return self.bytes(1)[0] & 1

    def random_bits(self, nbits: int) -> bytes:
        """``nbits`` uniform bits, MSB-first, padding bits of the last byte zero."""
        nbytes = (nbits + 7) // 8
        raw = bytearray(self.bytes(nbytes))
        if nbits % 8:
            raw[-1] &= (0xFF << (8 - nbits % 8)) & 0xFF
        return bytes(raw)
