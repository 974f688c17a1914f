"""Randomness sources.

Two kinds: the OS CSPRNG for real deployments, and a SHAKE-256 stream for
anything that must be reproducible (simulations, test fixtures, the
per-comparison randomness derivation). Seeded sources with the same seed
material produce identical byte streams on every platform.
"""

from __future__ import annotations

import hashlib
import secrets

from .algebra import Scalar


class XofReader:
    """Sequential reader over the SHAKE-256 output for a fixed input.

    hashlib has no incremental squeeze, but SHAKE outputs are prefix
    consistent, so re-digesting at a larger length and slicing is
    equivalent. The buffer grows geometrically to keep that cheap.
    """

    def __init__(self, data: bytes):
        self._h = hashlib.shake_256(data)
        self._buf = b""
        self._off = 0

    def read(self, n: int) -> bytes:
        need = self._off + n
        if need > len(self._buf):
            size = max(256, len(self._buf) * 2, need)
            self._buf = self._h.digest(size)
        out = self._buf[self._off : self._off + n]
        self._off += n
        return out


class RandomSource:
    """Uniform scalars and bytes from either the OS or a seeded stream."""

    def __init__(self, reader: XofReader | None = None):
        self._reader = reader

    @classmethod
    def system(cls) -> "RandomSource":
        return cls(None)

    @classmethod
    def from_seed(cls, tag: bytes, *parts: bytes) -> "RandomSource":
        material = tag
        for part in parts:
            material += len(part).to_bytes(4, "little") + part
        return cls(XofReader(material))

    @property
    def deterministic(self) -> bool:
        return self._reader is not None

    def read(self, n: int) -> bytes:
        if self._reader is None:
            return secrets.token_bytes(n)
        return self._reader.read(n)

    def scalar(self) -> Scalar:
        return Scalar.from_bytes_wide(self.read(64))

    def nonzero_scalar(self) -> Scalar:
        while True:
            s = self.scalar()
            if not s.is_zero():
                return s
