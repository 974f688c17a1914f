"""Fiat-Shamir transcript.

A 32-byte chaining state updated by SHAKE-256. Every absorption is labeled
and length-prefixed, so no two distinct absorption sequences collide, and
every challenge ratchets the state, so later challenges depend on earlier
ones. All proofs in this package derive their challenges from here; there
is no interactive mode.
"""

from __future__ import annotations

import hashlib

from ..algebra import Scalar


def _frame(label: bytes, payload: bytes) -> bytes:
    return (
        len(label).to_bytes(2, "little")
        + label
        + len(payload).to_bytes(4, "little")
        + payload
    )


class Transcript:
    def __init__(self, protocol: bytes, context: bytes = b""):
        self._state = hashlib.shake_256(
            b"primematch-transcript-v1" + _frame(protocol, context)
        ).digest(32)

    def absorb(self, label: bytes, payload: bytes) -> None:
        self._state = hashlib.shake_256(
            self._state + b"\x01" + _frame(label, payload)
        ).digest(32)

    def absorb_element(self, label: bytes, item) -> None:
        """Absorb anything with an encode() method."""
        self.absorb(label, item.encode())

    def absorb_elements(self, label: bytes, items) -> None:
        items = list(items)
        payload = b"".join(item.encode() for item in items)
        self.absorb(label, len(items).to_bytes(4, "little") + payload)

    def absorb_scalar(self, label: bytes, s: Scalar) -> None:
        self.absorb(label, s.to_bytes())

    def challenge(self, label: bytes) -> Scalar:
        out = hashlib.shake_256(
            self._state + b"\x02" + _frame(label, b"")
        ).digest(64)
        self._state = hashlib.shake_256(self._state + b"\x03" + label).digest(32)
        return Scalar.from_bytes_wide(out)
