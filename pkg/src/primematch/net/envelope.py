"""Routed messages: who is talking to whom, in which session.

The relay reads only the header fields to route; the payload stays
opaque to it. Receivers enforce strictly increasing sequence numbers
per (session, sender), which is what makes a replayed envelope
detectable no matter who replays it.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

ID_LEN = 16
MAX_NAME = 64


def _name(data: bytes) -> bytes:
    if len(data) > MAX_NAME:
        raise ValueError("name too long")
    return bytes([len(data)]) + data


@dataclass
class Envelope:
    session: bytes
    auction: bytes
    sender: str
    recipient: str
    seq: int
    payload: bytes

    def encode(self) -> bytes:
        if len(self.session) != ID_LEN or len(self.auction) != ID_LEN:
            raise ValueError("ids must be 16 bytes")
        return b"".join(
            [
                self.session,
                self.auction,
                _name(self.sender.encode()),
                _name(self.recipient.encode()),
                struct.pack("<Q", self.seq),
                self.payload,
            ]
        )

    @classmethod
    def decode(cls, data: bytes) -> "Envelope":
        if len(data) < 2 * ID_LEN + 2 + 8:
            raise ValueError("envelope truncated")
        session = data[:ID_LEN]
        auction = data[ID_LEN : 2 * ID_LEN]
        off = 2 * ID_LEN
        names = []
        for _ in range(2):
            k = data[off]
            if k > MAX_NAME or off + 1 + k > len(data):
                raise ValueError("bad name field")
            names.append(data[off + 1 : off + 1 + k].decode())
            off += 1 + k
        if off + 8 > len(data):
            raise ValueError("envelope truncated")
        (seq,) = struct.unpack("<Q", data[off : off + 8])
        return cls(session, auction, names[0], names[1], seq, data[off + 8 :])


class SequenceChecker:
    """Reject any envelope whose number does not move forward."""

    def __init__(self):
        self._last: dict[tuple[bytes, str], int] = {}

    def admit(self, env: Envelope) -> bool:
        key = (env.session, env.sender)
        last = self._last.get(key, -1)
        if env.seq <= last:
            return False
        self._last[key] = env.seq
        return True
