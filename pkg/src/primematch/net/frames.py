"""Length-prefixed framing over a stream socket.

Layout: 4-byte little-endian length of the rest, then version byte,
kind byte, payload. The length cap bounds what a peer can make us
buffer; unknown versions are rejected before anything is parsed.
"""

import struct

from ..mpc.channel import ChannelClosed

VERSION = 1
MAX_FRAME = 1 << 20

HELLO = 1
ENVELOPE = 2
ROUTE_ERROR = 3
METRICS_REQ = 4
METRICS = 5


class FrameError(Exception):
    pass


def encode_frame(kind: int, payload: bytes) -> bytes:
    if len(payload) + 2 > MAX_FRAME:
        raise FrameError("frame too large")
    return struct.pack("<IBB", len(payload) + 2, VERSION, kind) + payload


def decode_frame(data: bytes) -> tuple[int, bytes]:
    """Inverse of encode_frame on a complete buffered frame."""
    if len(data) < 6:
        raise FrameError("frame truncated")
    length, version, kind = struct.unpack("<IBB", data[:6])
    if length > MAX_FRAME:
        raise FrameError("frame too large")
    if version != VERSION:
        raise FrameError(f"unsupported version {version}")
    if len(data) - 4 != length:
        raise FrameError("frame length mismatch")
    return kind, data[6:]


def read_exact(sock, k: int) -> bytes:
    chunks = []
    got = 0
    while got < k:
        piece = sock.recv(k - got)
        if not piece:
            raise ChannelClosed("connection closed")
        chunks.append(piece)
        got += len(piece)
    return b"".join(chunks)


def read_frame(sock) -> tuple[int, bytes]:
    head = read_exact(sock, 4)
    (length,) = struct.unpack("<I", head)
    if length > MAX_FRAME:
        raise FrameError("frame too large")
    if length < 2:
        raise FrameError("frame truncated")
    body = read_exact(sock, length)
    version, kind = body[0], body[1]
    if version != VERSION:
        raise FrameError(f"unsupported version {version}")
    return kind, body[2:]


def write_frame(sock, kind: int, payload: bytes, lock=None) -> None:
    frame = encode_frame(kind, payload)
    if lock is None:
        sock.sendall(frame)
        return
    with lock:
        sock.sendall(frame)
