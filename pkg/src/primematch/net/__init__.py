"""Star-topology transport: framing, envelopes, relay, and client nodes."""

from .envelope import ID_LEN, Envelope, SequenceChecker
from .frames import (
    ENVELOPE,
    HELLO,
    MAX_FRAME,
    METRICS,
    METRICS_REQ,
    ROUTE_ERROR,
    VERSION,
    FrameError,
    decode_frame,
    encode_frame,
    read_frame,
    write_frame,
)
from .node import Node, NodeChannel
from .relay import Relay, decode_route_error, encode_route_error
from .secure import SecureChannel, establish_secure

__all__ = [
    "ID_LEN",
    "Envelope",
    "SequenceChecker",
    "VERSION",
    "MAX_FRAME",
    "HELLO",
    "ENVELOPE",
    "ROUTE_ERROR",
    "METRICS_REQ",
    "METRICS",
    "FrameError",
    "encode_frame",
    "decode_frame",
    "read_frame",
    "write_frame",
    "Node",
    "NodeChannel",
    "Relay",
    "encode_route_error",
    "decode_route_error",
    "SecureChannel",
    "establish_secure",
]
