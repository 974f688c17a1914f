"""Blocking byte channels.

A channel is anything with ``send(bytes)`` and ``recv() -> bytes``. The
in-memory pair below backs the protocol tests and the local simulator;
the network layer provides a socket-backed object with the same two
methods.
"""

import queue

_CLOSE = object()


class ChannelClosed(Exception):
    """The peer went away (or never answered) before the protocol finished."""


class InMemoryChannel:
    def __init__(self, inbox: queue.Queue, outbox: queue.Queue, timeout: float = 30.0):
        self._in = inbox
        self._out = outbox
        self._timeout = timeout

    def send(self, payload: bytes) -> None:
        self._out.put(bytes(payload))

    def recv(self) -> bytes:
        try:
            item = self._in.get(timeout=self._timeout)
        except queue.Empty:
            raise ChannelClosed("receive timed out") from None
        if item is _CLOSE:
            self._in.put(_CLOSE)  # stay closed for any later reader
            raise ChannelClosed("channel closed")
        return item

    def close(self) -> None:
        self._out.put(_CLOSE)


def pipe(timeout: float = 30.0) -> tuple[InMemoryChannel, InMemoryChannel]:
    """Two connected endpoints; what one sends the other receives."""
    a_to_b: queue.Queue = queue.Queue()
    b_to_a: queue.Queue = queue.Queue()
    return (
        InMemoryChannel(b_to_a, a_to_b, timeout),
        InMemoryChannel(a_to_b, b_to_a, timeout),
    )
