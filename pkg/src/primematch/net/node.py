"""Client end of the star: one socket to the relay, many logical channels.

A node owns a single connection and demultiplexes inbound envelopes by
(peer, session) into queues. Each `channel()` call returns an object
with the same send/recv surface as the in-memory pipes, so the protocol
code is oblivious to whether it is running over TCP or a test harness.
Sequence numbers are strictly increasing per direction within a
session; a duplicate or rewound envelope is flagged and surfaces as a
replay abort on the next receive.
"""

from __future__ import annotations

import queue
import threading

from .envelope import ID_LEN, Envelope, SequenceChecker
from .frames import ENVELOPE, HELLO, ROUTE_ERROR, FrameError, read_frame, write_frame
from .relay import decode_route_error
from ..errors import ProtocolAbort
from ..mpc.channel import ChannelClosed

import socket

_REPLAY = object()


class SessionListener:
    """Receives (sender, payload) pairs from peers without a channel."""

    def __init__(self, node: "Node", q: queue.Queue):
        self._node = node
        self._q = q

    def accept(self, timeout: float | None = None) -> tuple[str, bytes]:
        try:
            item = self._q.get(
                timeout=self._node.timeout if timeout is None else timeout
            )
        except queue.Empty:
            raise ChannelClosed("accept timed out") from None
        if isinstance(item, ChannelClosed):
            self._q.put(item)
            raise item
        return item


class NodeChannel:
    """send/recv view of one (peer, session) conversation."""

    def __init__(self, node: "Node", peer: str, session: bytes):
        self._node = node
        self.peer = peer
        self.session = session
        self._seq_out = 0
        self._queue: queue.Queue = node._queue_for(peer, session)

    def send(self, payload: bytes) -> None:
        self._seq_out += 1
        self._node._send_envelope(self.peer, self.session, self._seq_out, payload)

    def recv(self) -> bytes:
        try:
            item = self._queue.get(timeout=self._node.timeout)
        except queue.Empty:
            raise ChannelClosed("receive timed out") from None
        if item is _REPLAY:
            raise ProtocolAbort("replayed envelope", culprit=self.peer)
        if isinstance(item, ChannelClosed):
            self._queue.put(item)
            raise item
        return item

    def close(self) -> None:
        pass


class Node:
    def __init__(self, name: str, address, auction: bytes = b"\x00" * ID_LEN, timeout: float = 30.0):
        if len(auction) != ID_LEN:
            raise ValueError("auction id must be 16 bytes")
        self.name = name
        self.auction = auction
        self.timeout = timeout
        self._sock = socket.create_connection(address, timeout=timeout + 5)
        self._send_lock = threading.Lock()
        self._mu = threading.Lock()
        self._queues: dict[tuple[str, bytes], queue.Queue] = {}
        self._wildcards: dict[bytes, queue.Queue] = {}
        self._checker = SequenceChecker()
        self._closed = False
        write_frame(self._sock, HELLO, name.encode(), lock=self._send_lock)
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _queue_for(self, peer: str, session: bytes) -> queue.Queue:
        with self._mu:
            key = (peer, session)
            q = self._queues.get(key)
            if q is None:
                q = queue.Queue()
                self._queues[key] = q
            return q

    def channel(self, peer: str, session: bytes) -> NodeChannel:
        if len(session) != ID_LEN:
            raise ValueError("session id must be 16 bytes")
        return NodeChannel(self, peer, session)

    def listen(self, session: bytes) -> "SessionListener":
        """Catch-all for a session: receives (sender, payload) from any
        peer that has no dedicated channel open yet. Used by the server
        to accept join messages from clients it does not know about."""
        with self._mu:
            q = self._wildcards.get(session)
            if q is None:
                q = queue.Queue()
                self._wildcards[session] = q
        return SessionListener(self, q)

    def _send_envelope(self, peer: str, session: bytes, seq: int, payload: bytes) -> None:
        env = Envelope(
            session=session,
            auction=self.auction,
            sender=self.name,
            recipient=peer,
            seq=seq,
            payload=payload,
        )
        try:
            write_frame(self._sock, ENVELOPE, env.encode(), lock=self._send_lock)
        except OSError:
            raise ChannelClosed("relay connection lost") from None

    def _read_loop(self) -> None:
        try:
            while True:
                kind, payload = read_frame(self._sock)
                if kind == ENVELOPE:
                    try:
                        env = Envelope.decode(payload)
                    except ValueError:
                        continue
                    with self._mu:
                        dedicated = self._queues.get((env.sender, env.session))
                        wildcard = self._wildcards.get(env.session)
                    if dedicated is None and wildcard is not None:
                        if self._checker.admit(env):
                            wildcard.put((env.sender, env.payload))
                        continue
                    q = dedicated if dedicated is not None else self._queue_for(
                        env.sender, env.session
                    )
                    if not self._checker.admit(env):
                        q.put(_REPLAY)
                        continue
                    q.put(env.payload)
                elif kind == ROUTE_ERROR:
                    try:
                        recipient, session, reason = decode_route_error(payload)
                    except (IndexError, UnicodeDecodeError):
                        continue
                    q = self._queue_for(recipient, session)
                    q.put(ChannelClosed(f"relay: {reason}"))
        except (ChannelClosed, FrameError, OSError):
            self._fail_all(ChannelClosed("relay connection lost"))

    def _fail_all(self, exc: ChannelClosed) -> None:
        with self._mu:
            self._closed = True
            queues = list(self._queues.values()) + list(self._wildcards.values())
        for q in queues:
            q.put(exc)

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass
