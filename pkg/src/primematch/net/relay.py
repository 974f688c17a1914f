"""Star-topology message relay.

Every participant connects here, says hello once with its name, and
from then on sends framed envelopes addressed by recipient name. The
relay reads just enough of each envelope to route it and forwards the
frame bytes untouched; payload contents are never parsed. Undeliverable
envelopes come back to the sender as a routing error so a missing peer
surfaces as an abort instead of a silent hang.
"""

from __future__ import annotations

import logging
import socket
import threading

from .envelope import Envelope
from .frames import (
    ENVELOPE,
    HELLO,
    METRICS,
    METRICS_REQ,
    ROUTE_ERROR,
    FrameError,
    encode_frame,
    read_frame,
    write_frame,
)
from ..mpc.channel import ChannelClosed

log = logging.getLogger(__name__)


def encode_route_error(recipient: str, session: bytes, reason: str) -> bytes:
    name = recipient.encode()
    why = reason.encode()
    return bytes([len(name)]) + name + session + bytes([len(why)]) + why


def decode_route_error(payload: bytes) -> tuple[str, bytes, str]:
    k = payload[0]
    name = payload[1 : 1 + k].decode()
    session = payload[1 + k : 17 + k]
    j = payload[17 + k]
    reason = payload[18 + k : 18 + k + j].decode()
    return name, session, reason


class Relay:
    """Accepts connections and shuttles envelopes between named peers."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0, capture: bool = False):
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((host, port))
        self._sock.listen(32)
        self.address = self._sock.getsockname()
        self._peers: dict[str, socket.socket] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._mu = threading.Lock()
        self._running = True
        self._frames = 0
        self._bytes = 0
        # Test hook: when set, keeps (sender, recipient, frame bytes)
        # tuples so transparency can be checked end to end.
        self.captured: list[tuple[str, str, bytes]] | None = [] if capture else None
        self._threads: list[threading.Thread] = []
        self._acceptor = threading.Thread(target=self._accept_loop, daemon=True)
        self._acceptor.start()

    def _accept_loop(self) -> None:
        while self._running:
            try:
                conn, _ = self._sock.accept()
            except OSError:
                return
            t = threading.Thread(target=self._serve, args=(conn,), daemon=True)
            t.start()
            self._threads.append(t)

    def _serve(self, conn: socket.socket) -> None:
        name = None
        try:
            kind, payload = read_frame(conn)
            if kind != HELLO:
                conn.close()
                return
            name = payload.decode()
            with self._mu:
                if name in self._peers:
                    conn.sendall(encode_frame(ROUTE_ERROR, encode_route_error(name, b"\x00" * 16, "name taken")))
                    conn.close()
                    return
                self._peers[name] = conn
                self._locks[name] = threading.Lock()
            log.info("relay: %s connected", name)
            while self._running:
                kind, payload = read_frame(conn)
                if kind == METRICS_REQ:
                    self._reply(name, encode_frame(METRICS, self.metrics().encode()))
                    continue
                if kind != ENVELOPE:
                    continue
                self._route(name, payload)
        except (ChannelClosed, FrameError, OSError, UnicodeDecodeError):
            pass
        finally:
            if name is not None:
                with self._mu:
                    if self._peers.get(name) is conn:
                        del self._peers[name]
                        del self._locks[name]
                log.info("relay: %s disconnected", name)
            try:
                conn.close()
            except OSError:
                pass

    def _route(self, sender: str, payload: bytes) -> None:
        try:
            env = Envelope.decode(payload)
        except ValueError:
            self._reply(sender, encode_frame(ROUTE_ERROR, encode_route_error("?", b"\x00" * 16, "bad envelope")))
            return
        frame = encode_frame(ENVELOPE, payload)
        with self._mu:
            self._frames += 1
            self._bytes += len(frame)
        log.info("relay: %s -> %s (%d bytes)", sender, env.recipient, len(payload))
        if self.captured is not None:
            self.captured.append((sender, env.recipient, frame))
        if not self._reply(env.recipient, frame):
            self._reply(
                sender,
                encode_frame(
                    ROUTE_ERROR,
                    encode_route_error(env.recipient, env.session, "no such peer"),
                ),
            )

    def _reply(self, name: str, frame: bytes) -> bool:
        with self._mu:
            conn = self._peers.get(name)
            lock = self._locks.get(name)
        if conn is None:
            return False
        try:
            with lock:
                conn.sendall(frame)
            return True
        except OSError:
            return False

    def metrics(self) -> str:
        with self._mu:
            peers = len(self._peers)
            frames = self._frames
            nbytes = self._bytes
        return f"peers {peers}\nframes_forwarded {frames}\nbytes_forwarded {nbytes}\n"

    def stop(self) -> None:
        self._running = False
        try:
            self._sock.close()
        except OSError:
            pass
        with self._mu:
            conns = list(self._peers.values())
            self._peers.clear()
            self._locks.clear()
        for conn in conns:
            try:
                conn.close()
            except OSError:
                pass
