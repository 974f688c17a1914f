"""Transport tests: frame codec fuzz, envelope sequencing, relay
transparency and routing failures, secure channel tamper/replay cases,
and the length-only view the relay gets of encrypted traffic."""

import collections
import os
import socket
import threading

import pytest

from primematch.errors import ProtocolAbort
from primematch.mpc.channel import ChannelClosed, pipe
from primematch.net import (
    ENVELOPE,
    HELLO,
    MAX_FRAME,
    METRICS,
    METRICS_REQ,
    Envelope,
    FrameError,
    Node,
    Relay,
    SequenceChecker,
    decode_frame,
    encode_frame,
    establish_secure,
    read_frame,
    write_frame,
)
from primematch.rand import RandomSource


@pytest.fixture
def relay():
    r = Relay(capture=True)
    yield r
    r.stop()


def make_node(relay, name, timeout=5.0):
    return Node(name, relay.address, timeout=timeout)


# ---------------------------------------------------------------- frames


@pytest.mark.parametrize("kind", [HELLO, ENVELOPE, METRICS_REQ, METRICS])
@pytest.mark.parametrize("size", [0, 1, 57, 4096])
def test_frame_roundtrip(kind, size):
    payload = os.urandom(size)
    assert decode_frame(encode_frame(kind, payload)) == (kind, payload)


def test_frame_truncation_rejected():
    frame = encode_frame(ENVELOPE, b"payload bytes")
    for cut in range(len(frame)):
        with pytest.raises(FrameError):
            decode_frame(frame[:cut])


def test_frame_bad_version_rejected():
    frame = bytearray(encode_frame(ENVELOPE, b"x"))
    frame[4] ^= 0xFF
    with pytest.raises(FrameError):
        decode_frame(bytes(frame))


def test_frame_oversize_rejected():
    with pytest.raises(FrameError):
        encode_frame(ENVELOPE, b"\x00" * MAX_FRAME)


def test_frame_fuzz_no_crash():
    rng = RandomSource.from_seed(b"frame-fuzz")
    for _ in range(500):
        blob = rng.read(1 + rng.read(1)[0] % 64)
        try:
            kind, payload = decode_frame(blob)
        except FrameError:
            continue
        assert encode_frame(kind, payload) == blob


# -------------------------------------------------------------- envelope


def test_envelope_roundtrip():
    env = Envelope(
        session=bytes(range(16)),
        auction=bytes(16),
        sender="client-0",
        recipient="server",
        seq=7,
        payload=b"\x01\x02\x03",
    )
    assert Envelope.decode(env.encode()) == env


def test_envelope_rejects_garbage():
    with pytest.raises(ValueError):
        Envelope.decode(b"\x00" * 10)
    env = Envelope(bytes(16), bytes(16), "a", "b", 1, b"")
    blob = bytearray(env.encode())
    blob[32] = 200  # sender length now runs past the buffer
    with pytest.raises(ValueError):
        Envelope.decode(bytes(blob))


def test_sequence_checker_monotone():
    chk = SequenceChecker()
    sid = bytes(16)

    def env(sender, seq, session=sid):
        return Envelope(session, bytes(16), sender, "me", seq, b"")

    assert chk.admit(env("a", 1))
    assert chk.admit(env("a", 2))
    assert not chk.admit(env("a", 2))
    assert not chk.admit(env("a", 1))
    assert chk.admit(env("a", 10))
    # other senders and sessions track independently
    assert chk.admit(env("b", 1))
    assert chk.admit(env("a", 1, session=bytes([9]) * 16))


# ----------------------------------------------------------------- relay


def test_relay_delivers_both_directions(relay):
    a = make_node(relay, "alice")
    b = make_node(relay, "bob")
    sid = bytes(range(16))
    ca, cb = a.channel("bob", sid), b.channel("alice", sid)
    ca.send(b"to bob")
    assert cb.recv() == b"to bob"
    cb.send(b"to alice")
    assert ca.recv() == b"to alice"
    a.close()
    b.close()


def test_relay_transparency_random_payloads(relay):
    a = make_node(relay, "alice")
    b = make_node(relay, "bob")
    sid = bytes(16)
    ca, cb = a.channel("bob", sid), b.channel("alice", sid)
    rng = RandomSource.from_seed(b"transparency")
    sent = [rng.read(1 + rng.read(1)[0] % 96) for _ in range(10_000)]
    errors = []

    def pump():
        try:
            for payload in sent:
                ca.send(payload)
        except Exception as exc:
            errors.append(exc)

    t = threading.Thread(target=pump, daemon=True)
    t.start()
    got = [cb.recv() for _ in sent]
    t.join()
    assert not errors
    assert got == sent
    # the relay forwarded the exact frame bytes it received
    assert len(relay.captured) == len(sent)
    for (_, recipient, frame), payload in zip(relay.captured, sent):
        assert recipient == "bob"
        kind, body = decode_frame(frame)
        assert kind == ENVELOPE
        assert Envelope.decode(body).payload == payload
    a.close()
    b.close()


def test_unknown_recipient_routed_error(relay):
    a = make_node(relay, "alice")
    ch = a.channel("nobody", bytes(16))
    ch.send(b"hello?")
    with pytest.raises(ChannelClosed, match="no such peer"):
        ch.recv()
    a.close()


def test_disconnected_recipient_routed_error(relay):
    a = make_node(relay, "alice")
    b = make_node(relay, "bob")
    sid = bytes(16)
    ca = a.channel("bob", sid)
    ca.send(b"ping")
    assert b.channel("alice", sid).recv() == b"ping"
    b.close()
    # give the relay a moment to reap the connection
    deadline = 50
    while deadline:
        ca.send(b"ping again")
        try:
            ca.recv()
        except ChannelClosed:
            break
        deadline -= 1
    assert deadline, "routed failure never surfaced"
    a.close()


def test_duplicate_name_rejected(relay):
    a = make_node(relay, "alice")
    imposter = make_node(relay, "alice", timeout=5.0)
    ch = imposter.channel("alice", bytes(16))
    with pytest.raises(ChannelClosed):
        ch.recv()
    a.close()
    imposter.close()


def test_replayed_envelope_detected(relay):
    b = make_node(relay, "bob")
    sid = bytes(16)
    cb = b.channel("mallory", sid)
    # hand-rolled peer that delivers the same sequence number twice,
    # standing in for a relay that replays an old message
    sock = socket.create_connection(relay.address, timeout=5.0)
    write_frame(sock, HELLO, b"mallory")
    env = Envelope(sid, bytes(16), "mallory", "bob", 1, b"stale").encode()
    write_frame(sock, ENVELOPE, env)
    assert cb.recv() == b"stale"
    write_frame(sock, ENVELOPE, env)
    with pytest.raises(ProtocolAbort) as info:
        cb.recv()
    assert info.value.check == "replayed envelope"
    assert info.value.culprit == "mallory"
    sock.close()
    b.close()


def test_metrics_endpoint(relay):
    a = make_node(relay, "alice")
    b = make_node(relay, "bob")
    a.channel("bob", bytes(16)).send(b"x")
    assert b.channel("alice", bytes(16)).recv() == b"x"
    sock = socket.create_connection(relay.address, timeout=5.0)
    write_frame(sock, HELLO, b"prober")
    write_frame(sock, METRICS_REQ, b"")
    kind, payload = read_frame(sock)
    assert kind == METRICS
    text = payload.decode()
    assert "frames_forwarded 1" in text
    assert "bytes_forwarded" in text
    sock.close()
    a.close()
    b.close()


def test_dropped_relay_aborts_not_hangs(relay):
    a = make_node(relay, "alice", timeout=30.0)
    ch = a.channel("bob", bytes(16))
    relay.stop()
    with pytest.raises(ChannelClosed):
        ch.recv()
    a.close()


def test_recv_timeout_is_closed_channel(relay):
    a = make_node(relay, "alice", timeout=0.2)
    with pytest.raises(ChannelClosed, match="timed out"):
        a.channel("bob", bytes(16)).recv()
    a.close()


# -------------------------------------------------------- secure channel


def run_handshake(left, right, psk_i=b"", psk_r=b""):
    out = {}
    errs = {}

    def side(tag, chan, initiator, psk):
        try:
            out[tag] = establish_secure(
                chan,
                initiator=initiator,
                rng=RandomSource.from_seed(b"hs", tag.encode()),
                psk=psk,
            )
        except BaseException as exc:
            errs[tag] = exc

    ti = threading.Thread(target=side, args=("i", left, True, psk_i), daemon=True)
    tr = threading.Thread(target=side, args=("r", right, False, psk_r), daemon=True)
    ti.start()
    tr.start()
    ti.join(timeout=30)
    tr.join(timeout=30)
    return out, errs


def test_secure_channel_roundtrip():
    left, right = pipe(timeout=5.0)
    out, errs = run_handshake(left, right)
    assert not errs
    out["i"].send(b"first")
    assert out["r"].recv() == b"first"
    out["r"].send(b"second")
    assert out["i"].recv() == b"second"
    # ciphertext on the wire differs from the plaintext
    out["i"].send(b"third")
    blob = right.recv()
    assert b"third" not in blob


class FlipOnce:
    """Channel wrapper that corrupts one byte of the nth message."""

    def __init__(self, inner, nth, offset=0):
        self.inner = inner
        self.nth = nth
        self.offset = offset
        self.count = 0

    def send(self, payload):
        if self.count == self.nth:
            payload = bytearray(payload)
            payload[self.offset % len(payload)] ^= 0x01
            payload = bytes(payload)
        self.count += 1
        self.inner.send(payload)

    def recv(self):
        return self.inner.recv()

    def close(self):
        self.inner.close()


@pytest.mark.parametrize("nth", [0, 1])
def test_handshake_tamper_aborts(nth):
    left, right = pipe(timeout=2.0)
    out, errs = run_handshake(FlipOnce(left, nth), right)
    aborts = [e for e in errs.values() if isinstance(e, ProtocolAbort)]
    assert aborts, f"no abort raised: {errs}"
    for exc in aborts:
        assert exc.check in {
            "handshake decode",
            "handshake degenerate key",
            "key confirmation",
        }
    assert "i" not in out or "r" not in out


def test_psk_mismatch_fails_confirmation():
    left, right = pipe(timeout=2.0)
    out, errs = run_handshake(left, right, psk_i=b"alpha", psk_r=b"beta")
    assert isinstance(errs.get("r"), ProtocolAbort)
    assert errs["r"].check == "key confirmation"


def test_payload_tamper_detected():
    left, right = pipe(timeout=5.0)
    out, errs = run_handshake(left, right)
    assert not errs
    out["i"].send(b"authentic")
    blob = bytearray(right.recv())  # intercept the ciphertext off the wire
    blob[3] ^= 0x80
    left.send(bytes(blob))  # deliver the corrupted copy instead
    with pytest.raises(ProtocolAbort) as info:
        out["r"].recv()
    assert info.value.check == "secure channel authentication"
    assert info.value.culprit == "relay"


def test_payload_replay_detected():
    left, right = pipe(timeout=5.0)
    out, errs = run_handshake(left, right)
    assert not errs
    out["i"].send(b"once only")
    blob = right.recv()  # intercept the ciphertext off the wire
    left.send(blob)  # pass the original along
    assert out["r"].recv() == b"once only"
    left.send(blob)  # replay the exact same ciphertext
    with pytest.raises(ProtocolAbort) as info:
        out["r"].recv()
    assert info.value.check == "secure channel authentication"


def test_relay_sees_only_lengths(relay):
    """Two conversations with different contents but the same message
    shape leave identical length traces and no plaintext at the relay."""

    secrets = [
        [b"order: GME buy 4000", b"ack spread nine", b"fill at min px"],
        [b"order: AMC sell 123", b"ack spread five", b"fill at max px"],
    ]
    traces = []
    leak_pool = set()
    for round_no, messages in enumerate(secrets):
        a = make_node(relay, f"alice{round_no}")
        b = make_node(relay, f"bob{round_no}")
        sid = bytes([round_no]) * 16
        peer = f"bob{round_no}", f"alice{round_no}"
        start = len(relay.captured)
        out, errs = run_handshake(
            a.channel(peer[0], sid), b.channel(peer[1], sid)
        )
        assert not errs
        for k, msg in enumerate(messages):
            side = out["i"] if k % 2 == 0 else out["r"]
            other = out["r"] if k % 2 == 0 else out["i"]
            side.send(msg)
            assert other.recv() == msg
        frames = [f for (_, _, f) in relay.captured[start:]]
        traces.append([len(f) for f in frames])
        leak_pool.update(frames)
        a.close()
        b.close()
    assert traces[0] == traces[1]
    for word in (b"GME", b"AMC", b"order", b"fill", b"ack"):
        assert all(word not in frame for frame in leak_pool)
    # the encrypted payloads themselves look flat: no byte dominates
    body = b"".join(
        Envelope.decode(decode_frame(f)[1]).payload for f in leak_pool
    )
    counts = collections.Counter(body)
    assert max(counts.values()) < len(body) * 0.05
