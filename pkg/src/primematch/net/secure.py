"""Authenticated encryption between two clients across the relay.

Unauthenticated ephemeral key agreement over the group, a key schedule
from the shared point, then per-direction AEAD with counter nonces and
an explicit key-confirmation exchange. The relay sees pseudorandom
blobs; flipping any handshake or payload byte fails authentication on
the receiving side. An optional pre-shared key is mixed into the
schedule for deployments that have one, making the handshake itself
unspoofable by the relay.
"""

from __future__ import annotations

import hashlib
import hmac
import struct

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305
from cryptography.hazmat.primitives.hashes import SHA256
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from ..algebra import GroupElement, base_exp, identity
from ..errors import ProtocolAbort
from ..rand import RandomSource

INFO_TAG = b"primematch-channel-v1"
RELAY = "relay"


class SecureChannel:
    def __init__(self, inner, send_key: bytes, recv_key: bytes):
        self._inner = inner
        self._send = ChaCha20Poly1305(send_key)
        self._recv = ChaCha20Poly1305(recv_key)
        self._send_ctr = 0
        self._recv_ctr = 0
        self._dead = False

    @staticmethod
    def _nonce(ctr: int) -> bytes:
        return struct.pack("<Q", ctr) + b"\x00" * 4

    def send(self, payload: bytes) -> None:
        if self._dead:
            raise ProtocolAbort("secure channel terminated")
        self._inner.send(self._send.encrypt(self._nonce(self._send_ctr), payload, b""))
        self._send_ctr += 1

    def recv(self) -> bytes:
        if self._dead:
            raise ProtocolAbort("secure channel terminated")
        blob = self._inner.recv()
        try:
            plain = self._recv.decrypt(self._nonce(self._recv_ctr), blob, b"")
        except InvalidTag:
            self._dead = True
            raise ProtocolAbort("secure channel authentication", culprit=RELAY) from None
        self._recv_ctr += 1
        return plain


def establish_secure(
    channel, *, initiator: bool, rng: RandomSource, psk: bytes = b""
) -> SecureChannel:
    eph = rng.nonzero_scalar()
    mine = base_exp(eph).encode()
    if initiator:
        channel.send(mine)
        theirs = channel.recv()
    else:
        theirs = channel.recv()
        channel.send(mine)
    try:
        their_point = GroupElement.decode(theirs)
    except ValueError:
        raise ProtocolAbort("handshake decode", culprit=RELAY) from None
    if their_point == identity():
        raise ProtocolAbort("handshake degenerate key", culprit=RELAY)

    shared = (their_point ** eph).encode()
    pub_i, pub_r = (mine, theirs) if initiator else (theirs, mine)
    okm = HKDF(
        algorithm=SHA256(),
        length=96,
        salt=hashlib.sha256(psk).digest() if psk else None,
        info=INFO_TAG + pub_i + pub_r,
    ).derive(shared)
    key_ir, key_ri, key_conf = okm[:32], okm[32:64], okm[64:]

    def tag(label: bytes) -> bytes:
        return hmac.new(key_conf, label + pub_i + pub_r, hashlib.sha256).digest()

    if initiator:
        channel.send(tag(b"initiator"))
        echoed = channel.recv()
        if not hmac.compare_digest(echoed, tag(b"responder")):
            raise ProtocolAbort("key confirmation", culprit=RELAY)
        return SecureChannel(channel, key_ir, key_ri)
    echoed = channel.recv()
    if not hmac.compare_digest(echoed, tag(b"initiator")):
        raise ProtocolAbort("key confirmation", culprit=RELAY)
    channel.send(tag(b"responder"))
    return SecureChannel(channel, key_ri, key_ir)
