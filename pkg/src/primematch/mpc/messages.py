"""Wire formats for the comparison protocols.

Every message is one type byte followed by fixed-width fields: scalars
and commitments are 32 bytes, ciphertexts 64. Vectors carry an explicit
little-endian count and variable-size proof blobs get a 4-byte length
prefix, so a decoder never trusts a length implied elsewhere. Decoding
checks the buffer is consumed exactly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from ..algebra import Ciphertext, Commitment, GroupElement, Scalar
from ..errors import ProtocolAbort
from ..zkp import (
    BitProof,
    CiphertextZeroProof,
    ComEqCiphertextProof,
    ComEqProof,
    OneOfManyProof,
)
from .channel import ChannelClosed

MAX_VEC = 4096


class Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.off = 0

    def take(self, k: int) -> bytes:
        if self.off + k > len(self.buf):
            raise ValueError("message truncated")
        piece = self.buf[self.off : self.off + k]
        self.off += k
        return piece

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def count(self) -> int:
        k = self.u16()
        if k > MAX_VEC:
            raise ValueError("vector too long")
        return k

    def scalar(self) -> Scalar:
        return Scalar.from_bytes(self.take(32))

    def scalars(self) -> list[Scalar]:
        return [self.scalar() for _ in range(self.count())]

    def commitment(self) -> Commitment:
        return Commitment.decode(self.take(32))

    def commitments(self) -> list[Commitment]:
        return [self.commitment() for _ in range(self.count())]

    def element(self) -> GroupElement:
        return GroupElement.decode(self.take(32))

    def ciphertext(self) -> Ciphertext:
        return Ciphertext.decode(self.take(64))

    def ciphertexts(self) -> list[Ciphertext]:
        return [self.ciphertext() for _ in range(self.count())]

    def blob(self) -> bytes:
        k = struct.unpack("<I", self.take(4))[0]
        return self.take(k)

    def done(self) -> None:
        if self.off != len(self.buf):
            raise ValueError("trailing bytes")


def _count(k: int) -> bytes:
    if k > MAX_VEC:
        raise ValueError("vector too long")
    return struct.pack("<H", k)


def pack_scalars(xs: list[Scalar]) -> bytes:
    return _count(len(xs)) + b"".join(x.to_bytes() for x in xs)


def pack_commitments(cs: list[Commitment]) -> bytes:
    return _count(len(cs)) + b"".join(c.encode() for c in cs)


def pack_ciphertexts(cs: list[Ciphertext]) -> bytes:
    return _count(len(cs)) + b"".join(c.encode() for c in cs)


def pack_blob(data: bytes) -> bytes:
    return struct.pack("<I", len(data)) + data


@dataclass
class Abort:
    TYPE = 255
    reason: str

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + self.reason.encode()


@dataclass
class Register:
    TYPE = 1
    commitment: Commitment

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + self.commitment.encode()

    @classmethod
    def decode(cls, r: Reader) -> "Register":
        return cls(r.commitment())


@dataclass
class Counterparty:
    TYPE = 2
    commitment: Commitment

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + self.commitment.encode()

    @classmethod
    def decode(cls, r: Reader) -> "Counterparty":
        return cls(r.commitment())


@dataclass
class CoinCommit:
    TYPE = 3
    digest: bytes

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + self.digest

    @classmethod
    def decode(cls, r: Reader) -> "CoinCommit":
        return cls(r.take(32))


@dataclass
class CoinSeed:
    TYPE = 4
    seed: bytes

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + self.seed

    @classmethod
    def decode(cls, r: Reader) -> "CoinSeed":
        return cls(r.take(32))


@dataclass
class CoinOpen:
    TYPE = 5
    seed: bytes
    salt: bytes

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + self.seed + self.salt

    @classmethod
    def decode(cls, r: Reader) -> "CoinOpen":
        return cls(r.take(32), r.take(32))


@dataclass
class ShareBundle:
    """One party's bit sharing: the receiver's halves in the clear with
    their openings, commitments to both halves, and the proofs tying the
    committed bits to the registered value."""

    TYPE = 6
    halves: list[Scalar]
    openings: list[Scalar]
    commits0: list[Commitment]
    commits1: list[Commitment]
    sum_proof: ComEqProof
    bit_proofs: list[BitProof]

    def encode(self) -> bytes:
        parts = [
            bytes([self.TYPE]),
            pack_scalars(self.halves),
            pack_scalars(self.openings),
            pack_commitments(self.commits0),
            pack_commitments(self.commits1),
            self.sum_proof.encode(),
            _count(len(self.bit_proofs)),
        ]
        parts.extend(pack_blob(p.encode()) for p in self.bit_proofs)
        return b"".join(parts)

    @classmethod
    def decode(cls, r: Reader, params) -> "ShareBundle":
        halves = r.scalars()
        openings = r.scalars()
        commits0 = r.commitments()
        commits1 = r.commitments()
        sum_proof = ComEqProof.decode(r.take(64))
        proofs = [BitProof.decode(r.blob(), params) for _ in range(r.count())]
        return cls(halves, openings, commits0, commits1, sum_proof, proofs)


@dataclass
class SharePackage:
    """A client's additive shares of both comparison vectors, matching
    randomness shares, and its commitment-side pass over the other
    client's halves."""

    TYPE = 7
    d0: list[Scalar]
    d1: list[Scalar]
    s0: list[Scalar]
    s1: list[Scalar]
    other0: list[Commitment]
    other1: list[Commitment]

    def encode(self) -> bytes:
        return b"".join(
            [
                bytes([self.TYPE]),
                pack_scalars(self.d0),
                pack_scalars(self.d1),
                pack_scalars(self.s0),
                pack_scalars(self.s1),
                pack_commitments(self.other0),
                pack_commitments(self.other1),
            ]
        )

    @classmethod
    def decode(cls, r: Reader) -> "SharePackage":
        return cls(
            r.scalars(), r.scalars(), r.scalars(), r.scalars(),
            r.commitments(), r.commitments(),
        )


@dataclass
class Result:
    TYPE = 8
    win: bool
    proof: OneOfManyProof | None

    def encode(self) -> bytes:
        head = bytes([self.TYPE, 1 if self.win else 0])
        if self.win:
            return head + pack_blob(self.proof.encode())
        return head

    @classmethod
    def decode(cls, r: Reader) -> "Result":
        win = r.u8()
        if win not in (0, 1):
            raise ValueError("bad result flag")
        proof = OneOfManyProof.decode(r.blob()) if win else None
        return cls(bool(win), proof)


@dataclass
class Reveal:
    """Open a fresh commitment to the same value as a registered one.

    The registered opening stays private; the proof carries the link."""

    TYPE = 9
    value: int
    fresh: Scalar
    commitment: Commitment
    proof: ComEqProof

    def encode(self) -> bytes:
        return (
            bytes([self.TYPE])
            + struct.pack("<Q", self.value)
            + self.fresh.to_bytes()
            + self.commitment.encode()
            + self.proof.encode()
        )

    @classmethod
    def decode(cls, r: Reader) -> "Reveal":
        return cls(r.u64(), r.scalar(), r.commitment(), ComEqProof.decode(r.take(64)))


@dataclass
class MinForward(Reveal):
    TYPE = 10


@dataclass
class ShareHalves:
    TYPE = 11
    halves: list[Scalar]

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + pack_scalars(self.halves)

    @classmethod
    def decode(cls, r: Reader) -> "ShareHalves":
        return cls(r.scalars())


@dataclass
class ShareVectors:
    TYPE = 12
    d0: list[Scalar]
    d1: list[Scalar]

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + pack_scalars(self.d0) + pack_scalars(self.d1)

    @classmethod
    def decode(cls, r: Reader) -> "ShareVectors":
        return cls(r.scalars(), r.scalars())


@dataclass
class PlainResult:
    TYPE = 13
    win: bool

    def encode(self) -> bytes:
        return bytes([self.TYPE, 1 if self.win else 0])

    @classmethod
    def decode(cls, r: Reader) -> "PlainResult":
        flag = r.u8()
        if flag not in (0, 1):
            raise ValueError("bad result flag")
        return cls(bool(flag))


@dataclass
class PlainReveal:
    TYPE = 14
    value: int

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + struct.pack("<Q", self.value)

    @classmethod
    def decode(cls, r: Reader) -> "PlainReveal":
        return cls(r.u64())


@dataclass
class PlainForward(PlainReveal):
    TYPE = 15


@dataclass
class KeyholderSetup:
    """Public key, value commitment, per-bit encryptions, and the proofs
    that the encryptions carry bits recombining to the committed value."""

    TYPE = 16
    pk: GroupElement
    commitment: Commitment
    bits: list[Ciphertext]
    sum_proof: ComEqCiphertextProof
    bit_proofs: list[BitProof]

    def encode(self) -> bytes:
        parts = [
            bytes([self.TYPE]),
            self.pk.encode(),
            self.commitment.encode(),
            pack_ciphertexts(self.bits),
            self.sum_proof.encode(),
            _count(len(self.bit_proofs)),
        ]
        parts.extend(pack_blob(p.encode()) for p in self.bit_proofs)
        return b"".join(parts)

    @classmethod
    def decode(cls, r: Reader) -> "KeyholderSetup":
        from ..algebra import CiphertextCommitter

        pk = r.element()
        commitment = r.commitment()
        bits = r.ciphertexts()
        sum_proof = ComEqCiphertextProof.decode(r.take(192))
        scheme = CiphertextCommitter(pk)
        proofs = [BitProof.decode(r.blob(), scheme) for _ in range(r.count())]
        return cls(pk, commitment, bits, sum_proof, proofs)


@dataclass
class ComparisonReply:
    TYPE = 17
    d0: list[Ciphertext]
    d1: list[Ciphertext]

    def encode(self) -> bytes:
        return bytes([self.TYPE]) + pack_ciphertexts(self.d0) + pack_ciphertexts(self.d1)

    @classmethod
    def decode(cls, r: Reader) -> "ComparisonReply":
        return cls(r.ciphertexts(), r.ciphertexts())


@dataclass
class Outcome:
    TYPE = 18
    u: int
    proof: CiphertextZeroProof
    reveal: Reveal | None

    def encode(self) -> bytes:
        head = bytes([self.TYPE, self.u]) + pack_blob(self.proof.encode())
        if self.reveal is not None:
            return head + b"\x01" + self.reveal.encode()[1:]
        return head + b"\x00"

    @classmethod
    def decode(cls, r: Reader) -> "Outcome":
        u = r.u8()
        if u not in (0, 1):
            raise ValueError("bad outcome index")
        proof = CiphertextZeroProof.decode(r.blob())
        flag = r.u8()
        if flag not in (0, 1):
            raise ValueError("bad reveal flag")
        reveal = Reveal.decode(r) if flag else None
        return cls(u, proof, reveal)


def expect(channel, msg_cls, peer: str, **decode_kw):
    """Receive and decode one message, or abort with the peer's name."""
    try:
        data = channel.recv()
    except ChannelClosed as exc:
        raise ProtocolAbort("connection lost", detail=str(exc)) from None
    if not data:
        raise ProtocolAbort("empty message", culprit=peer)
    if data[0] == Abort.TYPE:
        reason = data[1:].decode("utf-8", "replace")
        raise ProtocolAbort("aborted by peer", detail=reason)
    if data[0] != msg_cls.TYPE:
        raise ProtocolAbort(
            "unexpected message",
            culprit=peer,
            detail=f"wanted {msg_cls.__name__}, got type {data[0]}",
        )
    r = Reader(data[1:])
    try:
        msg = msg_cls.decode(r, **decode_kw)
        r.done()
    except ValueError as exc:
        raise ProtocolAbort("malformed message", culprit=peer, detail=str(exc)) from None
    return msg


def notify_abort(channels, reason: str) -> None:
    """Best-effort abort notice so nobody blocks on a dead protocol."""
    for ch in channels:
        try:
            ch.send(Abort(reason).encode())
        except Exception:
            pass


def proof_context(session: bytes, label: bytes, *indices: int) -> bytes:
    """Domain separator binding a proof to one statement of one run."""
    return session + b"/" + label + bytes(indices)
