"""Exponent ElGamal: Enc(m, r) = (g**r, pk**r * g**m).

Messages live in the exponent, which keeps the scheme additively
homomorphic: multiplying ciphertexts adds plaintexts, raising to a scalar
power multiplies the plaintext by it. Decryption in general would need a
discrete log, but the protocols here only ever ask one question of a
ciphertext: is the plaintext zero? That test is cheap (c2 == c1**sk).

A ciphertext under a key whose secret nobody involved knows misbehaves
gracefully: is_zero still works for the key holder only. Fresh randomness
must come from the caller; this module does no RNG of its own.
"""

from __future__ import annotations

from dataclasses import dataclass

from .group import ENCODED_LEN, GroupElement, Scalar, base_exp, generator
from .pedersen import Opening


@dataclass(frozen=True)
class Keypair:
    sk: Scalar
    pk: GroupElement


def keygen(sk: Scalar) -> Keypair:
    return Keypair(sk, base_exp(sk))


class Ciphertext:
    __slots__ = ("c1", "c2")

    def __init__(self, c1: GroupElement, c2: GroupElement):
        self.c1 = c1
        self.c2 = c2

    def __mul__(self, other: "Ciphertext") -> "Ciphertext":
        return Ciphertext(self.c1 * other.c1, self.c2 * other.c2)

    def __truediv__(self, other: "Ciphertext") -> "Ciphertext":
        return Ciphertext(self.c1 / other.c1, self.c2 / other.c2)

    def __pow__(self, k) -> "Ciphertext":
        return Ciphertext(self.c1 ** k, self.c2 ** k)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ciphertext)
            and self.c1 == other.c1
            and self.c2 == other.c2
        )

    def __hash__(self) -> int:
        return hash((self.c1, self.c2))

    def __repr__(self) -> str:
        return f"Ciphertext({self.encode().hex()})"

    def encode(self) -> bytes:
        return self.c1.encode() + self.c2.encode()

    @classmethod
    def decode(cls, data: bytes) -> "Ciphertext":
        if len(data) != 2 * ENCODED_LEN:
            raise ValueError("ciphertext encoding must be 64 bytes")
        return cls(
            GroupElement.decode(data[:ENCODED_LEN]),
            GroupElement.decode(data[ENCODED_LEN:]),
        )


def encrypt(pk: GroupElement, m: Scalar, r: Scalar) -> Ciphertext:
    return Ciphertext(base_exp(r), pk ** r * base_exp(m))


def is_zero(sk: Scalar, ct: Ciphertext) -> bool:
    return ct.c2 == ct.c1 ** sk


def rerandomize(pk: GroupElement, ct: Ciphertext, r: Scalar) -> Ciphertext:
    return ct * encrypt(pk, Scalar(0), r)


class CiphertextCommitter:
    """ElGamal viewed as a commitment scheme keyed by a public key.

    commit(m, r) = Enc_pk(m, r) is binding unconditionally and hiding
    against anyone without sk. The interface matches PedersenParams, so the
    sigma protocols that are generic over the scheme accept either.
    """

    commitment_len = 64
    decode_commitment = staticmethod(Ciphertext.decode)

    def __init__(self, pk: GroupElement):
        self.pk = pk
        self.g = generator()

    def commit(self, m: Scalar, r: Scalar) -> Ciphertext:
        return encrypt(self.pk, m, r)

    def commit_opening(self, opening: Opening) -> Ciphertext:
        return self.commit(opening.m, opening.r)

    def verify(self, ct: Ciphertext, opening: Opening) -> bool:
        return self.commit(opening.m, opening.r) == ct
