"""Equality-of-message proofs.

Two statements are covered. The homogeneous one: two Pedersen commitments
under the same parameters hide the same message. Since V0/V1 = h**(r0-r1)
when the messages agree, this reduces to a Schnorr proof of knowledge of
the discrete log of V0/V1 to base h.

The heterogeneous one: a Pedersen commitment and an (exponent ElGamal)
ciphertext hide the same message. Three standard sigma equations share the
message nonce, which ties the two statements together.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import (
    ENCODED_LEN,
    Ciphertext,
    Commitment,
    GroupElement,
    PedersenParams,
    Scalar,
    base_exp,
    double_exp,
)
from ..rand import RandomSource
from .transcript import Transcript

SCALAR_LEN = 32


@dataclass
class ComEqProof:
    big_k: GroupElement
    s: Scalar

    def encode(self) -> bytes:
        return self.big_k.encode() + self.s.to_bytes()

    @classmethod
    def decode(cls, data: bytes) -> "ComEqProof":
        if len(data) != ENCODED_LEN + SCALAR_LEN:
            raise ValueError("bad proof length")
        return cls(
            GroupElement.decode(data[:ENCODED_LEN]),
            Scalar.from_bytes(data[ENCODED_LEN:]),
        )


def _comeq_transcript(
    params: PedersenParams, v0: Commitment, v1: Commitment, context: bytes
) -> Transcript:
    t = Transcript(b"comeq", context)
    t.absorb_element(b"g", params.g)
    t.absorb_element(b"h", params.h)
    t.absorb_element(b"v0", v0)
    t.absorb_element(b"v1", v1)
    return t


def prove_same_message(
    params: PedersenParams,
    v0: Commitment,
    v1: Commitment,
    r0: Scalar,
    r1: Scalar,
    context: bytes,
    rng: RandomSource,
) -> ComEqProof:
    delta = r0 - r1
    k = rng.scalar()
    big_k = params.h ** k
    t = _comeq_transcript(params, v0, v1, context)
    t.absorb_element(b"K", big_k)
    x = t.challenge(b"x")
    return ComEqProof(big_k, delta * x + k)


def verify_same_message(
    params: PedersenParams,
    v0: Commitment,
    v1: Commitment,
    proof: ComEqProof,
    context: bytes,
) -> bool:
    t = _comeq_transcript(params, v0, v1, context)
    t.absorb_element(b"K", proof.big_k)
    x = t.challenge(b"x")
    return params.h ** proof.s == (v0.value / v1.value) ** x * proof.big_k


@dataclass
class ComEqCiphertextProof:
    k1: GroupElement
    k2: GroupElement
    k3: GroupElement
    s_m: Scalar
    s_p: Scalar
    s_e: Scalar

    def encode(self) -> bytes:
        return (
            self.k1.encode()
            + self.k2.encode()
            + self.k3.encode()
            + self.s_m.to_bytes()
            + self.s_p.to_bytes()
            + self.s_e.to_bytes()
        )

    @classmethod
    def decode(cls, data: bytes) -> "ComEqCiphertextProof":
        if len(data) != 3 * ENCODED_LEN + 3 * SCALAR_LEN:
            raise ValueError("bad proof length")
        off = 0
        parts = []
        for _ in range(3):
            parts.append(GroupElement.decode(data[off : off + ENCODED_LEN]))
            off += ENCODED_LEN
        for _ in range(3):
            parts.append(Scalar.from_bytes(data[off : off + SCALAR_LEN]))
            off += SCALAR_LEN
        return cls(*parts)


def _hetero_transcript(
    params: PedersenParams,
    pk: GroupElement,
    v: Commitment,
    ct: Ciphertext,
    context: bytes,
) -> Transcript:
    t = Transcript(b"comeq-ciphertext", context)
    t.absorb_element(b"g", params.g)
    t.absorb_element(b"h", params.h)
    t.absorb_element(b"pk", pk)
    t.absorb_element(b"v", v)
    t.absorb_element(b"ct", ct)
    return t


def prove_commitment_ciphertext_equal(
    params: PedersenParams,
    pk: GroupElement,
    v: Commitment,
    ct: Ciphertext,
    m: Scalar,
    p: Scalar,
    e: Scalar,
    context: bytes,
    rng: RandomSource,
) -> ComEqCiphertextProof:
    """v = Com(m, p), ct = Enc_pk(m, e); prove the messages coincide."""
    k_m, k_p, k_e = rng.scalar(), rng.scalar(), rng.scalar()
    k1 = double_exp(k_m, params.g, k_p, params.h)
    k2 = base_exp(k_e)
    k3 = pk ** k_e * base_exp(k_m)
    t = _hetero_transcript(params, pk, v, ct, context)
    t.absorb_element(b"K1", k1)
    t.absorb_element(b"K2", k2)
    t.absorb_element(b"K3", k3)
    x = t.challenge(b"x")
    return ComEqCiphertextProof(
        k1, k2, k3, k_m + x * m, k_p + x * p, k_e + x * e
    )


def verify_commitment_ciphertext_equal(
    params: PedersenParams,
    pk: GroupElement,
    v: Commitment,
    ct: Ciphertext,
    proof: ComEqCiphertextProof,
    context: bytes,
) -> bool:
    t = _hetero_transcript(params, pk, v, ct, context)
    t.absorb_element(b"K1", proof.k1)
    t.absorb_element(b"K2", proof.k2)
    t.absorb_element(b"K3", proof.k3)
    x = t.challenge(b"x")
    if double_exp(proof.s_m, params.g, proof.s_p, params.h) != v.value ** x * proof.k1:
        return False
    if base_exp(proof.s_e) != ct.c1 ** x * proof.k2:
        return False
    return pk ** proof.s_e * base_exp(proof.s_m) == ct.c2 ** x * proof.k3
