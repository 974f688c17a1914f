"""Proofs that some position in a list hides zero, index kept secret.

Two variants for the two carriers in play.

For Pedersen commitment lists the prover knows the opening of the zero
slot. Each bit of the secret index gets a bit commitment, and products of
the per-bit response polynomials reproduce a delta function at the index:
p_i(x) has degree m only at i = l, so after the masking commitments c_d
cancel the low-order terms, the final check pins Com(0) at the secret slot.
The list length must be a power of two.

For ElGamal ciphertext lists the decryptor cannot know the sender's
randomness, so the commitment-style proof is out of reach. Instead the
holder of the secret key proves, by an OR of discrete-log-equality
statements, that some ciphertext decrypts to zero under the key matching
the public one: c2_l = c1_l**sk with pk = g**sk. Simulated branches carry
the other indices.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import (
    Ciphertext,
    Commitment,
    GroupElement,
    PedersenParams,
    Scalar,
    base_exp,
    identity,
)
from ..rand import RandomSource
from .transcript import Transcript

SCALAR_LEN = 32
COMMIT_LEN = 32


@dataclass
class OneOfManyProof:
    c_l: list[Commitment]
    c_a: list[Commitment]
    c_b: list[Commitment]
    c_d: list[Commitment]
    f: list[Scalar]
    z_a: list[Scalar]
    z_b: list[Scalar]
    z_d: Scalar

    def encode(self) -> bytes:
        m = len(self.c_l)
        out = [m.to_bytes(2, "little")]
        for group in (self.c_l, self.c_a, self.c_b, self.c_d):
            out.extend(c.encode() for c in group)
        for group in (self.f, self.z_a, self.z_b):
            out.extend(s.to_bytes() for s in group)
        out.append(self.z_d.to_bytes())
        return b"".join(out)

    @classmethod
    def decode(cls, data: bytes) -> "OneOfManyProof":
        if len(data) < 2:
            raise ValueError("bad proof length")
        m = int.from_bytes(data[:2], "little")
        want = 2 + 4 * m * COMMIT_LEN + (3 * m + 1) * SCALAR_LEN
        if len(data) != want:
            raise ValueError("bad proof length")
        off = 2
        groups = []
        for _ in range(4):
            group = []
            for _ in range(m):
                group.append(Commitment.decode(data[off : off + COMMIT_LEN]))
                off += COMMIT_LEN
            groups.append(group)
        scalars = []
        for _ in range(3):
            group = []
            for _ in range(m):
                group.append(Scalar.from_bytes(data[off : off + SCALAR_LEN]))
                off += SCALAR_LEN
            scalars.append(group)
        z_d = Scalar.from_bytes(data[off:])
        return cls(*groups, *scalars, z_d)


def _index_bits(index: int, m: int) -> list[int]:
    return [(index >> j) & 1 for j in range(m)]


def _membership_transcript(
    params: PedersenParams, commitments: list[Commitment], context: bytes
) -> Transcript:
    t = Transcript(b"one-of-many", context)
    t.absorb_element(b"g", params.g)
    t.absorb_element(b"h", params.h)
    t.absorb_elements(b"list", commitments)
    return t


def prove_zero_position(
    params: PedersenParams,
    commitments: list[Commitment],
    index: int,
    randomness: Scalar,
    context: bytes,
    rng: RandomSource,
) -> OneOfManyProof:
    n = len(commitments)
    m = n.bit_length() - 1
    if n != 1 << m:
        raise ValueError("list length must be a power of two")
    if not 0 <= index < n:
        raise ValueError("index out of range")
    bits = _index_bits(index, m)

    r = [rng.scalar() for _ in range(m)]
    a = [rng.scalar() for _ in range(m)]
    s = [rng.scalar() for _ in range(m)]
    t_rand = [rng.scalar() for _ in range(m)]
    rho = [rng.scalar() for _ in range(m)]

    c_l = [params.commit(Scalar(bits[j]), r[j]) for j in range(m)]
    c_a = [params.commit(a[j], s[j]) for j in range(m)]
    c_b = [params.commit(Scalar(bits[j]) * a[j], t_rand[j]) for j in range(m)]

    # p_i(x) = prod_j f_{j, i_j}, with f_{j,1} = l_j x + a_j and
    # f_{j,0} = x - f_{j,1}; collect coefficients of x^0 .. x^m
    coeffs = []
    for i in range(n):
        poly = [Scalar(1)]
        for j in range(m):
            if (i >> j) & 1:
                lin = (Scalar(bits[j]), a[j])
            else:
                lin = (Scalar(1 - bits[j]), -a[j])
            nxt = [Scalar(0)] * (len(poly) + 1)
            for deg, coef in enumerate(poly):
                nxt[deg + 1] = nxt[deg + 1] + coef * lin[0]
                nxt[deg] = nxt[deg] + coef * lin[1]
            poly = nxt
        coeffs.append(poly)

    c_d = []
    for k in range(m):
        acc = params.commit(Scalar(0), rho[k]).value
        for i in range(n):
            if not coeffs[i][k].is_zero():
                acc = acc * commitments[i].value ** coeffs[i][k]
        c_d.append(Commitment(acc))

    t = _membership_transcript(params, commitments, context)
    t.absorb_elements(b"c_l", c_l)
    t.absorb_elements(b"c_a", c_a)
    t.absorb_elements(b"c_b", c_b)
    t.absorb_elements(b"c_d", c_d)
    x = t.challenge(b"x")

    f = [Scalar(bits[j]) * x + a[j] for j in range(m)]
    z_a = [r[j] * x + s[j] for j in range(m)]
    z_b = [r[j] * (x - f[j]) + t_rand[j] for j in range(m)]
    x_pow = Scalar(1)
    z_d = Scalar(0)
    for k in range(m):
        z_d = z_d - rho[k] * x_pow
        x_pow = x_pow * x
    z_d = z_d + randomness * x_pow  # x_pow is now x^m
    return OneOfManyProof(c_l, c_a, c_b, c_d, f, z_a, z_b, z_d)


def verify_zero_position(
    params: PedersenParams,
    commitments: list[Commitment],
    proof: OneOfManyProof,
    context: bytes,
) -> bool:
    n = len(commitments)
    m = n.bit_length() - 1
    if n != 1 << m:
        return False
    if not (
        len(proof.c_l) == len(proof.c_a) == len(proof.c_b) == len(proof.c_d) == m
        and len(proof.f) == len(proof.z_a) == len(proof.z_b) == m
    ):
        return False

    t = _membership_transcript(params, commitments, context)
    t.absorb_elements(b"c_l", proof.c_l)
    t.absorb_elements(b"c_a", proof.c_a)
    t.absorb_elements(b"c_b", proof.c_b)
    t.absorb_elements(b"c_d", proof.c_d)
    x = t.challenge(b"x")

    for j in range(m):
        if proof.c_l[j] ** x * proof.c_a[j] != params.commit(proof.f[j], proof.z_a[j]):
            return False
        lhs = proof.c_l[j] ** (x - proof.f[j]) * proof.c_b[j]
        if lhs != params.commit(Scalar(0), proof.z_b[j]):
            return False

    acc = identity()
    for i in range(n):
        e = Scalar(1)
        for j in range(m):
            e = e * (proof.f[j] if (i >> j) & 1 else x - proof.f[j])
        acc = acc * commitments[i].value ** e
    x_pow = Scalar(1)
    for k in range(m):
        acc = acc * proof.c_d[k].value ** (-x_pow)
        x_pow = x_pow * x
    return Commitment(acc) == params.commit(Scalar(0), proof.z_d)


@dataclass
class CiphertextZeroProof:
    challenges: list[Scalar]
    responses: list[Scalar]

    def encode(self) -> bytes:
        n = len(self.challenges)
        out = [n.to_bytes(2, "little")]
        out.extend(c.to_bytes() for c in self.challenges)
        out.extend(z.to_bytes() for z in self.responses)
        return b"".join(out)

    @classmethod
    def decode(cls, data: bytes) -> "CiphertextZeroProof":
        if len(data) < 2:
            raise ValueError("bad proof length")
        n = int.from_bytes(data[:2], "little")
        if len(data) != 2 + 2 * n * SCALAR_LEN:
            raise ValueError("bad proof length")
        off = 2
        xs, zs = [], []
        for _ in range(n):
            xs.append(Scalar.from_bytes(data[off : off + SCALAR_LEN]))
            off += SCALAR_LEN
        for _ in range(n):
            zs.append(Scalar.from_bytes(data[off : off + SCALAR_LEN]))
            off += SCALAR_LEN
        return cls(xs, zs)


def _ciphertext_zero_transcript(
    pk: GroupElement, cts: list[Ciphertext], context: bytes
) -> Transcript:
    t = Transcript(b"ciphertext-zero", context)
    t.absorb_element(b"pk", pk)
    t.absorb_elements(b"list", cts)
    return t


def prove_some_zero(
    pk: GroupElement,
    sk: Scalar,
    cts: list[Ciphertext],
    index: int,
    context: bytes,
    rng: RandomSource,
) -> CiphertextZeroProof:
    """OR over i of: c2_i = c1_i**sk and pk = g**sk. Honest branch at index."""
    n = len(cts)
    if not 0 <= index < n:
        raise ValueError("index out of range")
    challenges: list[Scalar | None] = [None] * n
    responses: list[Scalar | None] = [None] * n
    announce: list[tuple[GroupElement, GroupElement] | None] = [None] * n
    for i in range(n):
        if i == index:
            continue
        x_i, z_i = rng.scalar(), rng.scalar()
        challenges[i] = x_i
        responses[i] = z_i
        announce[i] = (
            base_exp(z_i) / pk ** x_i,
            cts[i].c1 ** z_i / cts[i].c2 ** x_i,
        )
    k = rng.scalar()
    announce[index] = (base_exp(k), cts[index].c1 ** k)

    t = _ciphertext_zero_transcript(pk, cts, context)
    for k1, k2 in announce:
        t.absorb_element(b"K1", k1)
        t.absorb_element(b"K2", k2)
    total = t.challenge(b"x")

    x_l = total
    for i in range(n):
        if i != index:
            x_l = x_l - challenges[i]
    challenges[index] = x_l
    responses[index] = k + x_l * sk
    return CiphertextZeroProof(list(challenges), list(responses))


def verify_some_zero(
    pk: GroupElement,
    cts: list[Ciphertext],
    proof: CiphertextZeroProof,
    context: bytes,
) -> bool:
    n = len(cts)
    if len(proof.challenges) != n or len(proof.responses) != n:
        return False
    t = _ciphertext_zero_transcript(pk, cts, context)
    for i in range(n):
        x_i, z_i = proof.challenges[i], proof.responses[i]
        t.absorb_element(b"K1", base_exp(z_i) / pk ** x_i)
        t.absorb_element(b"K2", cts[i].c1 ** z_i / cts[i].c2 ** x_i)
    total = t.challenge(b"x")
    acc = Scalar(0)
    for x_i in proof.challenges:
        acc = acc + x_i
    return acc == total
