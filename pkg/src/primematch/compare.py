"""Comparison vectors from linear operations.

Given bit decompositions of v0 and v1, a single forward pass builds two
vectors c0 and c1 of length n+1 such that c0 contains a zero iff v0 <= v1
and c1 contains a zero iff v1 <= v0 (both, on a tie). Each output slot is a
signed combination of bit differences plus a running weighted carry, so the
whole computation is linear in the inputs. That linearity is the point:
the same pass runs unchanged over additive shares, Pedersen commitments,
or exponent ElGamal ciphertexts, and the results stay consistent slot by
slot because every party applies the same permutation and the same nonzero
scaling factors, both derived from a shared seed.

Working values stay inside (-(2 + 4*(2**n - 1)), 2 + 4*(2**n - 1)), so as
long as that bound stays below the group order a slot is zero exactly when
the underlying integer is zero.

Bit order is big endian: bits[0] is the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    Ciphertext,
    GroupElement,
    ORDER,
    PedersenParams,
    Scalar,
    base_exp,
    encrypt,
    identity,
)
from .rand import RandomSource, XofReader

DERIVE_TAG = b"primematch-compare-v1"


def bit_decompose(value: int, n: int) -> list[int]:
    if not 0 <= value < (1 << n):
        raise ValueError(f"value {value} does not fit in {n} bits")
    return [(value >> (n - 1 - j)) & 1 for j in range(n)]


def bit_recompose(bits: list[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | int(b)
    return v


def slot_weight(j: int, n: int) -> int:
    """Exponent weight 2**(n-1-j) that recombines big-endian bit j."""
    return 1 << (n - 1 - j)


def working_bound(n: int) -> int:
    return 2 + 4 * ((1 << n) - 1)


def bound_fits_group(n: int) -> bool:
    return working_bound(n) < ORDER


@dataclass
class ComparisonRandomness:
    """Shared per-comparison secrets: pi[k] is the input slot that lands in
    output slot k; s0/s1 scale the two output vectors slotwise."""

    pi: list[int]
    s0: list[Scalar]
    s1: list[Scalar]


def derive_randomness(seed: bytes, n: int) -> ComparisonRandomness:
    """Expand a seed into (pi, s0, s1), identically on every party.

    Stream layout, in order, over SHAKE-256(tag || seed || n as 4-byte LE):
    first the shuffle draws (64-bit little-endian integers, rejection
    sampled to stay unbiased), then n+1 wide-reduced 64-byte scalars for
    s0, then the same for s1, zero draws rejected and redrawn.
    """
    stream = XofReader(DERIVE_TAG + seed + n.to_bytes(4, "little"))
    size = n + 1
    pi = list(range(size))
    for i in range(size - 1, 0, -1):
        span = i + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            draw = int.from_bytes(stream.read(8), "little")
            if draw < limit:
                break
        j = draw % span
        pi[i], pi[j] = pi[j], pi[i]

    def scalars() -> list[Scalar]:
        out = []
        while len(out) < size:
            s = Scalar.from_bytes_wide(stream.read(64))
            if not s.is_zero():
                out.append(s)
        return out

    return ComparisonRandomness(pi, scalars(), scalars())


class ScalarCarrier:
    """Plain field elements; also covers additive shares, where only the
    share at role 0 lifts the public constants."""

    def __init__(self, inject_constants: bool = True):
        self.inject = inject_constants

    def const(self, c: int) -> Scalar:
        return Scalar(c) if self.inject else Scalar(0)

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b

    def scale(self, a: Scalar, k: int) -> Scalar:
        return a * Scalar(k)

    def scale_scalar(self, a: Scalar, s: Scalar) -> Scalar:
        return a * s

    def finalize(self, vec: list[Scalar]) -> list[Scalar]:
        return vec


class CommitmentCarrier:
    """Commitment values (group elements) without their openings.

    Constants become Com(c, 0) = g**c; they belong in exactly one summand
    when a value is split across parties, hence the flag.
    """

    def __init__(self, params: PedersenParams, inject_constants: bool):
        self.params = params
        self.inject = inject_constants

    def const(self, c: int) -> GroupElement:
        if c and self.inject:
            return self.params.g ** Scalar(c)
        return identity()

    def sub(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return a / b

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return a * b

    def scale(self, a: GroupElement, k: int) -> GroupElement:
        return a ** Scalar(k)

    def scale_scalar(self, a: GroupElement, s: Scalar) -> GroupElement:
        return a ** s

    def finalize(self, vec: list[GroupElement]) -> list[GroupElement]:
        return vec


class CiphertextCarrier:
    """Exponent ElGamal ciphertexts under a fixed public key.

    Constants are trivial encryptions with zero randomness; finalize
    rerandomizes every slot so the output distribution does not depend on
    which inputs were trivial.
    """

    def __init__(self, pk: GroupElement, rng: RandomSource):
        self.pk = pk
        self.rng = rng

    def lift(self, c: int) -> Ciphertext:
        return Ciphertext(identity(), base_exp(Scalar(c)))

    def const(self, c: int) -> Ciphertext:
        return self.lift(c)

    def sub(self, a: Ciphertext, b: Ciphertext) -> Ciphertext:
        return a / b

    def add(self, a: Ciphertext, b: Ciphertext) -> Ciphertext:
        return a * b

    def scale(self, a: Ciphertext, k: int) -> Ciphertext:
        return a ** Scalar(k)

    def scale_scalar(self, a: Ciphertext, s: Scalar) -> Ciphertext:
        return a ** s

    def finalize(self, vec: list[Ciphertext]) -> list[Ciphertext]:
        return [ct * encrypt(self.pk, Scalar(0), self.rng.scalar()) for ct in vec]


def comparison_initial(ops, x: list, y: list, rnd: ComparisonRandomness):
    """One pass over carrier values; returns the shuffled, scaled (c0, c1).

    x and y are same-length carrier lifts of the two bit vectors. Slot j
    of the unshuffled vectors is w_j + (x_j - y_j) +- 1 and the extra slot
    is the final carry w_n, with w accumulating 4*2**j times each bit
    difference.
    """
    n = len(x)
    if len(y) != n:
        raise ValueError("bit vectors must have equal length")
    if len(rnd.pi) != n + 1 or len(rnd.s0) != n + 1 or len(rnd.s1) != n + 1:
        raise ValueError("randomness sized for a different n")
    plus = ops.const(1)
    minus = ops.const(-1)
    w = ops.const(0)
    c0, c1 = [], []
    for j in range(n):
        d = ops.sub(x[j], y[j])
        base = ops.add(d, w)
        c0.append(ops.add(base, plus))
        c1.append(ops.add(base, minus))
        w = ops.add(w, ops.scale(d, 1 << (2 + j)))
    c0.append(w)
    c1.append(w)
    out0 = [ops.scale_scalar(c0[rnd.pi[k]], rnd.s0[k]) for k in range(n + 1)]
    out1 = [ops.scale_scalar(c1[rnd.pi[k]], rnd.s1[k]) for k in range(n + 1)]
    return ops.finalize(out0), ops.finalize(out1)


def comparison_final(d: list[Scalar]) -> bool:
    """True iff some slot is zero, i.e. the tested inequality holds."""
    return any(s.is_zero() for s in d)
