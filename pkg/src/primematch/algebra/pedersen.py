"""Pedersen commitments: Com(m, r) = g**m * h**r.

The second base h is derived by hashing the encoded generator with a fixed
domain tag, so nobody knows log_g(h) and the scheme is binding under the
discrete log assumption. Commitments are perfectly hiding.

Commitment and Opening carry matching operator algebra: multiplying two
commitments adds the committed messages, and the same `*` on the openings
tracks the new opening, so code that knows openings keeps them alongside
the commitments it manipulates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .group import GroupElement, Scalar, double_exp, generator, hash_to_group

H_DERIVATION_TAG = b"primematch-pedersen-h"


@dataclass(frozen=True)
class Opening:
    m: Scalar
    r: Scalar

    def __mul__(self, other: "Opening") -> "Opening":
        return Opening(self.m + other.m, self.r + other.r)

    def __truediv__(self, other: "Opening") -> "Opening":
        return Opening(self.m - other.m, self.r - other.r)

    def __pow__(self, k) -> "Opening":
        k = k if isinstance(k, Scalar) else Scalar(k)
        return Opening(self.m * k, self.r * k)


class Commitment:
    __slots__ = ("value",)

    def __init__(self, value: GroupElement):
        self.value = value

    def __mul__(self, other: "Commitment") -> "Commitment":
        return Commitment(self.value * other.value)

    def __truediv__(self, other: "Commitment") -> "Commitment":
        return Commitment(self.value / other.value)

    def __pow__(self, k) -> "Commitment":
        return Commitment(self.value ** k)

    def __eq__(self, other) -> bool:
        return isinstance(other, Commitment) and self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __repr__(self) -> str:
        return f"Commitment({self.value.encode().hex()})"

    def encode(self) -> bytes:
        return self.value.encode()

    @classmethod
    def decode(cls, data: bytes) -> "Commitment":
        return cls(GroupElement.decode(data))


class PedersenParams:
    commitment_len = 32
    decode_commitment = staticmethod(Commitment.decode)

    def __init__(self, g: GroupElement, h: GroupElement):
        self.g = g
        self.h = h

    def commit(self, m: Scalar, r: Scalar) -> Commitment:
        return Commitment(double_exp(m, self.g, r, self.h))

    def commit_opening(self, opening: Opening) -> Commitment:
        return self.commit(opening.m, opening.r)

    def verify(self, commitment: Commitment, opening: Opening) -> bool:
        return self.commit(opening.m, opening.r) == commitment


_default: PedersenParams | None = None


def default_params() -> PedersenParams:
    global _default
    if _default is None:
        g = generator()
        h = hash_to_group(g.encode() + H_DERIVATION_TAG)
        _default = PedersenParams(g, h)
    return _default
