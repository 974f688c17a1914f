"""Prime-order group written multiplicatively, plus its scalar field.

GroupElement wraps a backend point; `*` is the group operation, `**` raises
to a scalar power and `/` divides, so protocol code reads like the algebra
it implements: Com(m, r) = g**m * h**r. Scalars live mod the group order L
and serialize to canonical 32-byte little-endian strings.
"""

from __future__ import annotations

import hashlib

from . import backend

_impl = backend.impl

ORDER = _impl.L
ENCODED_LEN = 32


class Scalar:
    """An element of the field of integers mod the group order."""

    __slots__ = ("v",)

    def __init__(self, value: int):
        self.v = value % ORDER

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.v + other.v)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.v - other.v)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.v * other.v)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.v)

    def __eq__(self, other) -> bool:
        return isinstance(other, Scalar) and self.v == other.v

    def __hash__(self) -> int:
        return hash(("Scalar", self.v))

    def __int__(self) -> int:
        return self.v

    def __repr__(self) -> str:
        return f"Scalar({self.v})"

    def is_zero(self) -> bool:
        return self.v == 0

    def inverse(self) -> "Scalar":
        if self.v == 0:
            raise ZeroDivisionError("scalar 0 has no inverse")
        return Scalar(pow(self.v, ORDER - 2, ORDER))

    def to_bytes(self) -> bytes:
        return self.v.to_bytes(ENCODED_LEN, "little")

    @classmethod
    def from_bytes(cls, data: bytes) -> "Scalar":
        if len(data) != ENCODED_LEN:
            raise ValueError("scalar encoding must be 32 bytes")
        v = int.from_bytes(data, "little")
        if v >= ORDER:
            raise ValueError("non-canonical scalar encoding")
        return cls(v)

    @classmethod
    def from_bytes_wide(cls, data: bytes) -> "Scalar":
        """Reduce 64 uniform bytes; the bias is negligible at this width."""
        if len(data) != 64:
            raise ValueError("wide scalar reduction needs 64 bytes")
        return cls(int.from_bytes(data, "little"))


class GroupElement:
    __slots__ = ("p", "_enc")

    def __init__(self, point):
        self.p = point
        self._enc = None

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(_impl.point_add(self.p, other.p))

    def __truediv__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(_impl.point_add(self.p, _impl.point_neg(other.p)))

    def __pow__(self, exponent) -> "GroupElement":
        e = exponent.v if isinstance(exponent, Scalar) else exponent % ORDER
        return GroupElement(_impl.point_mul(e, self.p))

    def inverse(self) -> "GroupElement":
        return GroupElement(_impl.point_neg(self.p))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and _impl.point_eq(self.p, other.p)

    def __hash__(self) -> int:
        return hash(self.encode())

    def __repr__(self) -> str:
        return f"GroupElement({self.encode().hex()})"

    def is_identity(self) -> bool:
        return _impl.is_identity(self.p)

    def encode(self) -> bytes:
        if self._enc is None:
            self._enc = _impl.encode(self.p)
        return self._enc

    @classmethod
    def decode(cls, data: bytes) -> "GroupElement":
        el = cls(_impl.decode(data))
        el._enc = bytes(data)
        return el


def identity() -> GroupElement:
    return GroupElement(_impl.IDENTITY)


def generator() -> GroupElement:
    return GroupElement(_impl.BASE)


def base_exp(e: Scalar) -> GroupElement:
    return GroupElement(_impl.point_mul_base(e.v))


def double_exp(a: Scalar, ga: GroupElement, b: Scalar, gb: GroupElement) -> GroupElement:
    """ga**a * gb**b in one pass; the commitment hot path."""
    return GroupElement(_impl.double_mul(a.v, ga.p, b.v, gb.p))


def hash_to_group(data: bytes) -> GroupElement:
    """Map arbitrary bytes to a group element with unknown discrete log."""
    uniform = hashlib.shake_256(data).digest(64)
    return GroupElement(_impl.from_uniform(uniform))


def hash_to_scalar(data: bytes) -> Scalar:
    return Scalar.from_bytes_wide(hashlib.shake_256(data).digest(64))
