"""Pure-Python backend for the prime-order group.

The group is the ristretto255 construction over Curve25519: a prime-order
group of order

    L = 2^252 + 27742317777372353535851937790883648493

whose elements have a canonical 32-byte encoding (non-canonical byte strings
are rejected on decode). Internally a group element is an extended-coordinate
point (X, Y, Z, T) on the twisted Edwards curve -x^2 + y^2 = 1 + d x^2 y^2
over GF(2^255 - 19); many points represent the same group element, and
encode() maps all of them to the same bytes.

This module is the fallback selected when the compiled kernel
(primematch.algebra._core) is not importable, and the reference the compiled
kernel is tested against. Arithmetic is variable-time; constant-time
execution is out of scope for this artifact.
"""

P = 2**255 - 19
L = 2**252 + 27742317777372353535851937790883648493

NAME = "reference"


def _inv(x: int) -> int:
    return pow(x, P - 2, P)


D = (-121665 * _inv(121666)) % P
SQRT_M1 = pow(2, (P - 1) // 4, P)  # squares to -1
assert SQRT_M1 * SQRT_M1 % P == P - 1


def _is_neg(x: int) -> bool:
    return bool(x & 1)


def _abs(x: int) -> int:
    return (P - x) % P if x & 1 else x


def _sqrt_ratio_m1(u: int, v: int) -> tuple[bool, int]:
    """Return (was_square, r) with r = sqrt(u/v) if u/v is square, else
    sqrt(SQRT_M1 * u/v); r is the non-negative root. (0, v) gives (True, 0)."""
    v3 = v * v % P * v % P
    v7 = v3 * v3 % P * v % P
    r = u * v3 % P * pow(u * v7 % P, (P - 5) // 8, P) % P
    check = v * r % P * r % P
    u = u % P
    correct = check == u
    flipped = check == P - u if u else check == 0
    flipped_i = check == (P - u) * SQRT_M1 % P if u else False
    if flipped or flipped_i:
        r = r * SQRT_M1 % P
    return (correct or flipped, _abs(r))


# a = -1; both derived constants involve a*d - 1 = a - d = -(1 + d)
_A_MINUS_D = (-1 - D) % P
_sq, SQRT_AD_MINUS_ONE = _sqrt_ratio_m1(_A_MINUS_D, 1)
assert _sq
# the standard encoding fixes the odd root here; the even one sends the
# one-way map into the wrong coset and breaks the published test vectors
SQRT_AD_MINUS_ONE = P - SQRT_AD_MINUS_ONE
assert _is_neg(SQRT_AD_MINUS_ONE)
_sq, INVSQRT_A_MINUS_D = _sqrt_ratio_m1(1, _A_MINUS_D)
assert _sq

ONE_MINUS_D_SQ = (1 - D * D) % P
D_MINUS_ONE_SQ = (D - 1) * (D - 1) % P

IDENTITY = (0, 1, 1, 0)

# Base point: y = 4/5, x the even square root (ristretto255's generator is
# the Ed25519 base point).
_by = 4 * _inv(5) % P
_sq, _bx = _sqrt_ratio_m1((_by * _by - 1) % P, (D * _by * _by + 1) % P)
assert _sq
BASE = (_bx, _by, 1, _bx * _by % P)


def point_add(p, q):
    x1, y1, z1, t1 = p
    x2, y2, z2, t2 = q
    a = (y1 - x1) * (y2 - x2) % P
    b = (y1 + x1) * (y2 + x2) % P
    c = 2 * D * t1 % P * t2 % P
    dd = 2 * z1 * z2 % P
    e = b - a
    f = dd - c
    g = dd + c
    h = b + a
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def point_double(p):
    x1, y1, z1, _ = p
    a = x1 * x1 % P
    b = y1 * y1 % P
    c = 2 * z1 * z1 % P
    e = ((x1 + y1) * (x1 + y1) - a - b) % P
    g = (b - a) % P
    f = (g - c) % P
    h = (-a - b) % P
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def point_neg(p):
    x, y, z, t = p
    return ((-x) % P, y, z, (-t) % P)


def point_eq(p, q) -> bool:
    x1, y1, _, _ = p
    x2, y2, _, _ = q
    # same group element iff equal up to 4-torsion; the first clause absorbs
    # the 2-torsion offsets, the second the order-4 ones
    return (x1 * y2 - y1 * x2) % P == 0 or (y1 * y2 - x1 * x2) % P == 0


def is_identity(p) -> bool:
    x, y, _, _ = p
    return x == 0 or y == 0


def point_mul(k: int, p):
    """k * p by 4-bit windowed double-and-add (variable time)."""
    k %= L
    if k == 0:
        return IDENTITY
    table = [IDENTITY, p]
    for _ in range(14):
        table.append(point_add(table[-1], p))
    nibbles = []
    while k:
        nibbles.append(k & 0xF)
        k >>= 4
    acc = table[nibbles[-1]]
    for nib in reversed(nibbles[:-1]):
        acc = point_double(point_double(point_double(point_double(acc))))
        if nib:
            acc = point_add(acc, table[nib])
    return acc


def point_mul_base(k: int):
    return point_mul(k, BASE)


def double_mul(k1: int, p1, k2: int, p2):
    """k1*p1 + k2*p2 with interleaved windows (the commitment hot path)."""
    k1 %= L
    k2 %= L
    t1 = [IDENTITY, p1]
    t2 = [IDENTITY, p2]
    for _ in range(14):
        t1.append(point_add(t1[-1], p1))
        t2.append(point_add(t2[-1], p2))
    acc = IDENTITY
    started = False
    for shift in range(252, -4, -4):
        if started:
            acc = point_double(point_double(point_double(point_double(acc))))
        n1 = (k1 >> shift) & 0xF
        n2 = (k2 >> shift) & 0xF
        if n1:
            acc = point_add(acc, t1[n1])
        if n2:
            acc = point_add(acc, t2[n2])
        started = started or n1 or n2 or acc != IDENTITY
    return acc


def encode(p) -> bytes:
    x, y, z, t = p
    u1 = (z + y) * (z - y) % P
    u2 = x * y % P
    _, invsqrt = _sqrt_ratio_m1(1, u1 * u2 % P * u2 % P)
    den1 = invsqrt * u1 % P
    den2 = invsqrt * u2 % P
    z_inv = den1 * den2 % P * t % P
    if _is_neg(t * z_inv % P):
        x, y = y * SQRT_M1 % P, x * SQRT_M1 % P
        den_inv = den1 * INVSQRT_A_MINUS_D % P
    else:
        den_inv = den2
    if _is_neg(x * z_inv % P):
        y = (-y) % P
    s = _abs(den_inv * ((z - y) % P) % P)
    return s.to_bytes(32, "little")


def decode(data: bytes):
    """Decode a canonical 32-byte encoding; raise ValueError otherwise."""
    if len(data) != 32:
        raise ValueError("group element encoding must be 32 bytes")
    s = int.from_bytes(data, "little")
    if s >= P or _is_neg(s):
        raise ValueError("non-canonical group element encoding")
    ss = s * s % P
    u1 = (1 - ss) % P
    u2 = (1 + ss) % P
    u2_sqr = u2 * u2 % P
    v = (-(D * u1 % P * u1) - u2_sqr) % P
    was_square, invsqrt = _sqrt_ratio_m1(1, v * u2_sqr % P)
    den_x = invsqrt * u2 % P
    den_y = invsqrt * den_x % P * v % P
    x = _abs(2 * s * den_x % P)
    y = u1 * den_y % P
    t = x * y % P
    if not was_square or _is_neg(t) or y == 0:
        raise ValueError("invalid group element encoding")
    return (x, y, 1, t)


def _elligator(t: int):
    r = SQRT_M1 * t % P * t % P
    u = (r + 1) * ONE_MINUS_D_SQ % P
    v = (-1 - r * D) % P * ((r + D) % P) % P
    was_square, s = _sqrt_ratio_m1(u, v)
    if was_square:
        c = P - 1
    else:
        s = (P - _abs(s * t % P)) % P
        c = r
    n = (c * ((r - 1) % P) % P * D_MINUS_ONE_SQ - v) % P
    w0 = 2 * s * v % P
    w1 = n * SQRT_AD_MINUS_ONE % P
    w2 = (1 - s * s) % P
    w3 = (1 + s * s) % P
    return (w0 * w3 % P, w2 * w1 % P, w1 * w3 % P, w0 * w2 % P)


def from_uniform(data: bytes):
    """Map 64 uniform bytes to a group element (hash-to-group)."""
    if len(data) != 64:
        raise ValueError("from_uniform needs exactly 64 bytes")
    mask = (1 << 255) - 1
    r0 = int.from_bytes(data[:32], "little") & mask
    r1 = int.from_bytes(data[32:], "little") & mask
    return point_add(_elligator(r0 % P), _elligator(r1 % P))
