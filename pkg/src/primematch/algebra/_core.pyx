# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled group arithmetic kernel.

Same construction and interface as the pure-Python reference module, with
field elements held as five 51-bit limbs and products accumulated in
unsigned __int128. All derived curve constants are taken from the reference
module at init, so the two backends cannot drift apart. Variable time, like
the reference.
"""

from . import reference as _ref

P = _ref.P
L = _ref.L
NAME = "compiled"

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64

cdef u64 MASK = ((<u64>1) << 51) - 1

# 2*p per limb, the subtraction bias: limbs of p are (2^51 - 19, 2^51 - 1 x4)
cdef u64 BIAS0 = (((<u64>1) << 51) - 19) * 2
cdef u64 BIASN = (((<u64>1) << 51) - 1) * 2


cdef struct fe:
    u64 v[5]

cdef struct ge:
    fe X
    fe Y
    fe Z
    fe T


cdef inline fe fe_weak_reduce(fe a):
    # one carry pass; keeps limbs under 2^52 given inputs under 2^63
    cdef fe r
    cdef u64 c
    r = a
    c = r.v[0] >> 51; r.v[0] &= MASK; r.v[1] += c
    c = r.v[1] >> 51; r.v[1] &= MASK; r.v[2] += c
    c = r.v[2] >> 51; r.v[2] &= MASK; r.v[3] += c
    c = r.v[3] >> 51; r.v[3] &= MASK; r.v[4] += c
    c = r.v[4] >> 51; r.v[4] &= MASK; r.v[0] += 19 * c
    c = r.v[0] >> 51; r.v[0] &= MASK; r.v[1] += c
    return r


cdef inline fe fe_add(fe a, fe b):
    cdef fe r
    cdef int i
    for i in range(5):
        r.v[i] = a.v[i] + b.v[i]
    return fe_weak_reduce(r)


cdef inline fe fe_sub(fe a, fe b):
    cdef fe r
    r.v[0] = a.v[0] + BIAS0 - b.v[0]
    r.v[1] = a.v[1] + BIASN - b.v[1]
    r.v[2] = a.v[2] + BIASN - b.v[2]
    r.v[3] = a.v[3] + BIASN - b.v[3]
    r.v[4] = a.v[4] + BIASN - b.v[4]
    return fe_weak_reduce(r)


cdef fe fe_mul(fe f, fe g):
    cdef u128 m0, m1, m2, m3, m4, t
    cdef u64 g1_19 = 19 * g.v[1]
    cdef u64 g2_19 = 19 * g.v[2]
    cdef u64 g3_19 = 19 * g.v[3]
    cdef u64 g4_19 = 19 * g.v[4]
    m0 = (<u128>f.v[0]) * g.v[0] + (<u128>f.v[1]) * g4_19 + (<u128>f.v[2]) * g3_19 + (<u128>f.v[3]) * g2_19 + (<u128>f.v[4]) * g1_19
    m1 = (<u128>f.v[0]) * g.v[1] + (<u128>f.v[1]) * g.v[0] + (<u128>f.v[2]) * g4_19 + (<u128>f.v[3]) * g3_19 + (<u128>f.v[4]) * g2_19
    m2 = (<u128>f.v[0]) * g.v[2] + (<u128>f.v[1]) * g.v[1] + (<u128>f.v[2]) * g.v[0] + (<u128>f.v[3]) * g4_19 + (<u128>f.v[4]) * g3_19
    m3 = (<u128>f.v[0]) * g.v[3] + (<u128>f.v[1]) * g.v[2] + (<u128>f.v[2]) * g.v[1] + (<u128>f.v[3]) * g.v[0] + (<u128>f.v[4]) * g4_19
    m4 = (<u128>f.v[0]) * g.v[4] + (<u128>f.v[1]) * g.v[3] + (<u128>f.v[2]) * g.v[2] + (<u128>f.v[3]) * g.v[1] + (<u128>f.v[4]) * g.v[0]
    cdef fe r
    m1 += <u64>(m0 >> 51); r.v[0] = <u64>m0 & MASK
    m2 += <u64>(m1 >> 51); r.v[1] = <u64>m1 & MASK
    m3 += <u64>(m2 >> 51); r.v[2] = <u64>m2 & MASK
    m4 += <u64>(m3 >> 51); r.v[3] = <u64>m3 & MASK
    r.v[4] = <u64>m4 & MASK
    t = (<u128>r.v[0]) + (<u128>19) * (<u64>(m4 >> 51))
    r.v[0] = <u64>t & MASK
    r.v[1] += <u64>(t >> 51)
    return r


cdef fe fe_sq(fe f):
    cdef u64 f0 = f.v[0], f1 = f.v[1], f2 = f.v[2], f3 = f.v[3], f4 = f.v[4]
    cdef u64 f3_19 = 19 * f3, f4_19 = 19 * f4
    cdef u128 m0, m1, m2, m3, m4, t
    m0 = (<u128>f0) * f0 + 2 * ((<u128>f1) * f4_19 + (<u128>f2) * f3_19)
    m1 = 2 * ((<u128>f0) * f1 + (<u128>f2) * f4_19) + (<u128>f3) * f3_19
    m2 = 2 * ((<u128>f0) * f2 + (<u128>f3) * f4_19) + (<u128>f1) * f1
    m3 = 2 * ((<u128>f0) * f3 + (<u128>f1) * f2) + (<u128>f4) * f4_19
    m4 = 2 * ((<u128>f0) * f4 + (<u128>f1) * f3) + (<u128>f2) * f2
    cdef fe r
    m1 += <u64>(m0 >> 51); r.v[0] = <u64>m0 & MASK
    m2 += <u64>(m1 >> 51); r.v[1] = <u64>m1 & MASK
    m3 += <u64>(m2 >> 51); r.v[2] = <u64>m2 & MASK
    m4 += <u64>(m3 >> 51); r.v[3] = <u64>m3 & MASK
    r.v[4] = <u64>m4 & MASK
    t = (<u128>r.v[0]) + (<u128>19) * (<u64>(m4 >> 51))
    r.v[0] = <u64>t & MASK
    r.v[1] += <u64>(t >> 51)
    return r


cdef fe fe_sq_times(fe f, int n):
    cdef int i
    for i in range(n):
        f = fe_sq(f)
    return f


cdef fe fe_pow2523(fe z):
    # z^(2^252 - 3), the exponent used inside the square-root ratio
    cdef fe z2, z9, z11, z2_5_0, z2_10_0, z2_20_0, z2_50_0, z2_100_0, t
    z2 = fe_sq(z)
    t = fe_sq_times(z2, 2)
    z9 = fe_mul(t, z)
    z11 = fe_mul(z9, z2)
    t = fe_sq(z11)
    z2_5_0 = fe_mul(t, z9)
    t = fe_sq_times(z2_5_0, 5)
    z2_10_0 = fe_mul(t, z2_5_0)
    t = fe_sq_times(z2_10_0, 10)
    z2_20_0 = fe_mul(t, z2_10_0)
    t = fe_sq_times(z2_20_0, 20)
    t = fe_mul(t, z2_20_0)
    t = fe_sq_times(t, 10)
    z2_50_0 = fe_mul(t, z2_10_0)
    t = fe_sq_times(z2_50_0, 50)
    z2_100_0 = fe_mul(t, z2_50_0)
    t = fe_sq_times(z2_100_0, 100)
    t = fe_mul(t, z2_100_0)
    t = fe_sq_times(t, 50)
    t = fe_mul(t, z2_50_0)
    t = fe_sq_times(t, 2)
    return fe_mul(t, z)


cdef void fe_to_bytes(unsigned char *out, fe a):
    cdef fe h = fe_weak_reduce(a)
    cdef u64 q
    # quotient of h by p is 0 or 1; fold it in and keep the low 255 bits
    q = (h.v[0] + 19) >> 51
    q = (h.v[1] + q) >> 51
    q = (h.v[2] + q) >> 51
    q = (h.v[3] + q) >> 51
    q = (h.v[4] + q) >> 51
    h.v[0] += 19 * q
    cdef u64 c
    c = h.v[0] >> 51; h.v[0] &= MASK; h.v[1] += c
    c = h.v[1] >> 51; h.v[1] &= MASK; h.v[2] += c
    c = h.v[2] >> 51; h.v[2] &= MASK; h.v[3] += c
    c = h.v[3] >> 51; h.v[3] &= MASK; h.v[4] += c
    h.v[4] &= MASK
    cdef int i, limb, bitpos, off
    cdef u64 w
    for i in range(32):
        out[i] = 0
    for limb in range(5):
        w = h.v[limb]
        bitpos = 51 * limb
        for i in range(8):
            off = bitpos // 8 + i
            if off < 32 and 8 * i <= 51 + (bitpos % 8):
                out[off] |= <unsigned char>((w << (bitpos % 8)) >> (8 * i))


cdef fe fe_from_bytes(const unsigned char *data):
    # loads 255 bits little-endian; values at or above p stay unreduced,
    # which the arithmetic tolerates and canonical checks catch separately
    cdef fe r
    cdef u64 acc
    cdef int limb, i, bitpos, off
    for limb in range(5):
        acc = 0
        bitpos = 51 * limb
        for i in range(8):
            off = bitpos // 8 + i
            if off < 32:
                acc |= (<u64>data[off]) << (8 * i)
        r.v[limb] = (acc >> (bitpos % 8)) & MASK
    return r


cdef bint fe_is_zero(fe a):
    cdef unsigned char b[32]
    fe_to_bytes(b, a)
    cdef int i
    cdef unsigned char acc = 0
    for i in range(32):
        acc |= b[i]
    return acc == 0


cdef bint fe_is_neg(fe a):
    cdef unsigned char b[32]
    fe_to_bytes(b, a)
    return b[0] & 1


cdef bint fe_eq(fe a, fe b):
    return fe_is_zero(fe_sub(a, b))


cdef fe fe_neg(fe a):
    cdef fe zero
    zero.v[0] = 0; zero.v[1] = 0; zero.v[2] = 0; zero.v[3] = 0; zero.v[4] = 0
    return fe_sub(zero, a)


cdef fe fe_abs(fe a):
    if fe_is_neg(a):
        return fe_neg(a)
    return a


# curve constants, filled in at module init from the reference values
cdef fe C_D, C_D2, C_SQRT_M1, C_SQRT_AD_MINUS_ONE, C_INVSQRT_A_MINUS_D
cdef fe C_ONE_MINUS_D_SQ, C_D_MINUS_ONE_SQ, C_ONE
cdef ge G_IDENTITY, G_BASE


cdef bint fe_sqrt_ratio_m1(fe u, fe v, fe *out):
    """sqrt(u/v) into *out when u/v is square, else sqrt(SQRT_M1*u/v);
    returns whether it was square. Non-negative root either way."""
    cdef fe v3, v7, r, check
    cdef bint correct, flipped, flipped_i
    v3 = fe_mul(fe_sq(v), v)
    v7 = fe_mul(fe_sq(v3), v)
    r = fe_mul(fe_mul(u, v3), fe_pow2523(fe_mul(u, v7)))
    check = fe_mul(v, fe_sq(r))
    correct = fe_eq(check, u)
    flipped = fe_eq(check, fe_neg(u))
    flipped_i = fe_eq(check, fe_mul(fe_neg(u), C_SQRT_M1))
    if flipped or flipped_i:
        r = fe_mul(r, C_SQRT_M1)
    out[0] = fe_abs(r)
    return correct or flipped


cdef ge ge_add(ge p, ge q):
    cdef fe a, b, c, d, e, f, g, h, zz
    cdef ge r
    a = fe_mul(fe_sub(p.Y, p.X), fe_sub(q.Y, q.X))
    b = fe_mul(fe_add(p.Y, p.X), fe_add(q.Y, q.X))
    c = fe_mul(fe_mul(p.T, C_D2), q.T)
    zz = fe_mul(p.Z, q.Z)
    d = fe_add(zz, zz)
    e = fe_sub(b, a)
    f = fe_sub(d, c)
    g = fe_add(d, c)
    h = fe_add(b, a)
    r.X = fe_mul(e, f)
    r.Y = fe_mul(g, h)
    r.Z = fe_mul(f, g)
    r.T = fe_mul(e, h)
    return r


cdef ge ge_double(ge p):
    cdef fe a, b, c, e, f, g, h, zz
    cdef ge r
    a = fe_sq(p.X)
    b = fe_sq(p.Y)
    zz = fe_sq(p.Z)
    c = fe_add(zz, zz)
    e = fe_sub(fe_sub(fe_sq(fe_add(p.X, p.Y)), a), b)
    g = fe_sub(b, a)
    f = fe_sub(g, c)
    h = fe_sub(fe_neg(a), b)
    r.X = fe_mul(e, f)
    r.Y = fe_mul(g, h)
    r.Z = fe_mul(f, g)
    r.T = fe_mul(e, h)
    return r


cdef ge ge_neg(ge p):
    cdef ge r
    r.X = fe_neg(p.X)
    r.Y = p.Y
    r.Z = p.Z
    r.T = fe_neg(p.T)
    return r


cdef bint ge_eq(ge p, ge q):
    if fe_is_zero(fe_sub(fe_mul(p.X, q.Y), fe_mul(p.Y, q.X))):
        return True
    return fe_is_zero(fe_sub(fe_mul(p.Y, q.Y), fe_mul(p.X, q.X)))


cdef class Pt:
    """Opaque point handle; only this module looks inside."""
    cdef ge g


cdef Pt wrap(ge g):
    cdef Pt p = Pt.__new__(Pt)
    p.g = g
    return p


def point_add(Pt p, Pt q):
    return wrap(ge_add(p.g, q.g))


def point_double(Pt p):
    return wrap(ge_double(p.g))


def point_neg(Pt p):
    return wrap(ge_neg(p.g))


def point_eq(Pt p, Pt q):
    return bool(ge_eq(p.g, q.g))


def is_identity(Pt p):
    return bool(fe_is_zero(p.g.X) or fe_is_zero(p.g.Y))


cdef ge scalar_window(const unsigned char *kb, ge base):
    cdef ge table[16]
    cdef ge acc
    cdef int i, pos, nib
    table[0] = G_IDENTITY
    table[1] = base
    for i in range(2, 16):
        table[i] = ge_add(table[i - 1], base)
    acc = G_IDENTITY
    for pos in range(63, -1, -1):
        acc = ge_double(ge_double(ge_double(ge_double(acc))))
        nib = (kb[pos >> 1] >> (4 * (pos & 1))) & 0xF
        if nib:
            acc = ge_add(acc, table[nib])
    return acc


def point_mul(k, Pt p):
    cdef bytes kb = int(k % L).to_bytes(32, "little")
    cdef const unsigned char *pb = kb
    return wrap(scalar_window(pb, p.g))


def point_mul_base(k):
    cdef bytes kb = int(k % L).to_bytes(32, "little")
    cdef const unsigned char *pb = kb
    return wrap(scalar_window(pb, G_BASE))


def double_mul(k1, Pt p1, k2, Pt p2):
    cdef bytes kb1 = int(k1 % L).to_bytes(32, "little")
    cdef bytes kb2 = int(k2 % L).to_bytes(32, "little")
    cdef const unsigned char *b1 = kb1
    cdef const unsigned char *b2 = kb2
    cdef ge t1[16]
    cdef ge t2[16]
    cdef ge acc
    cdef int i, pos, n1, n2
    t1[0] = G_IDENTITY; t1[1] = p1.g
    t2[0] = G_IDENTITY; t2[1] = p2.g
    for i in range(2, 16):
        t1[i] = ge_add(t1[i - 1], p1.g)
        t2[i] = ge_add(t2[i - 1], p2.g)
    acc = G_IDENTITY
    for pos in range(63, -1, -1):
        acc = ge_double(ge_double(ge_double(ge_double(acc))))
        n1 = (b1[pos >> 1] >> (4 * (pos & 1))) & 0xF
        n2 = (b2[pos >> 1] >> (4 * (pos & 1))) & 0xF
        if n1:
            acc = ge_add(acc, t1[n1])
        if n2:
            acc = ge_add(acc, t2[n2])
    return wrap(acc)


def encode(Pt pt):
    cdef ge p = pt.g
    cdef fe u1, u2, invsqrt, den1, den2, z_inv, den_inv, x, y, s
    u1 = fe_mul(fe_add(p.Z, p.Y), fe_sub(p.Z, p.Y))
    u2 = fe_mul(p.X, p.Y)
    fe_sqrt_ratio_m1(C_ONE, fe_mul(u1, fe_sq(u2)), &invsqrt)
    den1 = fe_mul(invsqrt, u1)
    den2 = fe_mul(invsqrt, u2)
    z_inv = fe_mul(fe_mul(den1, den2), p.T)
    x = p.X
    y = p.Y
    if fe_is_neg(fe_mul(p.T, z_inv)):
        x = fe_mul(p.Y, C_SQRT_M1)
        y = fe_mul(p.X, C_SQRT_M1)
        den_inv = fe_mul(den1, C_INVSQRT_A_MINUS_D)
    else:
        den_inv = den2
    if fe_is_neg(fe_mul(x, z_inv)):
        y = fe_neg(y)
    s = fe_abs(fe_mul(den_inv, fe_sub(p.Z, y)))
    cdef unsigned char out[32]
    fe_to_bytes(out, s)
    return (<char *>out)[:32]


def decode(data):
    cdef bytes buf = bytes(data)
    if len(buf) != 32:
        raise ValueError("group element encoding must be 32 bytes")
    cdef const unsigned char *db = buf
    if db[0] & 1:
        raise ValueError("non-canonical group element encoding")
    cdef fe s = fe_from_bytes(db)
    cdef unsigned char back[32]
    fe_to_bytes(back, s)
    cdef int i
    for i in range(32):
        if back[i] != db[i]:
            raise ValueError("non-canonical group element encoding")
    cdef fe ss, u1, u2, u2_sqr, v, invsqrt, den_x, den_y, x, y, t
    cdef bint was_square
    ss = fe_sq(s)
    u1 = fe_sub(C_ONE, ss)
    u2 = fe_add(C_ONE, ss)
    u2_sqr = fe_sq(u2)
    v = fe_sub(fe_neg(fe_mul(C_D, fe_sq(u1))), u2_sqr)
    was_square = fe_sqrt_ratio_m1(C_ONE, fe_mul(v, u2_sqr), &invsqrt)
    den_x = fe_mul(invsqrt, u2)
    den_y = fe_mul(fe_mul(invsqrt, den_x), v)
    x = fe_abs(fe_mul(fe_add(s, s), den_x))
    y = fe_mul(u1, den_y)
    t = fe_mul(x, y)
    if (not was_square) or fe_is_neg(t) or fe_is_zero(y):
        raise ValueError("invalid group element encoding")
    cdef ge r
    r.X = x
    r.Y = y
    r.Z = C_ONE
    r.T = t
    return wrap(r)


cdef ge elligator(fe t):
    cdef fe r, u, v, s, c, n, sv, w0, w1, w2, w3
    cdef bint was_square
    r = fe_mul(C_SQRT_M1, fe_sq(t))
    u = fe_mul(fe_add(r, C_ONE), C_ONE_MINUS_D_SQ)
    v = fe_mul(fe_sub(fe_neg(C_ONE), fe_mul(r, C_D)), fe_add(r, C_D))
    was_square = fe_sqrt_ratio_m1(u, v, &s)
    if was_square:
        c = fe_neg(C_ONE)
    else:
        s = fe_neg(fe_abs(fe_mul(s, t)))
        c = r
    n = fe_sub(fe_mul(fe_mul(c, fe_sub(r, C_ONE)), C_D_MINUS_ONE_SQ), v)
    sv = fe_mul(s, v)
    w0 = fe_add(sv, sv)
    w1 = fe_mul(n, C_SQRT_AD_MINUS_ONE)
    w2 = fe_sub(C_ONE, fe_sq(s))
    w3 = fe_add(C_ONE, fe_sq(s))
    cdef ge out
    out.X = fe_mul(w0, w3)
    out.Y = fe_mul(w2, w1)
    out.Z = fe_mul(w1, w3)
    out.T = fe_mul(w0, w2)
    return out


def from_uniform(data):
    cdef bytes buf = bytes(data)
    if len(buf) != 64:
        raise ValueError("from_uniform needs exactly 64 bytes")
    cdef const unsigned char *db = buf
    cdef fe r0 = fe_from_bytes(db)
    cdef fe r1 = fe_from_bytes(db + 32)
    return wrap(ge_add(elligator(r0), elligator(r1)))


cdef fe fe_from_int(value):
    cdef bytes b = int(value % P).to_bytes(32, "little")
    cdef const unsigned char *pb = b
    return fe_from_bytes(pb)


def _init_constants():
    global C_D, C_D2, C_SQRT_M1, C_SQRT_AD_MINUS_ONE, C_INVSQRT_A_MINUS_D
    global C_ONE_MINUS_D_SQ, C_D_MINUS_ONE_SQ, C_ONE, G_IDENTITY, G_BASE
    C_ONE = fe_from_int(1)
    C_D = fe_from_int(_ref.D)
    C_D2 = fe_from_int(2 * _ref.D)
    C_SQRT_M1 = fe_from_int(_ref.SQRT_M1)
    C_SQRT_AD_MINUS_ONE = fe_from_int(_ref.SQRT_AD_MINUS_ONE)
    C_INVSQRT_A_MINUS_D = fe_from_int(_ref.INVSQRT_A_MINUS_D)
    C_ONE_MINUS_D_SQ = fe_from_int(_ref.ONE_MINUS_D_SQ)
    C_D_MINUS_ONE_SQ = fe_from_int(_ref.D_MINUS_ONE_SQ)
    G_IDENTITY.X = fe_from_int(0)
    G_IDENTITY.Y = fe_from_int(1)
    G_IDENTITY.Z = fe_from_int(1)
    G_IDENTITY.T = fe_from_int(0)
    bx, by, bz, bt = _ref.BASE
    G_BASE.X = fe_from_int(bx)
    G_BASE.Y = fe_from_int(by)
    G_BASE.Z = fe_from_int(bz)
    G_BASE.T = fe_from_int(bt)


_init_constants()

IDENTITY = wrap(G_IDENTITY)
BASE = wrap(G_BASE)
