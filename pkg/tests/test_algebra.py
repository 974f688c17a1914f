"""Group, Pedersen, and ElGamal tests.

The absolute anchors are the published ristretto255 vectors: the generator
encoding, the first few small multiples, and one hash-to-group output. If
those hold and the algebraic laws hold, the rest of the stack can trust the
encodings byte for byte.
"""

import hashlib
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primematch.algebra import (
    ENCODED_LEN,
    ORDER,
    Ciphertext,
    CiphertextCommitter,
    GroupElement,
    Opening,
    Scalar,
    base_exp,
    default_params,
    double_exp,
    encrypt,
    generator,
    hash_to_group,
    identity,
    is_zero,
    keygen,
    rerandomize,
)
from primematch.algebra import backend, reference
from primematch.rand import RandomSource

GENERATOR_HEX = "e2f2ae0a6abc4e71a884a961c500515f58e30b6aa582dd8db6a65945e08d2d76"

SMALL_MULTIPLES = [
    "0000000000000000000000000000000000000000000000000000000000000000",
    GENERATOR_HEX,
    "6a493210f7499cd17fecb510ae0cea23a110e8d5b901f8acadd3095c73a3b919",
    "94741f5d5d52755ece4f23f044ee27d5d1ea1e2bd196b462166b16152a9d0259",
    "da80862773358b466ffadfe0b3293ab3d9fd53c5ea6c955358f568322daf6a57",
]

scalars = st.integers(min_value=0, max_value=ORDER - 1)


def test_generator_encoding_pinned():
    assert generator().encode().hex() == GENERATOR_HEX


def test_small_multiples_pinned():
    for k, want in enumerate(SMALL_MULTIPLES):
        assert base_exp(Scalar(k)).encode().hex() == want


def test_one_way_map_pinned():
    uniform = hashlib.sha512(
        b"Ristretto is traditionally a short shot of espresso coffee"
    ).digest()
    got = GroupElement(backend.impl.from_uniform(uniform)).encode().hex()
    assert got == "3066f82a1a747d45120d1740f14358531a8f04bbffe6a819f86dfe50f44a0a46"


@pytest.mark.parametrize(
    "bad",
    [
        b"\xff" * 32,
        b"\x01" + b"\x00" * 31,  # negative s
        reference.P.to_bytes(32, "little"),
        (reference.P + 3).to_bytes(32, "little"),
        (2**255 - 1).to_bytes(32, "little"),
    ],
)
def test_decode_rejects_noncanonical(bad):
    with pytest.raises(ValueError):
        GroupElement.decode(bad)


def test_decode_rejects_wrong_length():
    with pytest.raises(ValueError):
        GroupElement.decode(b"\x00" * 31)


@given(scalars)
@settings(max_examples=50, deadline=None)
def test_encode_decode_roundtrip(k):
    p = base_exp(Scalar(k))
    enc = p.encode()
    assert len(enc) == ENCODED_LEN
    assert GroupElement.decode(enc) == p
    assert GroupElement.decode(enc).encode() == enc


@given(scalars, scalars)
@settings(max_examples=50, deadline=None)
def test_exponent_laws(a, b):
    g = generator()
    assert g ** Scalar(a) * g ** Scalar(b) == g ** (Scalar(a) + Scalar(b))
    assert (g ** Scalar(a)) ** Scalar(b) == g ** (Scalar(a) * Scalar(b))
    assert g ** Scalar(a) / g ** Scalar(b) == g ** (Scalar(a) - Scalar(b))


def test_identity_behaviour():
    g = generator()
    assert (g * identity()) == g
    assert (g / g).is_identity()
    assert identity().encode() == b"\x00" * 32
    assert (g ** 0).is_identity()
    assert g ** ORDER == identity()


def test_double_exp_matches_split():
    rng = RandomSource.from_seed(b"test-double-exp")
    h = hash_to_group(b"another base")
    for _ in range(10):
        a, b = rng.scalar(), rng.scalar()
        assert double_exp(a, generator(), b, h) == generator() ** a * h ** b


@given(scalars, scalars)
@settings(max_examples=50, deadline=None)
def test_scalar_field(a, b):
    x, y = Scalar(a), Scalar(b)
    assert int(x + y) == (a + b) % ORDER
    assert int(x * y) == (a * b) % ORDER
    assert int(-x) == (-a) % ORDER
    if a != 0:
        assert int(x * x.inverse()) == 1
    assert Scalar.from_bytes(x.to_bytes()) == x


def test_scalar_encoding_canonical():
    with pytest.raises(ValueError):
        Scalar.from_bytes(ORDER.to_bytes(32, "little"))
    with pytest.raises(ValueError):
        Scalar.from_bytes(b"\xff" * 32)
    with pytest.raises(ValueError):
        Scalar.from_bytes(b"\x00" * 16)
    wide = hashlib.shake_256(b"wide reduction input").digest(64)
    assert int(Scalar.from_bytes_wide(wide)) == int.from_bytes(wide, "little") % ORDER


def test_scalar_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        Scalar(0).inverse()


def test_hash_to_group_deterministic_and_spread():
    a = hash_to_group(b"input-a")
    assert a == hash_to_group(b"input-a")
    assert a != hash_to_group(b"input-b")
    assert not a.is_identity()


def test_pedersen_bases_independent():
    params = default_params()
    assert params.h != params.g
    # h must not be a small known power of g
    acc = identity()
    for _ in range(1000):
        acc = acc * params.g
        assert acc != params.h


def test_pedersen_homomorphism_exact_encodings():
    params = default_params()
    rng = RandomSource.from_seed(b"test-pedersen")
    for _ in range(20):
        o1 = Opening(rng.scalar(), rng.scalar())
        o2 = Opening(rng.scalar(), rng.scalar())
        c1, c2 = params.commit_opening(o1), params.commit_opening(o2)
        assert (c1 * c2).encode() == params.commit_opening(o1 * o2).encode()
        assert (c1 / c2).encode() == params.commit_opening(o1 / o2).encode()
        k = rng.scalar()
        assert (c1 ** k).encode() == params.commit_opening(o1 ** k).encode()


def test_pedersen_verify():
    params = default_params()
    o = Opening(Scalar(42), Scalar(777))
    c = params.commit_opening(o)
    assert params.verify(c, o)
    assert not params.verify(c, Opening(Scalar(43), Scalar(777)))
    assert not params.verify(c, Opening(Scalar(42), Scalar(778)))


def test_pedersen_hiding_randomizes():
    params = default_params()
    rng = RandomSource.from_seed(b"test-hiding")
    seen = {params.commit(Scalar(1), rng.scalar()).encode() for _ in range(50)}
    assert len(seen) == 50


def test_elgamal_zero_test():
    kp = keygen(Scalar(987654321))
    assert is_zero(kp.sk, encrypt(kp.pk, Scalar(0), Scalar(5)))
    assert not is_zero(kp.sk, encrypt(kp.pk, Scalar(1), Scalar(5)))
    assert not is_zero(kp.sk, encrypt(kp.pk, Scalar(-1), Scalar(5)))


def test_elgamal_homomorphism():
    kp = keygen(Scalar(24680))
    rng = RandomSource.from_seed(b"test-elgamal")
    a = encrypt(kp.pk, Scalar(7), rng.scalar())
    b = encrypt(kp.pk, Scalar(-7), rng.scalar())
    assert is_zero(kp.sk, a * b)
    assert is_zero(kp.sk, (a * b) ** rng.scalar())
    assert not is_zero(kp.sk, a ** 2 * b)
    # ciphertext encodes and decodes
    assert Ciphertext.decode(a.encode()) == a


def test_elgamal_rerandomize_keeps_plaintext():
    kp = keygen(Scalar(1357))
    ct = encrypt(kp.pk, Scalar(0), Scalar(999))
    ct2 = rerandomize(kp.pk, ct, Scalar(1000))
    assert ct2 != ct
    assert is_zero(kp.sk, ct2)


def test_ciphertext_committer_matches_encrypt():
    kp = keygen(Scalar(11111))
    committer = CiphertextCommitter(kp.pk)
    o = Opening(Scalar(3), Scalar(4))
    c = committer.commit_opening(o)
    assert c == encrypt(kp.pk, Scalar(3), Scalar(4))
    assert committer.verify(c, o)
    assert not committer.verify(c, Opening(Scalar(3), Scalar(5)))


@pytest.mark.skipif(not backend.HAVE_COMPILED, reason="compiled kernel not built")
def test_backends_agree():
    from primematch.algebra import _core

    rng = RandomSource.from_seed(b"test-backend-agreement")
    for _ in range(50):
        k1 = int(rng.scalar())
        k2 = int(rng.scalar())
        seed = rng.read(64)
        pr = reference.point_mul(k1, reference.BASE)
        pc = _core.point_mul(k1, _core.BASE)
        assert reference.encode(pr) == _core.encode(pc)
        hr, hc = reference.from_uniform(seed), _core.from_uniform(seed)
        assert reference.encode(hr) == _core.encode(hc)
        assert reference.encode(reference.double_mul(k1, pr, k2, hr)) == _core.encode(
            _core.double_mul(k1, pc, k2, hc)
        )
        assert reference.encode(reference.point_add(pr, hr)) == _core.encode(
            _core.point_add(pc, hc)
        )
        enc = reference.encode(pr)
        assert _core.point_eq(_core.decode(enc), pc)
        assert reference.point_eq(reference.decode(enc), pr)


def test_pure_group_env_forces_reference():
    code = (
        "from primematch.algebra import backend; "
        "print(backend.impl.NAME, backend.HAVE_COMPILED)"
    )
    env = dict(os.environ, PRIMEMATCH_PURE_GROUP="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.split() == ["reference", "False"]
