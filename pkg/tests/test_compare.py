"""Comparison-vector tests.

The worked example (v0=2, v1=1, n=2, no shuffle, unit scalars) pins the
exact slot values (2, 4, -4) and (0, 2, -4). Everything else checks the
zero-membership semantics against plain integer comparison and the
slotwise coherence of the share, commitment, and ciphertext carriers.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primematch.algebra import Scalar, default_params, encrypt, is_zero, keygen
from primematch.compare import (
    CiphertextCarrier,
    CommitmentCarrier,
    ComparisonRandomness,
    ScalarCarrier,
    bit_decompose,
    bit_recompose,
    bound_fits_group,
    comparison_final,
    comparison_initial,
    derive_randomness,
    slot_weight,
    working_bound,
)
from primematch.rand import RandomSource

from oracles import comparison_vectors_int, compare_oracle

params = default_params()


def identity_randomness(n):
    return ComparisonRandomness(
        list(range(n + 1)), [Scalar(1)] * (n + 1), [Scalar(1)] * (n + 1)
    )


def scalar_bits(v, n):
    return [Scalar(b) for b in bit_decompose(v, n)]


def test_worked_example_slots():
    c0, c1 = comparison_initial(
        ScalarCarrier(True), scalar_bits(2, 2), scalar_bits(1, 2), identity_randomness(2)
    )
    assert c0 == [Scalar(2), Scalar(4), Scalar(-4)]
    assert c1 == [Scalar(0), Scalar(2), Scalar(-4)]
    assert not comparison_final(c0)
    assert comparison_final(c1)


def test_matches_integer_oracle():
    rng = RandomSource.from_seed(b"oracle-match")
    n = 12
    for _ in range(50):
        v0 = int.from_bytes(rng.read(2), "little") % (1 << n)
        v1 = int.from_bytes(rng.read(2), "little") % (1 << n)
        want0, want1 = comparison_vectors_int(bit_decompose(v0, n), bit_decompose(v1, n))
        c0, c1 = comparison_initial(
            ScalarCarrier(True), scalar_bits(v0, n), scalar_bits(v1, n),
            identity_randomness(n),
        )
        assert c0 == [Scalar(w) for w in want0]
        assert c1 == [Scalar(w) for w in want1]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exhaustive_against_comparison(n):
    ops = ScalarCarrier(True)
    for v0 in range(1 << n):
        for v1 in range(1 << n):
            rnd = derive_randomness(f"{n}/{v0}/{v1}".encode(), n)
            c0, c1 = comparison_initial(
                ops, scalar_bits(v0, n), scalar_bits(v1, n), rnd
            )
            assert (comparison_final(c0), comparison_final(c1)) == compare_oracle(v0, v1)


def test_no_zero_on_strict_greater():
    rng = RandomSource.from_seed(b"strict-greater")
    n = 16
    for _ in range(200):
        v1 = int.from_bytes(rng.read(4), "little") % ((1 << n) - 1)
        v0 = v1 + 1 + int.from_bytes(rng.read(4), "little") % ((1 << n) - v1 - 1)
        rnd = derive_randomness(rng.read(16), n)
        c0, _ = comparison_initial(
            ScalarCarrier(True), scalar_bits(v0, n), scalar_bits(v1, n), rnd
        )
        assert not comparison_final(c0)


def test_share_halves_sum_to_plain():
    rng = RandomSource.from_seed(b"halves")
    n = 9
    v0, v1 = 385, 212
    rnd = derive_randomness(b"halves-seed", n)
    x, y = scalar_bits(v0, n), scalar_bits(v1, n)
    x0 = [rng.scalar() for _ in range(n)]
    y0 = [rng.scalar() for _ in range(n)]
    x1 = [x[j] - x0[j] for j in range(n)]
    y1 = [y[j] - y0[j] for j in range(n)]
    half0 = comparison_initial(ScalarCarrier(True), x0, y0, rnd)
    half1 = comparison_initial(ScalarCarrier(False), x1, y1, rnd)
    full = comparison_initial(ScalarCarrier(True), x, y, rnd)
    for i in range(2):
        assert [a + b for a, b in zip(half0[i], half1[i])] == full[i]


def test_commitment_carrier_tracks_openings():
    rng = RandomSource.from_seed(b"commitment-carrier")
    n = 7
    v0, v1 = 99, 99  # tie keeps both zero paths alive
    rnd = derive_randomness(b"cc-seed", n)
    x, y = scalar_bits(v0, n), scalar_bits(v1, n)
    rx = [rng.scalar() for _ in range(n)]
    ry = [rng.scalar() for _ in range(n)]
    cx = [params.commit(x[j], rx[j]).value for j in range(n)]
    cy = [params.commit(y[j], ry[j]).value for j in range(n)]
    com = comparison_initial(CommitmentCarrier(params, True), cx, cy, rnd)
    ran = comparison_initial(ScalarCarrier(False), rx, ry, rnd)
    val = comparison_initial(ScalarCarrier(True), x, y, rnd)
    for i in range(2):
        for k in range(n + 1):
            assert com[i][k] == params.commit(val[i][k], ran[i][k]).value


def test_ciphertext_carrier_zero_pattern():
    rng = RandomSource.from_seed(b"ciphertext-carrier")
    kp = keygen(rng.scalar())
    n = 6
    for v0, v1 in [(17, 40), (40, 17), (33, 33)]:
        rnd = derive_randomness(f"ct/{v0}/{v1}".encode(), n)
        carrier = CiphertextCarrier(kp.pk, rng)
        ax = [encrypt(kp.pk, s, rng.scalar()) for s in scalar_bits(v0, n)]
        ay = [carrier.lift(b) for b in bit_decompose(v1, n)]
        ct0, ct1 = comparison_initial(carrier, ax, ay, rnd)
        val0, val1 = comparison_initial(
            ScalarCarrier(True), scalar_bits(v0, n), scalar_bits(v1, n), rnd
        )
        assert [is_zero(kp.sk, c) for c in ct0] == [s.is_zero() for s in val0]
        assert [is_zero(kp.sk, c) for c in ct1] == [s.is_zero() for s in val1]


def test_derive_randomness_pinned():
    rnd = derive_randomness(b"fixed-seed", 7)
    assert rnd.pi == [3, 0, 5, 2, 6, 7, 4, 1]
    assert rnd.s0[0].to_bytes().hex().startswith("f37ac90619ed4903")
    again = derive_randomness(b"fixed-seed", 7)
    assert rnd.pi == again.pi and rnd.s0 == again.s0 and rnd.s1 == again.s1
    assert derive_randomness(b"other-seed", 7).pi != rnd.pi


@given(st.binary(min_size=0, max_size=40), st.integers(min_value=1, max_value=40))
@settings(max_examples=60, deadline=None)
def test_derive_randomness_shape(seed, n):
    rnd = derive_randomness(seed, n)
    assert sorted(rnd.pi) == list(range(n + 1))
    assert len(rnd.s0) == len(rnd.s1) == n + 1
    assert all(not s.is_zero() for s in rnd.s0 + rnd.s1)


def test_randomness_size_checked():
    with pytest.raises(ValueError):
        comparison_initial(
            ScalarCarrier(True), scalar_bits(1, 2), scalar_bits(1, 2),
            identity_randomness(3),
        )


def test_bit_helpers():
    assert bit_decompose(5, 4) == [0, 1, 0, 1]
    assert bit_recompose([0, 1, 0, 1]) == 5
    assert bit_recompose(bit_decompose(200, 8)) == 200
    assert slot_weight(0, 8) == 128
    assert slot_weight(7, 8) == 1
    with pytest.raises(ValueError):
        bit_decompose(16, 4)
    with pytest.raises(ValueError):
        bit_decompose(-1, 4)


def test_working_bound():
    assert working_bound(2) == 14
    assert bound_fits_group(31)
    assert bound_fits_group(250)
    assert not bound_fits_group(251)
