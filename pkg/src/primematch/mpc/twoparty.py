"""Direct two-party minimum, no coordinator.

The keyholder encrypts its bits under its own key and proves, bit by
bit, that the ciphertexts carry binary digits recombining to its
registered commitment. The responder then evaluates the comparison
homomorphically, mixing in its own bits in the clear, and returns the
two rerandomized difference vectors. Only the keyholder can test slots
for zero, and it must prove the zero it claims; the responder's shuffle
and slot scalars keep the zero position meaningless to the keyholder.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import (
    Ciphertext,
    CiphertextCommitter,
    Commitment,
    PedersenParams,
    Scalar,
    default_params,
    encrypt,
    identity,
    is_zero,
    keygen,
)
from ..compare import (
    CiphertextCarrier,
    bit_decompose,
    comparison_initial,
    derive_randomness,
    slot_weight,
)
from ..errors import ProtocolAbort
from ..rand import RandomSource
from ..zkp import (
    prove_bit,
    prove_commitment_ciphertext_equal,
    prove_same_message,
    prove_some_zero,
    verify_bit,
    verify_commitment_ciphertext_equal,
    verify_same_message,
    verify_some_zero,
)
from .malicious import _check_run_size
from .messages import (
    ComparisonReply,
    KeyholderSetup,
    Outcome,
    Register,
    Reveal,
    expect,
    notify_abort,
    proof_context,
)

KEYHOLDER = "keyholder"
RESPONDER = "responder"


@dataclass
class TwoPartyResult:
    u: int  # 0 when the keyholder's value is the minimum, 1 otherwise
    minimum: int


def run_keyholder(
    channel,
    *,
    value: int,
    opening: Scalar,
    n: int,
    session: bytes,
    rng: RandomSource,
    params: PedersenParams | None = None,
    expected_responder: Commitment | None = None,
) -> TwoPartyResult:
    _check_run_size(value, n)
    params = params or default_params()
    try:
        return _keyholder_body(
            channel, value, opening, n, session, rng, params, expected_responder
        )
    except ProtocolAbort as exc:
        notify_abort((channel,), f"{KEYHOLDER}: {exc.check}")
        raise
    except Exception:
        notify_abort((channel,), f"{KEYHOLDER}: internal error")
        raise


def _keyholder_body(channel, value, opening, n, session, rng, params, expected):
    registered = expect(channel, Register, RESPONDER).commitment
    if expected is not None and registered != expected:
        raise ProtocolAbort(
            "registration mismatch", culprit=RESPONDER,
            detail="commitment differs from the order book",
        )

    keys = keygen(rng.scalar())
    scheme = CiphertextCommitter(keys.pk)
    own = params.commit(Scalar(value), opening)
    bits = bit_decompose(value, n)
    noise = [rng.scalar() for _ in range(n)]
    encrypted = [encrypt(keys.pk, Scalar(bits[j]), noise[j]) for j in range(n)]

    lifted = Ciphertext(identity(), identity())
    noise_total = Scalar(0)
    for j in range(n):
        w = slot_weight(j, n)
        lifted = lifted * encrypted[j] ** w
        noise_total = noise_total + noise[j] * Scalar(w)
    sum_proof = prove_commitment_ciphertext_equal(
        params, keys.pk, own, lifted, Scalar(value), opening, noise_total,
        proof_context(session, b"lift"), rng,
    )
    bit_proofs = [
        prove_bit(
            scheme, encrypted[j], bits[j], noise[j],
            proof_context(session, b"ctbit", j), rng,
        )
        for j in range(n)
    ]
    channel.send(
        KeyholderSetup(keys.pk, own, encrypted, sum_proof, bit_proofs).encode()
    )

    reply = expect(channel, ComparisonReply, RESPONDER)
    if len(reply.d0) != n + 1 or len(reply.d1) != n + 1:
        raise ProtocolAbort("reply shape", culprit=RESPONDER)
    zeros0 = [j for j in range(n + 1) if is_zero(keys.sk, reply.d0[j])]
    zeros1 = [j for j in range(n + 1) if is_zero(keys.sk, reply.d1[j])]

    # Honest vectors carry exactly one zero: in one vector on a strict
    # ordering, in both at the same slot on a tie. Anything else means
    # the responder tampered with the evaluation.
    if len(zeros0) > 1 or len(zeros1) > 1 or not (zeros0 or zeros1):
        raise ProtocolAbort("zero pattern", culprit=RESPONDER)
    if zeros0 and zeros1 and zeros0 != zeros1:
        raise ProtocolAbort("zero pattern", culprit=RESPONDER)
    u = 0 if zeros0 else 1
    claimed = (reply.d0, reply.d1)[u]
    idx = (zeros0 or zeros1)[0]
    proof = prove_some_zero(
        keys.pk, keys.sk, claimed, idx, proof_context(session, b"outcome", u), rng
    )
    reveal = None
    if u == 0:
        fresh = rng.scalar()
        stated = params.commit(Scalar(value), fresh)
        link = prove_same_message(
            params, own, stated, opening, fresh,
            proof_context(session, b"keyholder-reveal"), rng,
        )
        reveal = Reveal(value, fresh, stated, link)
    channel.send(Outcome(u, proof, reveal).encode())
    if u == 0:
        return TwoPartyResult(0, value)

    rv = expect(channel, Reveal, RESPONDER)
    if rv.commitment != params.commit(Scalar(rv.value), rv.fresh):
        raise ProtocolAbort("reveal opening", culprit=RESPONDER)
    if not verify_same_message(
        params, registered, rv.commitment, rv.proof,
        proof_context(session, b"responder-reveal"),
    ):
        raise ProtocolAbort("reveal binding", culprit=RESPONDER)
    if rv.value >= value:
        raise ProtocolAbort("revealed minimum not smaller", culprit=RESPONDER)
    return TwoPartyResult(1, rv.value)


def run_responder(
    channel,
    *,
    value: int,
    opening: Scalar,
    n: int,
    session: bytes,
    rng: RandomSource,
    params: PedersenParams | None = None,
    expected_keyholder: Commitment | None = None,
) -> TwoPartyResult:
    _check_run_size(value, n)
    params = params or default_params()
    try:
        return _responder_body(
            channel, value, opening, n, session, rng, params, expected_keyholder
        )
    except ProtocolAbort as exc:
        notify_abort((channel,), f"{RESPONDER}: {exc.check}")
        raise
    except Exception:
        notify_abort((channel,), f"{RESPONDER}: internal error")
        raise


def _responder_body(channel, value, opening, n, session, rng, params, expected):
    own = params.commit(Scalar(value), opening)
    channel.send(Register(own).encode())

    setup = expect(channel, KeyholderSetup, KEYHOLDER)
    if expected is not None and setup.commitment != expected:
        raise ProtocolAbort(
            "registration mismatch", culprit=KEYHOLDER,
            detail="commitment differs from the order book",
        )
    if len(setup.bits) != n or len(setup.bit_proofs) != n:
        raise ProtocolAbort("setup shape", culprit=KEYHOLDER)
    scheme = CiphertextCommitter(setup.pk)
    lifted = Ciphertext(identity(), identity())
    for j in range(n):
        lifted = lifted * setup.bits[j] ** slot_weight(j, n)
    if not verify_commitment_ciphertext_equal(
        params, setup.pk, setup.commitment, lifted, setup.sum_proof,
        proof_context(session, b"lift"),
    ):
        raise ProtocolAbort("value lift", culprit=KEYHOLDER)
    for j in range(n):
        if not verify_bit(
            scheme, setup.bits[j], setup.bit_proofs[j],
            proof_context(session, b"ctbit", j),
        ):
            raise ProtocolAbort("ciphertext bit", culprit=KEYHOLDER, detail=f"bit {j}")

    carrier = CiphertextCarrier(setup.pk, rng)
    rnd = derive_randomness(rng.read(32), n)
    mine = [carrier.lift(b) for b in bit_decompose(value, n)]
    d0, d1 = comparison_initial(carrier, setup.bits, mine, rnd)
    channel.send(ComparisonReply(d0, d1).encode())

    outcome = expect(channel, Outcome, KEYHOLDER)
    statement = (d0, d1)[outcome.u]
    if not verify_some_zero(
        setup.pk, statement, outcome.proof,
        proof_context(session, b"outcome", outcome.u),
    ):
        raise ProtocolAbort("outcome proof", culprit=KEYHOLDER)
    if outcome.u == 0:
        rv = outcome.reveal
        if rv is None:
            raise ProtocolAbort("missing reveal", culprit=KEYHOLDER)
        if rv.commitment != params.commit(Scalar(rv.value), rv.fresh):
            raise ProtocolAbort("reveal opening", culprit=KEYHOLDER)
        if not verify_same_message(
            params, setup.commitment, rv.commitment, rv.proof,
            proof_context(session, b"keyholder-reveal"),
        ):
            raise ProtocolAbort("reveal binding", culprit=KEYHOLDER)
        if rv.value > value:
            raise ProtocolAbort("revealed minimum too large", culprit=KEYHOLDER)
        return TwoPartyResult(0, rv.value)

    fresh = rng.scalar()
    stated = params.commit(Scalar(value), fresh)
    link = prove_same_message(
        params, own, stated, opening, fresh,
        proof_context(session, b"responder-reveal"), rng,
    )
    channel.send(Reveal(value, fresh, stated, link).encode())
    return TwoPartyResult(1, value)
