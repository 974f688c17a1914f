"""Server-aided minimum with cheating detection.

Two clients hold committed values; an untrusted coordinator learns
which is smaller (and the minimum itself) while every step a party
depends on is checked. The work is all linear: each party splits its
bits into additive halves and commits to both, the comparison vectors
are affine in those halves, and the coordinator cross-checks each
client's reconstructed shares against the commitment-side pass the
other client computed. The coordinator proves its verdict back to each
winner with a zero-position proof over the recombined commitment
vector, and the losing side receives the minimum bound to the winner's
registered commitment.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import Commitment, PedersenParams, Scalar, default_params, identity
from ..compare import (
    CommitmentCarrier,
    ScalarCarrier,
    bit_decompose,
    bound_fits_group,
    comparison_final,
    comparison_initial,
    derive_randomness,
    slot_weight,
)
from ..errors import ProtocolAbort
from ..rand import RandomSource
from ..zkp import (
    prove_bit,
    prove_same_message,
    prove_value_unchecked,
    prove_zero_position,
    verify_bit,
    verify_same_message,
    verify_zero_position,
)
from .adversary import AdversaryConfig, fold_to_nonbit
from .cointoss import toss_follow, toss_lead
from .messages import (
    Counterparty,
    MinForward,
    Register,
    Result,
    Reveal,
    ShareBundle,
    SharePackage,
    expect,
    notify_abort,
    proof_context,
)

ROLE_NAMES = ("client-0", "client-1")
SERVER = "server"


@dataclass
class ClientResult:
    won: bool
    minimum: int


@dataclass
class ServerResult:
    wins: tuple[bool, bool]
    minimum: int
    winner: int | None  # None on a tie


def _check_run_size(value: int, n: int) -> None:
    if n < 1 or n > 63:
        raise ValueError("bit width out of range")
    if not bound_fits_group(n):
        raise ValueError("working values would not fit the group")
    if not 0 <= value < (1 << n):
        raise ValueError("value out of range for the bit width")


def run_client(
    server_channel,
    peer_channel,
    *,
    role: int,
    value: int,
    opening: Scalar,
    n: int,
    session: bytes,
    rng: RandomSource,
    params: PedersenParams | None = None,
    adversary: AdversaryConfig | None = None,
    expected_counterparty: Commitment | None = None,
    shared_seed: bytes | None = None,
) -> ClientResult:
    """One committed comparison. When a pair of clients runs many of
    these in one sitting they toss coins once and pass per-run seeds via
    shared_seed; left as None, the clients toss coins themselves."""
    _check_run_size(value, n)
    params = params or default_params()
    adv = adversary or AdversaryConfig()
    me, peer = ROLE_NAMES[role], ROLE_NAMES[1 - role]
    try:
        return _client_body(
            server_channel, peer_channel, role, value, opening, n, session,
            rng, params, adv, expected_counterparty, peer, shared_seed,
        )
    except ProtocolAbort as exc:
        notify_abort((server_channel, peer_channel), f"{me}: {exc.check}")
        raise
    except Exception:
        notify_abort((server_channel, peer_channel), f"{me}: internal error")
        raise


def _client_body(
    server_channel, peer_channel, role, value, opening, n, session,
    rng, params, adv, expected_counterparty, peer, shared_seed,
):
    own = params.commit(Scalar(value), opening)
    registered = own
    if adv.wrong_registration:
        registered = params.commit(Scalar(value + 1), opening)
    server_channel.send(Register(registered).encode())
    other = expect(server_channel, Counterparty, SERVER).commitment
    if expected_counterparty is not None and other != expected_counterparty:
        raise ProtocolAbort(
            "counterparty registration", culprit=SERVER,
            detail="forwarded commitment does not match the order book",
        )

    if shared_seed is not None:
        seed = shared_seed
    elif role == 0:
        seed = toss_lead(peer_channel, peer, rng)
    else:
        seed = toss_follow(peer_channel, peer, rng)
    rnd = derive_randomness(seed, n)

    # Split own bits and their commitment randomness into halves, one per
    # client, and commit to every half. The counterparty gets its halves
    # in the clear plus proofs that the committed digits are bits and
    # recombine to the registered value.
    bits = bit_decompose(value, n)
    if adv.nonbit_value:
        bits = fold_to_nonbit(bits)
    half0 = [rng.scalar() for _ in range(n)]
    half1 = [Scalar(bits[j]) - half0[j] for j in range(n)]
    rho0 = [rng.scalar() for _ in range(n)]
    rho1 = [rng.scalar() for _ in range(n)]
    commits0 = [params.commit(half0[j], rho0[j]) for j in range(n)]
    commits1 = [params.commit(half1[j], rho1[j]) for j in range(n)]

    bit_commit = [commits0[j] * commits1[j] for j in range(n)]
    total = Commitment(identity())
    r_total = Scalar(0)
    for j in range(n):
        w = slot_weight(j, n)
        total = total * bit_commit[j] ** w
        r_total = r_total + (rho0[j] + rho1[j]) * Scalar(w)
    sum_proof = prove_same_message(
        params, own, total, opening, r_total,
        proof_context(session, b"sum", role), rng,
    )
    bit_proofs = []
    for j in range(n):
        ctx = proof_context(session, b"bit", role, j)
        rho = rho0[j] + rho1[j]
        if bits[j] in (0, 1):
            bit_proofs.append(prove_bit(params, bit_commit[j], bits[j], rho, ctx, rng))
        else:
            bit_proofs.append(
                prove_value_unchecked(params, bit_commit[j], Scalar(bits[j]), rho, ctx, rng)
            )

    keep_h, keep_r = (half0, rho0) if role == 0 else (half1, rho1)
    send_h, send_r = (half1, rho1) if role == 0 else (half0, rho0)
    peer_channel.send(
        ShareBundle(send_h, send_r, commits0, commits1, sum_proof, bit_proofs).encode()
    )
    theirs = expect(peer_channel, ShareBundle, peer, params=params)
    if not (
        len(theirs.halves) == len(theirs.openings) == len(theirs.commits0)
        == len(theirs.commits1) == len(theirs.bit_proofs) == n
    ):
        raise ProtocolAbort("share bundle shape", culprit=peer)

    their_sets = (theirs.commits0, theirs.commits1)
    for j in range(n):
        if their_sets[role][j] != params.commit(theirs.halves[j], theirs.openings[j]):
            raise ProtocolAbort("share opening", culprit=peer, detail=f"bit {j}")
    their_bit_commit = [theirs.commits0[j] * theirs.commits1[j] for j in range(n)]
    their_total = Commitment(identity())
    for j in range(n):
        their_total = their_total * their_bit_commit[j] ** slot_weight(j, n)
    if not verify_same_message(
        params, other, their_total, theirs.sum_proof,
        proof_context(session, b"sum", 1 - role),
    ):
        raise ProtocolAbort("bit recomposition", culprit=peer)
    for j in range(n):
        if not verify_bit(
            params, their_bit_commit[j], theirs.bit_proofs[j],
            proof_context(session, b"bit", 1 - role, j),
        ):
            raise ProtocolAbort("bit range", culprit=peer, detail=f"bit {j}")

    # Three passes under the same derived randomness: values, commitment
    # randomness, and the commitment-side image of the other client's
    # halves. Input order is always (party 0, party 1).
    my_sets = (commits0, commits1)
    if role == 0:
        x_vals, y_vals = keep_h, theirs.halves
        x_rand, y_rand = keep_r, theirs.openings
        x_sets, y_sets = my_sets, their_sets
    else:
        x_vals, y_vals = theirs.halves, keep_h
        x_rand, y_rand = theirs.openings, keep_r
        x_sets, y_sets = their_sets, my_sets
    cross = 1 - role
    x_cross = [c.value for c in x_sets[cross]]
    y_cross = [c.value for c in y_sets[cross]]

    d0, d1 = comparison_initial(ScalarCarrier(role == 0), x_vals, y_vals, rnd)
    s0, s1 = comparison_initial(ScalarCarrier(False), x_rand, y_rand, rnd)
    e0, e1 = comparison_initial(
        CommitmentCarrier(params, cross == 0), x_cross, y_cross, rnd
    )
    if adv.flip_d_share:
        d0 = [d0[0] + Scalar(1)] + d0[1:]
    server_channel.send(
        SharePackage(
            d0, d1, s0, s1,
            [Commitment(e) for e in e0], [Commitment(e) for e in e1],
        ).encode()
    )

    verdict = expect(server_channel, Result, SERVER)
    d_mine, s_mine, e_mine = (d0, s0, e0) if role == 0 else (d1, s1, e1)
    if verdict.win:
        statement = [
            params.commit(d_mine[j], s_mine[j]) * Commitment(e_mine[j])
            for j in range(n + 1)
        ]
        if not verify_zero_position(
            params, statement, verdict.proof,
            proof_context(session, b"result", role),
        ):
            raise ProtocolAbort("result proof", culprit=SERVER)
        fresh = rng.scalar()
        stated = params.commit(Scalar(value), fresh)
        link = prove_same_message(
            params, own, stated, opening, fresh,
            proof_context(session, b"reveal", role), rng,
        )
        server_channel.send(Reveal(value, fresh, stated, link).encode())
        return ClientResult(won=True, minimum=value)

    fwd = expect(server_channel, MinForward, SERVER)
    if fwd.commitment != params.commit(Scalar(fwd.value), fwd.fresh):
        raise ProtocolAbort("forwarded opening", culprit=SERVER)
    if not verify_same_message(
        params, other, fwd.commitment, fwd.proof,
        proof_context(session, b"reveal", 1 - role),
    ):
        raise ProtocolAbort("forwarded binding", culprit=SERVER)
    if fwd.value > value:
        raise ProtocolAbort("forwarded minimum too large", culprit=SERVER)
    return ClientResult(won=False, minimum=fwd.value)


def run_server(
    channel0,
    channel1,
    *,
    n: int,
    session: bytes,
    rng: RandomSource,
    params: PedersenParams | None = None,
    adversary: AdversaryConfig | None = None,
    expected: tuple[Commitment, Commitment] | None = None,
) -> ServerResult:
    params = params or default_params()
    adv = adversary or AdversaryConfig()
    try:
        return _server_body(channel0, channel1, n, session, rng, params, adv, expected)
    except ProtocolAbort as exc:
        notify_abort((channel0, channel1), f"{SERVER}: {exc.check}")
        raise
    except Exception:
        notify_abort((channel0, channel1), f"{SERVER}: internal error")
        raise


def _server_body(channel0, channel1, n, session, rng, params, adv, expected):
    reg0 = expect(channel0, Register, ROLE_NAMES[0]).commitment
    reg1 = expect(channel1, Register, ROLE_NAMES[1]).commitment
    if expected is not None:
        for role, got, want in ((0, reg0, expected[0]), (1, reg1, expected[1])):
            if got != want:
                raise ProtocolAbort(
                    "registration mismatch", culprit=ROLE_NAMES[role],
                    detail="commitment differs from the order book",
                )
    channel0.send(Counterparty(reg1).encode())
    channel1.send(Counterparty(reg0).encode())

    pkg0 = expect(channel0, SharePackage, ROLE_NAMES[0])
    pkg1 = expect(channel1, SharePackage, ROLE_NAMES[1])
    for pkg, who in ((pkg0, 0), (pkg1, 1)):
        vecs = (pkg.d0, pkg.d1, pkg.s0, pkg.s1, pkg.other0, pkg.other1)
        if any(len(v) != n + 1 for v in vecs):
            raise ProtocolAbort("share package shape", culprit=ROLE_NAMES[who])

    # Each client's plain shares must recommit to the vector the other
    # client computed from the half commitments. A manipulated share
    # breaks exactly the sender's side of this pairing.
    for who, mine, cross in ((0, pkg0, pkg1), (1, pkg1, pkg0)):
        for tag, d, s, image in (
            (0, mine.d0, mine.s0, cross.other0),
            (1, mine.d1, mine.s1, cross.other1),
        ):
            for j in range(n + 1):
                if params.commit(d[j], s[j]) != image[j]:
                    raise ProtocolAbort(
                        "share consistency", culprit=ROLE_NAMES[who],
                        detail=f"vector {tag} slot {j}",
                    )

    d_full = (
        [a + b for a, b in zip(pkg0.d0, pkg1.d0)],
        [a + b for a, b in zip(pkg0.d1, pkg1.d1)],
    )
    s_full = (
        [a + b for a, b in zip(pkg0.s0, pkg1.s0)],
        [a + b for a, b in zip(pkg0.s1, pkg1.s1)],
    )
    wins = (comparison_final(d_full[0]), comparison_final(d_full[1]))
    if not (wins[0] or wins[1]):
        raise ProtocolAbort("no comparison verdict", detail="both vectors nonzero")

    for role, channel in ((0, channel0), (1, channel1)):
        if adv.lie_about_bit and role == 0 and not wins[0]:
            fake = _fabricated_win(params, n, session, role, rng)
            channel.send(fake.encode())
            continue
        if wins[role]:
            d, s = d_full[role], s_full[role]
            idx = next(j for j in range(n + 1) if d[j].is_zero())
            recombined = [params.commit(d[j], s[j]) for j in range(n + 1)]
            proof = prove_zero_position(
                params, recombined, idx, s[idx],
                proof_context(session, b"result", role), rng,
            )
            channel.send(Result(True, proof).encode())
        else:
            channel.send(Result(False, None).encode())

    reveals: dict[int, Reveal] = {}
    for role, channel, registered in ((0, channel0, reg0), (1, channel1, reg1)):
        if not wins[role]:
            continue
        rv = expect(channel, Reveal, ROLE_NAMES[role])
        if rv.commitment != params.commit(Scalar(rv.value), rv.fresh):
            raise ProtocolAbort("reveal opening", culprit=ROLE_NAMES[role])
        if not verify_same_message(
            params, registered, rv.commitment, rv.proof,
            proof_context(session, b"reveal", role),
        ):
            raise ProtocolAbort("reveal binding", culprit=ROLE_NAMES[role])
        reveals[role] = rv

    if wins[0] and wins[1]:
        if reveals[0].value != reveals[1].value:
            raise ProtocolAbort("tie reveal mismatch")
        return ServerResult(wins, reveals[0].value, None)

    winner = 0 if wins[0] else 1
    loser_channel = channel1 if winner == 0 else channel0
    rv = reveals[winner]
    loser_channel.send(MinForward(rv.value, rv.fresh, rv.commitment, rv.proof).encode())
    return ServerResult(wins, rv.value, winner)


def _fabricated_win(params, n, session, role, rng):
    """A valid zero-position proof over a made-up statement. Clients
    check against their own recombination, so this must not convince an
    honest one."""
    randomness = [rng.scalar() for _ in range(n + 1)]
    planted = [
        params.commit(Scalar(0) if j == 0 else rng.nonzero_scalar(), randomness[j])
        for j in range(n + 1)
    ]
    proof = prove_zero_position(
        params, planted, 0, randomness[0],
        proof_context(session, b"result", role), rng,
    )
    return Result(True, proof)
