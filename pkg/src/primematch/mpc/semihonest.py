"""Server-aided minimum for parties that follow the protocol.

Same data flow as the checked variant minus all commitments and
proofs: swap seeds, swap bit halves, send comparison shares to the
coordinator, read the verdict. The coordinator still learns only the
scaled difference vectors, whose zero slot is equally likely to be
anywhere.
"""

from __future__ import annotations

from ..algebra import Scalar
from ..compare import (
    ScalarCarrier,
    bit_decompose,
    comparison_final,
    comparison_initial,
    derive_randomness,
)
from ..errors import ProtocolAbort
from ..rand import RandomSource
from .cointoss import toss_plain
from .malicious import ClientResult, ServerResult, _check_run_size, ROLE_NAMES, SERVER
from .messages import (
    PlainForward,
    PlainResult,
    PlainReveal,
    ShareHalves,
    ShareVectors,
    expect,
)


def run_client(
    server_channel,
    peer_channel,
    *,
    role: int,
    value: int,
    n: int,
    rng: RandomSource,
    shared_seed: bytes | None = None,
) -> ClientResult:
    _check_run_size(value, n)
    peer = ROLE_NAMES[1 - role]
    if shared_seed is not None:
        seed = shared_seed
    else:
        seed = toss_plain(peer_channel, peer, rng, lead=(role == 0))
    rnd = derive_randomness(seed, n)

    bits = bit_decompose(value, n)
    mine = [rng.scalar() for _ in range(n)]
    peer_channel.send(
        ShareHalves([Scalar(bits[j]) - mine[j] for j in range(n)]).encode()
    )
    got = expect(peer_channel, ShareHalves, peer).halves
    if len(got) != n:
        raise ProtocolAbort("share halves shape", culprit=peer)

    x, y = (mine, got) if role == 0 else (got, mine)
    d0, d1 = comparison_initial(ScalarCarrier(role == 0), x, y, rnd)
    server_channel.send(ShareVectors(d0, d1).encode())

    verdict = expect(server_channel, PlainResult, SERVER)
    if verdict.win:
        server_channel.send(PlainReveal(value).encode())
        return ClientResult(won=True, minimum=value)
    fwd = expect(server_channel, PlainForward, SERVER)
    return ClientResult(won=False, minimum=fwd.value)


def run_server(channel0, channel1, *, n: int) -> ServerResult:
    pkg0 = expect(channel0, ShareVectors, ROLE_NAMES[0])
    pkg1 = expect(channel1, ShareVectors, ROLE_NAMES[1])
    for pkg, who in ((pkg0, 0), (pkg1, 1)):
        if len(pkg.d0) != n + 1 or len(pkg.d1) != n + 1:
            raise ProtocolAbort("share vector shape", culprit=ROLE_NAMES[who])

    d0 = [a + b for a, b in zip(pkg0.d0, pkg1.d0)]
    d1 = [a + b for a, b in zip(pkg0.d1, pkg1.d1)]
    wins = (comparison_final(d0), comparison_final(d1))
    if not (wins[0] or wins[1]):
        raise ProtocolAbort("no comparison verdict", detail="both vectors nonzero")

    channel0.send(PlainResult(wins[0]).encode())
    channel1.send(PlainResult(wins[1]).encode())

    reveals = {}
    for role, channel in ((0, channel0), (1, channel1)):
        if wins[role]:
            reveals[role] = expect(channel, PlainReveal, ROLE_NAMES[role]).value

    if wins[0] and wins[1]:
        return ServerResult(wins, reveals[0], None)
    winner = 0 if wins[0] else 1
    loser_channel = channel1 if winner == 0 else channel0
    loser_channel.send(PlainForward(reveals[winner]).encode())
    return ServerResult(wins, reveals[winner], winner)
