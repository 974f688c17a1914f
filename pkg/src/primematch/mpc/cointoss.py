"""Shared-seed agreement between the two compared parties.

The malicious variant is commit-reveal: the leader is pinned to its
seed before seeing the follower's, so neither side can steer the
permutation or the slot scalars derived from the result. The plain
variant just swaps seeds and is only suitable when both sides follow
the protocol anyway.
"""

import hashlib

from ..errors import ProtocolAbort
from .messages import CoinCommit, CoinOpen, CoinSeed, expect

TAG = b"primematch-coin-v1"


def _pledge(seed: bytes, salt: bytes) -> bytes:
    return hashlib.sha256(TAG + salt + seed).digest()


def _mix(first: bytes, second: bytes) -> bytes:
    return hashlib.sha256(TAG + first + second).digest()


def toss_lead(channel, peer: str, rng) -> bytes:
    seed, salt = rng.read(32), rng.read(32)
    channel.send(CoinCommit(_pledge(seed, salt)).encode())
    other = expect(channel, CoinSeed, peer).seed
    channel.send(CoinOpen(seed, salt).encode())
    return _mix(seed, other)


def toss_follow(channel, peer: str, rng) -> bytes:
    pledge = expect(channel, CoinCommit, peer).digest
    mine = rng.read(32)
    channel.send(CoinSeed(mine).encode())
    opened = expect(channel, CoinOpen, peer)
    if _pledge(opened.seed, opened.salt) != pledge:
        raise ProtocolAbort("coin toss opening", culprit=peer)
    return _mix(opened.seed, mine)


def toss_plain(channel, peer: str, rng, lead: bool) -> bytes:
    mine = rng.read(32)
    channel.send(CoinSeed(mine).encode())
    other = expect(channel, CoinSeed, peer).seed
    return _mix(mine, other) if lead else _mix(other, mine)
