"""Comparison protocols over blocking byte channels."""

from . import malicious, semihonest, twoparty
from .adversary import AdversaryConfig, fold_to_nonbit
from .channel import ChannelClosed, InMemoryChannel, pipe
from .cointoss import toss_follow, toss_lead, toss_plain
from .malicious import ClientResult, ServerResult
from .messages import expect, notify_abort, proof_context
from .twoparty import TwoPartyResult

__all__ = [
    "AdversaryConfig",
    "ChannelClosed",
    "ClientResult",
    "InMemoryChannel",
    "ServerResult",
    "TwoPartyResult",
    "expect",
    "fold_to_nonbit",
    "malicious",
    "notify_abort",
    "pipe",
    "proof_context",
    "semihonest",
    "toss_follow",
    "toss_lead",
    "toss_plain",
    "twoparty",
]
