"""Order books, matching functionalities, and auction orchestration."""

from .journal import (
    MatchJournal,
    journal_matches,
    logical_clock,
    read_journal,
    wall_clock,
)
from .matching import (
    MatchRecord,
    b2c_match,
    build_book,
    c2c_invocations,
    c2c_match,
    pairwise_minima,
    queue_process,
    range_b2c,
    range_c2c,
)
from .multiclient import CommittedAxe, IdealMin, MulticlientAuction, ProtocolMin
from .orders import Order, load_orders, parse_orders
from .session import run_auction_client, run_auction_server

__all__ = [
    "Order",
    "parse_orders",
    "load_orders",
    "MatchRecord",
    "build_book",
    "pairwise_minima",
    "b2c_match",
    "c2c_invocations",
    "c2c_match",
    "queue_process",
    "range_b2c",
    "range_c2c",
    "CommittedAxe",
    "IdealMin",
    "ProtocolMin",
    "MulticlientAuction",
    "run_auction_server",
    "run_auction_client",
    "MatchJournal",
    "read_journal",
    "journal_matches",
    "logical_clock",
    "wall_clock",
]
