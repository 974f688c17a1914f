"""Plain evaluations of the matching functionalities.

These run over ordinary integers and are what the distributed protocols
must agree with. Books are keyed by (symbol, side) with duplicate rows
aggregated, so any two parties meet in at most one pair per symbol.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .orders import Order

OTHER_SIDE = {"buy": "sell", "sell": "buy"}


@dataclass(frozen=True)
class MatchRecord:
    symbol: str
    parties: tuple[str, str]
    sides: tuple[str, str]
    quantity: int
    tag: str = "plain"

    def __post_init__(self):
        if self.quantity <= 0:
            raise ValueError("match quantity must be positive")

    def as_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "parties": list(self.parties),
            "sides": list(self.sides),
            "quantity": self.quantity,
            "tag": self.tag,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MatchRecord":
        return cls(
            d["symbol"], tuple(d["parties"]), tuple(d["sides"]), d["quantity"], d["tag"]
        )


def build_book(orders: list[Order]) -> dict[tuple[str, str], int]:
    book: dict[tuple[str, str], int] = {}
    for o in orders:
        if o.ranged:
            raise ValueError(f"ranged order {o.symbol} in a plain book")
        key = (o.symbol, o.side)
        book[key] = book.get(key, 0) + o.max_amount
    return book


def pairwise_minima(
    book_a: dict[tuple[str, str], int], book_b: dict[tuple[str, str], int]
) -> list[tuple[str, str, str, int]]:
    """The raw functionality output: (symbol, side_a, side_b, min) for
    every equal-symbol opposite-side pair, zero minima included."""
    out = []
    for (sym, side_a), amt_a in sorted(book_a.items()):
        opposite = book_b.get((sym, OTHER_SIDE[side_a]))
        if opposite is not None:
            out.append((sym, side_a, OTHER_SIDE[side_a], min(amt_a, opposite)))
    return out


def _records(minima, name_a, name_b, tag="plain"):
    return [
        MatchRecord(sym, (name_a, name_b), (sa, sb), qty, tag)
        for sym, sa, sb, qty in minima
        if qty > 0
    ]


def b2c_match(
    bank_orders: list[Order],
    client_orders: list[Order],
    bank: str = "bank",
    client: str = "client",
) -> list[MatchRecord]:
    minima = pairwise_minima(build_book(bank_orders), build_book(client_orders))
    return _records(minima, bank, client)


def c2c_invocations(
    book1: dict[tuple[str, str], int],
    book2: dict[tuple[str, str], int],
    universe: list[str],
) -> list[tuple[str, int, int, int]]:
    """The 2|U| comparison inputs for a client pair: for every symbol,
    (party 1 buy vs party 2 sell) then (party 1 sell vs party 2 buy).
    Returns (symbol, slot, amount1, amount2) with slot 0 for the first
    orientation; zero amounts are compared like any other."""
    runs = []
    for sym in universe:
        runs.append((sym, 0, book1.get((sym, "buy"), 0), book2.get((sym, "sell"), 0)))
        runs.append((sym, 1, book1.get((sym, "sell"), 0), book2.get((sym, "buy"), 0)))
    return runs


def c2c_match(
    orders1: list[Order],
    orders2: list[Order],
    universe: list[str],
    name1: str = "client-1",
    name2: str = "client-2",
) -> list[MatchRecord]:
    book1, book2 = build_book(orders1), build_book(orders2)
    records = []
    for sym, slot, a1, a2 in c2c_invocations(book1, book2, universe):
        qty = min(a1, a2)
        if qty > 0:
            sides = ("buy", "sell") if slot == 0 else ("sell", "buy")
            records.append(MatchRecord(sym, (name1, name2), sides, qty))
    return records


def queue_process(longs: list[int], shorts: list[int]) -> list[tuple[int, int, int]]:
    """Match queue fronts by minimum until one side runs dry. Zero
    entries are skipped at enqueue time; indices refer to registration
    order."""
    lq = deque((i, v) for i, v in enumerate(longs) if v > 0)
    sq = deque((i, v) for i, v in enumerate(shorts) if v > 0)
    matches = []
    while lq and sq:
        li, lv = lq[0]
        si, sv = sq[0]
        qty = min(lv, sv)
        matches.append((li, si, qty))
        lv, sv = lv - qty, sv - qty
        lq.popleft()
        if lv:
            lq.appendleft((li, lv))
        sq.popleft()
        if sv:
            sq.appendleft((si, sv))
    return matches


def range_b2c(
    bank_amount: int,
    clients: list[tuple[int, int]],
    order: list[int],
) -> tuple[list[tuple[int, str, int]], int]:
    """Two greedy passes over the given client order.

    Pass one fills minimum amounts while bank inventory lasts; pass two
    tops clients up toward their maximum, capped at max minus whatever
    they already received so lifetime totals never exceed the maximum.
    Returns nonzero executions as (client, pass tag, qty) plus the bank
    residual.
    """
    log = []
    residual = bank_amount
    received = [0] * len(clients)
    for tag, want in (
        ("min-pass", lambda i: clients[i][0]),
        ("max-pass", lambda i: clients[i][1] - received[i]),
    ):
        for i in order:
            qty = min(residual, want(i))
            if qty > 0:
                log.append((i, tag, qty))
                received[i] += qty
                residual -= qty
    return log, residual


def range_c2c(buy: tuple[int, int], sell: tuple[int, int]) -> list[int]:
    """Three sequential executions for one buyer range against one
    seller range. Returns the nonzero quantities in execution order;
    the total always lands on the top of the range intersection."""
    lo0, hi0 = buy
    lo1, hi1 = sell
    if lo0 > hi1 or lo1 > hi0:
        return []
    steps = []
    # step 1: the buyer's minimum trades in full
    if lo0 > 0:
        steps.append(lo0)
    hi0, hi1 = hi0 - lo0, hi1 - lo0
    lo1 = max(lo1 - lo0, 0)
    # step 2: whatever remains of the seller's minimum
    if lo1 > 0:
        steps.append(lo1)
        hi0, hi1 = hi0 - lo1, hi1 - lo1
    # step 3: top up to the smaller residual maximum
    fill = min(hi0, hi1)
    if fill > 0:
        steps.append(fill)
    return steps
