"""Multi-client auction over committed order books.

Every client registers a committed amount for each (symbol, side); the
auction walks all client pairs in a seeded random order and runs a
committed-minimum per symbol and orientation, zeros included. Executed
quantities are subtracted from both residuals and from the server-held
commitments homomorphically, so the commitment always opens to the
current residual under the client's original randomness. An abort
inside one pair session skips the rest of that pair and the auction
moves on; other pairs are unaffected.
"""

from __future__ import annotations

import hashlib
import random
import threading
from dataclasses import dataclass

from .matching import MatchRecord
from .orders import Order
from ..algebra import Commitment, Opening, PedersenParams, Scalar, default_params
from ..errors import ProtocolAbort
from ..mpc import AdversaryConfig, malicious, pipe, semihonest
from ..rand import RandomSource

SIDES = ("buy", "sell")


def blame(pair: tuple[str, str], culprit: str | None) -> str | None:
    """Translate a protocol role name into the auction participant."""
    return {"client-0": pair[0], "client-1": pair[1]}.get(culprit, culprit)

# Named deviation drills for the simulator: each makes one party cheat
# in a specific way on every invocation; all must be caught.
TAMPER_CASES = {
    "share-flip": {"adv0": AdversaryConfig(flip_d_share=True)},
    "nonbit": {"adv0": AdversaryConfig(nonbit_value=True)},
    "wrong-registration": {"adv0": AdversaryConfig(wrong_registration=True)},
    "result-lie": {"advs": AdversaryConfig(lie_about_bit=True)},
}


@dataclass
class CommittedAxe:
    """One registered (symbol, side) amount: the client-side residual
    and opening, plus the commitment as the server tracks it."""

    amount: int
    opening: Scalar
    commitment: Commitment

    def decrement(self, qty: int, params: PedersenParams) -> None:
        if qty > self.amount:
            raise ValueError("decrement past zero")
        self.amount -= qty
        # dividing by g^qty keeps the original opening valid
        self.commitment = self.commitment / params.commit(Scalar(qty), Scalar(0))

    def opens_correctly(self, params: PedersenParams) -> bool:
        return params.verify(self.commitment, Opening(Scalar(self.amount), self.opening))


class IdealMin:
    """Functionality-call stand-in: evaluates the minimum in the clear."""

    def run(self, auction, pair, symbol, slot, axe_a, axe_b, session, shared_seed):
        a, b = axe_a.amount, axe_b.amount
        return min(a, b), (a <= b, b <= a)


class ProtocolMin:
    """Runs the server-aided minimum protocol for every invocation,
    three threads over in-memory channels. The adversary knobs make one
    party deviate on every invocation, for detection drills."""

    def __init__(self, mode: str = "malicious", timeout: float = 30.0,
                 adv0=None, adv1=None, advs=None):
        if mode not in ("malicious", "semihonest"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode != "malicious" and (adv0 or adv1 or advs):
            raise ValueError("tampering drills need the malicious protocol")
        self.mode = mode
        self.timeout = timeout
        self.adv0 = adv0
        self.adv1 = adv1
        self.advs = advs

    def run(self, auction, pair, symbol, slot, axe_a, axe_b, session, shared_seed):
        c0s, sc0 = pipe(timeout=self.timeout)
        c1s, sc1 = pipe(timeout=self.timeout)
        p01, p10 = pipe(timeout=self.timeout)
        rngs = [
            RandomSource.from_seed(b"mc-party", bytes([k]), session)
            for k in range(3)
        ]
        n = auction.n
        results: list = [None, None, None]
        errors: list = [None, None, None]

        def part(k, fn, *args, **kwargs):
            try:
                results[k] = fn(*args, **kwargs)
            except BaseException as exc:
                errors[k] = exc

        if self.mode == "malicious":
            jobs = [
                (malicious.run_client, (c0s, p01), dict(
                    role=0, value=axe_a.amount, opening=axe_a.opening, n=n,
                    session=session, rng=rngs[0], params=auction.params,
                    adversary=self.adv0,
                    expected_counterparty=axe_b.commitment, shared_seed=shared_seed)),
                (malicious.run_client, (c1s, p10), dict(
                    role=1, value=axe_b.amount, opening=axe_b.opening, n=n,
                    session=session, rng=rngs[1], params=auction.params,
                    adversary=self.adv1,
                    expected_counterparty=axe_a.commitment, shared_seed=shared_seed)),
                (malicious.run_server, (sc0, sc1), dict(
                    n=n, session=session, rng=rngs[2], params=auction.params,
                    adversary=self.advs,
                    expected=(axe_a.commitment, axe_b.commitment))),
            ]
        else:
            jobs = [
                (semihonest.run_client, (c0s, p01), dict(
                    role=0, value=axe_a.amount, n=n, rng=rngs[0],
                    shared_seed=shared_seed)),
                (semihonest.run_client, (c1s, p10), dict(
                    role=1, value=axe_b.amount, n=n, rng=rngs[1],
                    shared_seed=shared_seed)),
                (semihonest.run_server, (sc0, sc1), dict(n=n)),
            ]
        threads = [
            threading.Thread(target=part, args=(k, fn, *args), kwargs=kwargs, daemon=True)
            for k, (fn, args, kwargs) in enumerate(jobs)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout=self.timeout + 5)
            if t.is_alive():
                raise ProtocolAbort("party deadlocked", detail=f"{symbol}/{slot}")
        aborts = [e for e in errors if isinstance(e, ProtocolAbort)]
        echoes = ("aborted by peer", "connection lost")
        for exc in aborts:
            if exc.check not in echoes:
                raise exc  # the party that found the problem names it
        if aborts:
            raise aborts[0]
        for exc in errors:
            if exc is not None:
                raise exc
        r0, r1, srv = results
        if not (r0.minimum == r1.minimum == srv.minimum):
            raise ProtocolAbort("minimum disagreement", detail=f"{symbol}/{slot}")
        return srv.minimum, srv.wins


class MulticlientAuction:
    def __init__(self, symbols: list[str], n: int, seed: bytes, params: PedersenParams | None = None):
        self.symbols = list(symbols)
        self.n = n
        self.seed = seed
        self.params = params or default_params()
        self.books: dict[str, dict[tuple[str, str], CommittedAxe]] = {}
        self.comparison_bits: list[tuple[str, str, str, int, bool, bool]] = []
        self.aborted_pairs: list[tuple[str, str, str]] = []

    # -- registration ---------------------------------------------------

    def register(self, client: str, orders: list[Order], rng: RandomSource) -> None:
        if client in self.books:
            raise ValueError(f"client {client!r} already registered")
        amounts: dict[tuple[str, str], int] = {}
        for o in orders:
            if o.ranged:
                raise ValueError("ranged orders do not enter the pair auction")
            if o.symbol not in self.symbols:
                raise ValueError(f"unknown symbol {o.symbol!r}")
            key = (o.symbol, o.side)
            amounts[key] = amounts.get(key, 0) + o.max_amount
        book = {}
        for sym in self.symbols:
            for side in SIDES:
                amount = amounts.get((sym, side), 0)
                if amount >= 1 << self.n:
                    raise ValueError(f"amount {amount} does not fit in {self.n} bits")
                opening = rng.scalar()
                book[(sym, side)] = CommittedAxe(
                    amount, opening, self.params.commit(Scalar(amount), opening)
                )
        self.books[client] = book

    # -- pair ordering ---------------------------------------------------

    def pair_ordering(self) -> list[tuple[str, str]]:
        # sorted so the ordering is a function of the seed and the set
        # of clients, not of who connected first
        names = sorted(self.books)
        pairs = [(a, b) for k, a in enumerate(names) for b in names[k + 1 :]]
        random.Random(self.seed + b"pair-order").shuffle(pairs)
        return pairs

    def _pair_seed(self, a: str, b: str) -> bytes:
        h = hashlib.sha256()
        h.update(self.seed)
        h.update(b"pair" + a.encode() + b"\x00" + b.encode())
        return h.digest()

    @staticmethod
    def invocation_keys(pair_seed: bytes, symbol: str, slot: int) -> tuple[bytes, bytes]:
        """Per-symbol session id and comparison seed, expanded from the
        pair's one-time seed."""
        base = hashlib.sha256(pair_seed + symbol.encode() + bytes([slot]))
        session = base.digest()[:16]
        shared = hashlib.sha256(b"rand" + base.digest()).digest()
        return session, shared

    # -- processing -------------------------------------------------------

    def process(self, backend=None, pair_order=None, journal=None) -> list[MatchRecord]:
        backend = backend or IdealMin()
        order = self.pair_ordering() if pair_order is None else list(pair_order)
        records = []
        for a, b in order:
            pair_seed = self._pair_seed(a, b)
            try:
                for symbol in self.symbols:
                    for slot in (0, 1):
                        side_a, side_b = ("buy", "sell") if slot == 0 else ("sell", "buy")
                        axe_a = self.books[a][(symbol, side_a)]
                        axe_b = self.books[b][(symbol, side_b)]
                        session, shared = self.invocation_keys(pair_seed, symbol, slot)
                        minimum, wins = backend.run(
                            self, (a, b), symbol, slot, axe_a, axe_b, session, shared
                        )
                        self.comparison_bits.append((a, b, symbol, slot, *wins))
                        if minimum > 0:
                            axe_a.decrement(minimum, self.params)
                            axe_b.decrement(minimum, self.params)
                            rec = MatchRecord(symbol, (a, b), (side_a, side_b), minimum)
                            records.append(rec)
                            if journal is not None:
                                journal.record(rec)
            except ProtocolAbort as exc:
                self.aborted_pairs.append((a, b, exc.check))
                if journal is not None:
                    journal.event(
                        "pair-abort", pair=[a, b], check=exc.check,
                        culprit=blame((a, b), exc.culprit),
                    )
        return records

    def residuals_open(self) -> bool:
        return all(
            axe.opens_correctly(self.params)
            for book in self.books.values()
            for axe in book.values()
        )
