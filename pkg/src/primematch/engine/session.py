"""Networked auction drivers.

The server hosts the relay, accepts client registrations during a
window, then walks client pairs exactly like the in-process auction:
per pair, per symbol, per orientation, one committed-minimum run. The
clients talk to the server over per-invocation sessions and to each
other over one authenticated encrypted channel per pair, seeded by a
single coin toss whose output is expanded per symbol.

Control traffic (join, register, pairing announcements, final results)
is JSON on a well-known control session; protocol traffic stays binary.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass

from .matching import MatchRecord
from .multiclient import SIDES, CommittedAxe, blame
from .orders import Order
from ..algebra import Commitment, Scalar, default_params
from ..errors import ProtocolAbort
from ..mpc import malicious, semihonest
from ..mpc.cointoss import toss_follow, toss_lead, toss_plain
from ..net import Node, establish_secure
from ..rand import RandomSource

log = logging.getLogger(__name__)

CONTROL = hashlib.sha256(b"primematch-control-session").digest()[:16]
SERVER = "server"


def send_json(channel, obj: dict) -> None:
    channel.send(json.dumps(obj, sort_keys=True).encode())


def recv_json(channel, expect_kind: str | None = None) -> dict:
    msg = json.loads(channel.recv().decode())
    if expect_kind is not None and msg.get("kind") != expect_kind:
        raise ProtocolAbort(
            "unexpected control message",
            detail=f"wanted {expect_kind}, got {msg.get('kind')!r}",
        )
    return msg


def invocation_session(base: bytes, symbol: str, slot: int) -> bytes:
    return hashlib.sha256(base + symbol.encode() + bytes([slot])).digest()[:16]


def expand_toss(seed: bytes, symbol: str, slot: int) -> bytes:
    return hashlib.sha256(b"per-symbol" + seed + symbol.encode() + bytes([slot])).digest()


def pair_sides(slot: int) -> tuple[str, str]:
    return ("buy", "sell") if slot == 0 else ("sell", "buy")


# ------------------------------------------------------------------ server


def run_auction_server(relay, cfg, seed: bytes, journal=None):
    """Accept registrations, run every pair, emit results.

    Returns (records, aborted_pairs). The relay is owned by the caller;
    this function only adds its own node to it.
    """
    params = default_params()
    node = Node(SERVER, relay.address, timeout=cfg.timeout)
    listener = node.listen(CONTROL)
    auction_id = hashlib.sha256(b"auction" + seed).hexdigest()[:16]

    clients: dict[str, dict] = {}
    import time

    deadline = time.monotonic() + cfg.window
    while len(clients) < cfg.clients:
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            log.info("registration window closed with %d clients", len(clients))
            break
        try:
            sender, payload = listener.accept(timeout=remaining)
        except Exception:
            break
        try:
            join = json.loads(payload.decode())
        except ValueError:
            continue
        if join.get("kind") != "join" or sender in clients or sender == SERVER:
            continue
        chan = node.channel(sender, CONTROL)
        send_json(
            chan,
            {
                "kind": "ack",
                "auction": auction_id,
                "n": cfg.n,
                "mode": cfg.mode,
                "symbols": cfg.symbols,
            },
        )
        reg = recv_json(chan, "register")
        book: dict[tuple[str, str], Commitment] = {}
        if cfg.mode == "malicious":
            for sym in cfg.symbols:
                for side in SIDES:
                    book[(sym, side)] = Commitment.decode(
                        bytes.fromhex(reg["book"][f"{sym}/{side}"])
                    )
        send_json(chan, {"kind": "registered"})
        clients[sender] = {"chan": chan, "book": book}
        log.info("registered %s (%d/%d)", sender, len(clients), cfg.clients)

    names = sorted(clients)
    pairs = [(a, b) for k, a in enumerate(names) for b in names[k + 1 :]]
    random.Random(seed + b"pair-order").shuffle(pairs)

    rng = RandomSource.from_seed(b"auction-server", seed)
    records: list[MatchRecord] = []
    aborted: list[tuple[str, str, str]] = []
    for index, (a, b) in enumerate(pairs):
        base = hashlib.sha256(seed + b"pair" + a.encode() + b"\x00" + b.encode()).digest()[:16]
        for name, peer, lead in ((a, b, True), (b, a, False)):
            send_json(
                clients[name]["chan"],
                {
                    "kind": "pair",
                    "index": index,
                    "peer": peer,
                    "lead": lead,
                    "base": base.hex(),
                },
            )
        failure = None
        for symbol in cfg.symbols:
            for slot in (0, 1):
                side_a, side_b = pair_sides(slot)
                session = invocation_session(base, symbol, slot)
                ch0 = node.channel(a, session)
                ch1 = node.channel(b, session)
                try:
                    if cfg.mode == "malicious":
                        expected = (
                            clients[a]["book"][(symbol, side_a)],
                            clients[b]["book"][(symbol, side_b)],
                        )
                        result = malicious.run_server(
                            ch0, ch1, n=cfg.n, session=session, rng=rng,
                            params=params, expected=expected,
                        )
                    else:
                        result = semihonest.run_server(ch0, ch1, n=cfg.n)
                except ProtocolAbort as exc:
                    failure = exc
                    break
                if result.minimum > 0:
                    if cfg.mode == "malicious":
                        dec = params.commit(Scalar(result.minimum), Scalar(0))
                        clients[a]["book"][(symbol, side_a)] = (
                            clients[a]["book"][(symbol, side_a)] / dec
                        )
                        clients[b]["book"][(symbol, side_b)] = (
                            clients[b]["book"][(symbol, side_b)] / dec
                        )
                    rec = MatchRecord(symbol, (a, b), (side_a, side_b), result.minimum)
                    records.append(rec)
                    if journal is not None:
                        journal.record(rec)
            if failure is not None:
                break
        if failure is not None:
            aborted.append((a, b, failure.check))
            if journal is not None:
                journal.event(
                    "pair-abort", pair=[a, b], check=failure.check,
                    culprit=blame((a, b), failure.culprit),
                )
        for name in (a, b):
            send_json(
                clients[name]["chan"],
                {
                    "kind": "pair-done",
                    "index": index,
                    "aborted": failure is not None,
                    "check": failure.check if failure else None,
                },
            )
    payload = [rec.as_dict() for rec in records]
    for name in names:
        send_json(clients[name]["chan"], {"kind": "done", "matches": payload})
    # wait for goodbyes so the results outrun the relay teardown
    for name in names:
        try:
            recv_json(clients[name]["chan"], "bye")
        except Exception:
            pass
    node.close()
    return records, aborted


# ------------------------------------------------------------------ client


def run_auction_client(name: str, address, orders: list[Order], *,
                       mode: str, timeout: float = 30.0, rng: RandomSource | None = None):
    """Join, register, play every announced pair, return own matches."""
    if name == SERVER:
        raise ValueError("client may not be named 'server'")
    rng = rng or RandomSource.system()
    params = default_params()
    node = Node(name, address, timeout=timeout)
    try:
        ctl = node.channel(SERVER, CONTROL)
        send_json(ctl, {"kind": "join", "name": name})
        ack = recv_json(ctl, "ack")
        n, symbols = ack["n"], ack["symbols"]
        if ack["mode"] != mode:
            raise ProtocolAbort(
                "mode mismatch", detail=f"server runs {ack['mode']}, client {mode}"
            )
        amounts: dict[tuple[str, str], int] = {}
        for o in orders:
            if o.ranged:
                raise ValueError("ranged orders do not enter the pair auction")
            if o.symbol not in symbols:
                raise ValueError(f"unknown symbol {o.symbol!r}")
            key = (o.symbol, o.side)
            amounts[key] = amounts.get(key, 0) + o.max_amount
        book: dict[tuple[str, str], CommittedAxe] = {}
        reg: dict[str, str] = {}
        for sym in symbols:
            for side in SIDES:
                amount = amounts.get((sym, side), 0)
                if amount >= 1 << n:
                    raise ValueError(f"amount {amount} does not fit in {n} bits")
                opening = rng.scalar()
                axe = CommittedAxe(amount, opening, params.commit(Scalar(amount), opening))
                book[(sym, side)] = axe
                reg[f"{sym}/{side}"] = axe.commitment.encode().hex()
        send_json(ctl, {"kind": "register", "book": reg if mode == "malicious" else {}})
        recv_json(ctl, "registered")

        matches: list[dict] = []
        while True:
            msg = recv_json(ctl)
            kind = msg.get("kind")
            if kind == "done":
                matches = [m for m in msg["matches"] if name in m["parties"]]
                send_json(ctl, {"kind": "bye"})
                break
            if kind == "pair-done":
                continue
            if kind != "pair":
                raise ProtocolAbort("unexpected control message", detail=str(kind))
            peer, lead = msg["peer"], bool(msg["lead"])
            base = bytes.fromhex(msg["base"])
            role = 0 if lead else 1
            pair_chan = node.channel(
                peer, hashlib.sha256(base + b"pair-channel").digest()[:16]
            )
            try:
                secure = establish_secure(pair_chan, initiator=lead, rng=rng)
                if mode == "malicious":
                    toss = toss_lead(secure, peer, rng) if lead else toss_follow(secure, peer, rng)
                else:
                    toss = toss_plain(secure, peer, rng, lead)
                for symbol in symbols:
                    for slot in (0, 1):
                        my_side = pair_sides(slot)[role]
                        axe = book[(symbol, my_side)]
                        session = invocation_session(base, symbol, slot)
                        shared = expand_toss(toss, symbol, slot)
                        server_chan = node.channel(SERVER, session)
                        if mode == "malicious":
                            res = malicious.run_client(
                                server_chan, secure, role=role, value=axe.amount,
                                opening=axe.opening, n=n, session=session, rng=rng,
                                params=params, shared_seed=shared,
                            )
                        else:
                            res = semihonest.run_client(
                                server_chan, secure, role=role, value=axe.amount,
                                n=n, rng=rng, shared_seed=shared,
                            )
                        if res.minimum > 0:
                            axe.amount -= res.minimum
                            axe.commitment = axe.commitment / params.commit(
                                Scalar(res.minimum), Scalar(0)
                            )
            except ProtocolAbort as exc:
                log.info("%s: pair with %s aborted: %s", name, peer, exc)
                # wait for the server's pair-done before moving on
        return matches
    finally:
        node.close()
