"""Command line entry points: server, client, localsim, bench.

Output is JSON lines on stdout (the match journal for auction runs, one
report object for bench); operational logging goes to stderr. Exit
codes: 0 success, 2 configuration or input problems, 3 protocol abort.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .bench import backend_microbench, run_bench
from .config import ConfigError, load_config, parse_address
from .engine import (
    IdealMin,
    MatchJournal,
    MulticlientAuction,
    ProtocolMin,
    load_orders,
    logical_clock,
    run_auction_client,
    run_auction_server,
    wall_clock,
)
from .engine.multiclient import TAMPER_CASES
from .errors import ProtocolAbort
from .mpc import ChannelClosed
from .net import Relay
from .rand import RandomSource

log = logging.getLogger("primematch")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primematch",
        description="privacy-preserving inventory matching",
    )
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--mode", choices=["semi-honest", "malicious"])
    parser.add_argument("--seed", help="auction seed (hex)")
    parser.add_argument("--symbols", help="comma-separated symbol universe")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    srv = sub.add_parser("server", help="run the relay and auction orchestrator")
    srv.add_argument("--listen", help="host:port to bind (port 0 picks one)")
    srv.add_argument("--clients", type=int, help="registrations to wait for")

    cli = sub.add_parser("client", help="register orders and participate")
    cli.add_argument("--name", required=True)
    cli.add_argument("--orders", required=True, help="CSV of orders")
    cli.add_argument("--connect", help="server host:port")

    sim = sub.add_parser("localsim", help="run an auction fully in-process")
    sim.add_argument("--orders", action="append", required=True,
                     help="CSV of one client's orders (repeat per client)")
    sim.add_argument("--n", type=int, help="bit width override")
    sim.add_argument("--plain", action="store_true",
                     help="evaluate the functionality directly, no protocol")
    sim.add_argument("--tamper", choices=sorted(TAMPER_CASES),
                     help="inject one deviation and report the detection")

    ben = sub.add_parser("bench", help="time symbols through the protocol")
    ben.add_argument("--bench-count", type=int, default=100, metavar="K")
    ben.add_argument("--n", type=int, help="bit width override")
    ben.add_argument("--compare-backends", action="store_true",
                     help="also microbenchmark compiled vs pure group ops")
    return parser


def _load(args, extra=None) -> "Config":
    overrides = {
        "mode": args.mode,
        "seed": args.seed,
        "symbols": args.symbols,
    }
    overrides.update(extra or {})
    return load_config(args.config, overrides=overrides)


def _resolve_seed(cfg):
    if cfg.seed is not None:
        return cfg.seed, logical_clock()
    return os.urandom(16), wall_clock


def cmd_server(args) -> int:
    cfg = _load(args, {"listen": getattr(args, "listen", None),
                       "clients": getattr(args, "clients", None)})
    seed, clock = _resolve_seed(cfg)
    host, port = parse_address(cfg.listen)
    try:
        relay = Relay(host, port)
    except OSError as exc:
        print(f"error: cannot bind {cfg.listen}: {exc}", file=sys.stderr)
        return 2
    try:
        print(json.dumps({"kind": "listening",
                          "address": "%s:%d" % relay.address}),
              file=sys.stderr, flush=True)
        journal = MatchJournal(sys.stdout, seed=seed, symbols=cfg.symbols, clock=clock)
        records, aborted = run_auction_server(relay, cfg, seed, journal)
        journal.event("auction-complete", matches=len(records), aborted=len(aborted))
        return 0
    finally:
        relay.stop()


def cmd_client(args) -> int:
    cfg = _load(args, {"connect": getattr(args, "connect", None)})
    try:
        orders = load_orders(args.orders, universe=cfg.symbols, bound=1 << cfg.n)
    except (OSError, ValueError) as exc:
        print(f"error: {args.orders}: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({"kind": "registering", "orders": len(orders)}), flush=True)
    try:
        matches = run_auction_client(
            args.name, parse_address(cfg.connect), orders,
            mode=cfg.mode, timeout=cfg.timeout,
        )
    except ValueError as exc:
        print(f"error: {args.orders}: {exc}", file=sys.stderr)
        return 2
    except ProtocolAbort as exc:
        print(json.dumps({"kind": "abort", "check": exc.check,
                          "culprit": exc.culprit}), flush=True)
        return 3
    except ChannelClosed as exc:
        print(json.dumps({"kind": "abort", "check": "connection lost",
                          "detail": str(exc)}), flush=True)
        return 3
    for match in matches:
        line = {"kind": "match"}
        line.update(match)
        print(json.dumps(line, sort_keys=True))
    print(json.dumps({"kind": "done", "matches": len(matches)}))
    return 0


def cmd_localsim(args) -> int:
    cfg = _load(args, {"n": getattr(args, "n", None)})
    seed = cfg.seed if cfg.seed is not None else bytes(16)
    auction = MulticlientAuction(cfg.symbols, cfg.n, seed)
    reg_rng = RandomSource.from_seed(b"localsim-registration", seed)
    for k, path in enumerate(args.orders):
        name = "client-%d" % (k + 1)
        try:
            orders = load_orders(path, universe=cfg.symbols, bound=1 << cfg.n)
            auction.register(name, orders, reg_rng)
        except (OSError, ValueError) as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return 2
    if args.plain:
        backend = IdealMin()
    else:
        mode = "malicious" if cfg.mode == "malicious" else "semihonest"
        adversary = TAMPER_CASES[args.tamper] if args.tamper else {}
        backend = ProtocolMin(mode=mode, timeout=cfg.timeout, **adversary)
    journal = MatchJournal(sys.stdout, seed=seed, symbols=cfg.symbols,
                           clock=logical_clock())
    records = auction.process(backend=backend, journal=journal)
    journal.event(
        "auction-complete", matches=len(records), aborted=len(auction.aborted_pairs)
    )
    if args.tamper:
        detected = bool(auction.aborted_pairs)
        journal.event(
            "tamper-report", case=args.tamper, detected=detected,
            checks=sorted({check for _, _, check in auction.aborted_pairs}),
        )
        return 0 if detected else 3
    return 0


def cmd_bench(args) -> int:
    cfg = _load(args, {"n": getattr(args, "n", None)})
    seed = cfg.seed if cfg.seed is not None else b"bench-seed"
    report = run_bench(args.bench_count, n=cfg.n, mode=cfg.mode, seed=seed,
                       timeout=cfg.timeout)
    if args.compare_backends:
        report["backends"] = backend_microbench()
    print(json.dumps(report, sort_keys=True))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        handler = {
            "server": cmd_server,
            "client": cmd_client,
            "localsim": cmd_localsim,
            "bench": cmd_bench,
        }[args.command]
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
