"""Match log: a JSON-lines journal with a header line.

The header carries the auction seed and the symbol universe so a run
can be replayed; every following line is either a match record or an
auction event (pair abort, registration), each stamped by the journal
clock. Runs seeded for reproducibility use the logical clock so two
identical runs produce identical bytes; live runs use wall time.
"""

from __future__ import annotations

import json
import time

from .matching import MatchRecord


def wall_clock():
    return round(time.time(), 3)


def logical_clock():
    """Deterministic stand-in for wall time: 0, 1, 2, ..."""
    counter = iter(range(1 << 62))
    return lambda: next(counter)


class MatchJournal:
    def __init__(self, stream, *, seed: bytes, symbols: list[str], clock=wall_clock):
        self._stream = stream
        self._clock = clock
        self._write(
            {
                "kind": "header",
                "auction_seed": seed.hex(),
                "symbols": list(symbols),
                "started": self._clock(),
            }
        )

    def _write(self, obj: dict) -> None:
        self._stream.write(json.dumps(obj, sort_keys=True) + "\n")

    def record(self, rec: MatchRecord) -> None:
        line = {"kind": "match", "ts": self._clock()}
        line.update(rec.as_dict())
        self._write(line)

    def event(self, kind: str, **fields) -> None:
        line = {"kind": kind, "ts": self._clock()}
        line.update(fields)
        self._write(line)


def read_journal(text: str) -> tuple[dict, list[dict]]:
    """Parse journal text back into (header, entries)."""
    lines = [json.loads(line) for line in text.splitlines() if line.strip()]
    if not lines or lines[0].get("kind") != "header":
        raise ValueError("journal has no header line")
    return lines[0], lines[1:]


def journal_matches(entries: list[dict]) -> list[MatchRecord]:
    return [
        MatchRecord.from_dict(e) for e in entries if e.get("kind") == "match"
    ]
