"""Order ingestion and validation.

Orders arrive as CSV rows `symbol,side,min_qty,max_qty` (a header row
is allowed and skipped). Plain orders set min == max; ranged orders may
differ. Validation failures name the row so an operator can fix the
file without guessing.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

SIDES = ("buy", "sell")
HEADER = ("symbol", "side", "min_qty", "max_qty")


@dataclass(frozen=True)
class Order:
    symbol: str
    side: str
    min_amount: int
    max_amount: int

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be buy or sell, got {self.side!r}")
        if not 0 <= self.min_amount <= self.max_amount:
            raise ValueError(
                f"need 0 <= min <= max, got {self.min_amount}/{self.max_amount}"
            )

    @classmethod
    def plain(cls, symbol: str, side: str, amount: int) -> "Order":
        return cls(symbol, side, amount, amount)

    @property
    def ranged(self) -> bool:
        return self.min_amount != self.max_amount


def parse_orders(
    text: str, universe: list[str] | None = None, bound: int | None = None
) -> list[Order]:
    """Parse CSV text into orders; raises ValueError naming the bad row."""
    orders = []
    rows = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(rows, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        cells = [c.strip() for c in row]
        if lineno == 1 and tuple(c.lower() for c in cells) == HEADER:
            continue
        if len(cells) != 4:
            raise ValueError(f"row {lineno}: expected 4 columns, got {len(cells)}")
        symbol, side, mn_s, mx_s = cells
        try:
            mn, mx = int(mn_s), int(mx_s)
        except ValueError:
            raise ValueError(f"row {lineno}: quantities must be integers") from None
        if mn > mx:
            raise ValueError(f"row {lineno}: min_qty {mn} exceeds max_qty {mx}")
        if mn < 0:
            raise ValueError(f"row {lineno}: negative quantity")
        if universe is not None and symbol not in universe:
            raise ValueError(f"row {lineno}: unknown symbol {symbol!r}")
        if bound is not None and mx >= bound:
            raise ValueError(f"row {lineno}: quantity {mx} out of range (< {bound})")
        try:
            orders.append(Order(symbol, side.lower(), mn, mx))
        except ValueError as exc:
            raise ValueError(f"row {lineno}: {exc}") from None
    return orders


def load_orders(path, universe=None, bound=None) -> list[Order]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_orders(fh.read(), universe=universe, bound=bound)
