"""Shared exception types.

ProtocolAbort is the single failure channel for protocol-level checks: it
names the check that failed and, when the protocol can attribute blame, the
party whose message triggered it. Engines catch it per comparison, log it,
and keep the rest of the auction running.
"""

from __future__ import annotations


class ProtocolAbort(Exception):
    def __init__(self, check: str, culprit: str | None = None, detail: str = ""):
        self.check = check
        self.culprit = culprit
        self.detail = detail
        who = f" (from {culprit})" if culprit else ""
        extra = f": {detail}" if detail else ""
        super().__init__(f"abort on check {check!r}{who}{extra}")


class ConfigError(Exception):
    pass
