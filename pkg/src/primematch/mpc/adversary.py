"""Scripted misbehaviour for the abort tests.

Each flag makes a party deviate in one specific way while otherwise
following the protocol, so tests can pin down which check fires and
who gets blamed.
"""

from dataclasses import dataclass


@dataclass
class AdversaryConfig:
    flip_d_share: bool = False        # client: perturb one share slot sent to the server
    nonbit_value: bool = False        # client: share a non-bit digit with the right sum
    wrong_registration: bool = False  # client: register a commitment to a different value
    lie_about_bit: bool = False       # server: claim a win that did not happen


def fold_to_nonbit(bits: list[int]) -> list[int]:
    """Rewrite a (1, 0) bit pair as (0, 2), preserving the weighted sum."""
    out = list(bits)
    for j in range(len(out) - 1):
        if out[j] == 1 and out[j + 1] == 0:
            out[j], out[j + 1] = 0, 2
            return out
    raise ValueError("no (1, 0) pair to fold; pick a different test value")
