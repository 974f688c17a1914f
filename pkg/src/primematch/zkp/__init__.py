from .bitproof import BitProof, prove_bit, prove_value_unchecked, verify_bit
from .comeq import (
    ComEqCiphertextProof,
    ComEqProof,
    prove_commitment_ciphertext_equal,
    prove_same_message,
    verify_commitment_ciphertext_equal,
    verify_same_message,
)
from .onemany import (
    CiphertextZeroProof,
    OneOfManyProof,
    prove_some_zero,
    prove_zero_position,
    verify_some_zero,
    verify_zero_position,
)
from .transcript import Transcript

__all__ = [
    "BitProof",
    "prove_bit",
    "prove_value_unchecked",
    "verify_bit",
    "ComEqProof",
    "ComEqCiphertextProof",
    "prove_same_message",
    "verify_same_message",
    "prove_commitment_ciphertext_equal",
    "verify_commitment_ciphertext_equal",
    "OneOfManyProof",
    "CiphertextZeroProof",
    "prove_zero_position",
    "verify_zero_position",
    "prove_some_zero",
    "verify_some_zero",
    "Transcript",
]
