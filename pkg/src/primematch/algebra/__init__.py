from .backend import HAVE_COMPILED
from .elgamal import Ciphertext, CiphertextCommitter, Keypair, encrypt, is_zero, keygen, rerandomize
from .group import (
    ENCODED_LEN,
    ORDER,
    GroupElement,
    Scalar,
    base_exp,
    double_exp,
    generator,
    hash_to_group,
    hash_to_scalar,
    identity,
)
from .pedersen import Commitment, Opening, PedersenParams, default_params

__all__ = [
    "HAVE_COMPILED",
    "ENCODED_LEN",
    "ORDER",
    "GroupElement",
    "Scalar",
    "base_exp",
    "double_exp",
    "generator",
    "hash_to_group",
    "hash_to_scalar",
    "identity",
    "Commitment",
    "Opening",
    "PedersenParams",
    "default_params",
    "Ciphertext",
    "CiphertextCommitter",
    "Keypair",
    "encrypt",
    "is_zero",
    "keygen",
    "rerandomize",
]
