"""Distributed arithmetic coding for binary sources whose residual against
the decoder's side information follows a hidden Markov process."""

from .codec import Codeword, DacParams, decode, encode
from .hmm import HmmModel, entropy_rate, from_table_scalars, load_model

__all__ = [
    "Codeword",
    "DacParams",
    "HmmModel",
    "decode",
    "encode",
    "entropy_rate",
    "from_table_scalars",
    "load_model",
]
