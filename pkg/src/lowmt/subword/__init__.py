"""Subword segmentation: BPE and unigram LM models over a shared text stream."""

from .bpe import bpe_encode, bpe_train, bpe_train_from_counts
from .model import (
    BOUNDARY_MARKER,
    DEFAULT_VOCAB_SIZE,
    VOCAB_PRESETS,
    SubwordModel,
    decode,
    encode_text,
    load_model,
    save_model,
)
from .unigram import unigram_encode, unigram_train

__all__ = [
    "BOUNDARY_MARKER",
    "DEFAULT_VOCAB_SIZE",
    "VOCAB_PRESETS",
    "SubwordModel",
    "bpe_encode",
    "bpe_train",
    "bpe_train_from_counts",
    "decode",
    "encode_text",
    "load_model",
    "save_model",
    "unigram_encode",
    "unigram_train",
]
