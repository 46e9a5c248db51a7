"""Byte-pair-encoding subword training and encoding.

Training iteratively merges the most frequent adjacent symbol pair until the
vocabulary (single characters plus merged pieces) reaches the requested size.
Ties are broken toward the lexicographically smallest (left, right) pair so a
given stream and vocab size always produce the identical merge list.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from ..errors import ConfigurationError
from .model import BOUNDARY_MARKER, SubwordModel


def _count_words(lines: Iterable[str]) -> Counter[str]:
    counts: Counter[str] = Counter()
    for line in lines:
        counts.update(line.split())
    return counts


def _merge_symbols(symbols: list[str], pair: tuple[str, str]) -> list[str]:
    """Replace adjacent occurrences of pair, scanning left to right."""
    left, right = pair
    out: list[str] = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def bpe_train_from_counts(word_counts: dict[str, int], vocab_size: int) -> SubwordModel:
    """Learn merges from an explicit word-frequency table."""
    marker = BOUNDARY_MARKER
    words: list[tuple[list[str], int]] = [
        (list(marker + word), count) for word, count in sorted(word_counts.items())
    ]
    vocab = {symbol for symbols, _ in words for symbol in symbols}
    if vocab_size <= len(vocab):
        raise ConfigurationError(
            f"vocab_size must exceed the {len(vocab)} distinct characters seen in training"
        )

    merges: list[tuple[str, str]] = []
    while len(vocab) < vocab_size:
        pair_counts: Counter[tuple[str, str]] = Counter()
        for symbols, count in words:
            for a, b in zip(symbols, symbols[1:]):
                pair_counts[(a, b)] += count
        if not pair_counts:
            break
        best = min(pair_counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        merges.append(best)
        vocab.add(best[0] + best[1])
        words = [(_merge_symbols(symbols, best), count) for symbols, count in words]
    return SubwordModel(kind="bpe", vocab_size=vocab_size, bpe_merges=merges)


def bpe_train(lines: Iterable[str], vocab_size: int) -> SubwordModel:
    """Learn a BPE model from a stream of raw sentences."""
    return bpe_train_from_counts(dict(_count_words(lines)), vocab_size)


def _encode_word(symbols: list[str], ranks: dict[tuple[str, str], int]) -> list[str]:
    # Applying the lowest-ranked pair present, repeatedly, replays the merges
    # in their learned order.
    while len(symbols) > 1:
        ranked = [
            (ranks[pair], pair)
            for pair in zip(symbols, symbols[1:])
            if pair in ranks
        ]
        if not ranked:
            break
        _, pair = min(ranked)
        symbols = _merge_symbols(symbols, pair)
    return symbols


def bpe_encode(model: SubwordModel, text: str) -> list[str]:
    """Segment text with a trained BPE model.

    Pieces concatenate (markers aside) back to the input; characters never
    seen in training simply pass through as single-character pieces.
    """
    model.require_kind("bpe")
    if text == "":
        return []
    marker = model.word_boundary_marker
    ranks = {pair: i for i, pair in enumerate(model.bpe_merges)}
    pieces: list[str] = []
    # Splitting on the literal space keeps encode/decode a strict roundtrip
    # even for runs of spaces (each empty "word" becomes a bare marker piece).
    for word in text.split(" "):
        pieces.extend(_encode_word(list(marker + word), ranks))
    return pieces
