"""Unigram language-model subword training and Viterbi encoding.

Training seeds the vocabulary with frequent substrings, then alternates EM
(expected piece counts via lattice forward-backward over all segmentations)
with pruning (dropping the pieces whose removal least increases corpus loss)
until the requested vocabulary size is reached. Single characters are never
pruned, so every training string stays segmentable.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from typing import Iterable

from ..errors import ConfigurationError, CoverageError, EmptyInputError
from .model import BOUNDARY_MARKER, SubwordModel

MAX_PIECE_LENGTH = 8
NEG_INF = float("-inf")


def _logsumexp(values: list[float]) -> float:
    m = max(values)
    if m == NEG_INF:
        return NEG_INF
    return m + math.log(math.fsum(math.exp(v - m) for v in values))


def _word_counts(lines: Iterable[str]) -> Counter[str]:
    counts: Counter[str] = Counter()
    for line in lines:
        for word in line.split():
            counts[BOUNDARY_MARKER + word] += 1
    return counts


def _seed_vocabulary(
    word_counts: Counter[str], seed_vocab_size: int, max_piece_length: int
) -> dict[str, float]:
    """Single characters plus the most frequent substrings, as pseudo-frequencies."""
    chars: Counter[str] = Counter()
    substrings: Counter[str] = Counter()
    for word, count in word_counts.items():
        for ch in word:
            chars[ch] += count
        n = len(word)
        for i in range(n):
            for j in range(i + 2, min(i + max_piece_length, n) + 1):
                substrings[word[i:j]] += count
    budget = max(0, seed_vocab_size - len(chars))
    ranked = sorted(substrings.items(), key=lambda kv: (-kv[1], kv[0]))[:budget]
    seed: dict[str, float] = dict(chars)
    seed.update(ranked)
    return seed


def _lattice_edges(word: str, vocab: dict[str, float], max_len: int):
    """edges[i] = [(end, piece), ...] for every vocab piece starting at i."""
    n = len(word)
    edges: list[list[tuple[int, str]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, min(i + max_len, n) + 1):
            if word[i:j] in vocab:
                edges[i].append((j, word[i:j]))
    return edges


def _forward(word: str, vocab: dict[str, float], max_len: int, skip: str | None = None) -> float:
    """Marginal log probability of the word over all segmentations."""
    n = len(word)
    alpha = [NEG_INF] * (n + 1)
    alpha[0] = 0.0
    for i in range(n):
        if alpha[i] == NEG_INF:
            continue
        for j in range(i + 1, min(i + max_len, n) + 1):
            piece = word[i:j]
            if piece == skip:
                continue
            lp = vocab.get(piece)
            if lp is None:
                continue
            candidate = alpha[i] + lp
            alpha[j] = candidate if alpha[j] == NEG_INF else _logsumexp([alpha[j], candidate])
    return alpha[n]


def _em_step(
    word_items: list[tuple[str, int]], vocab: dict[str, float], max_len: int
) -> tuple[dict[str, float], float]:
    """One EM iteration; returns (updated log probs, corpus log likelihood).

    Expected counts are floored at a 1e-12 fraction of their total so numeric
    underflow can never delete a piece: the vocabulary shrinks only through
    pruning, and character coverage survives arbitrarily many iterations. The
    floor's likelihood impact is orders of magnitude below the monotonicity
    slack the trainer advertises.
    """
    expected: defaultdict[str, float] = defaultdict(float)
    log_likelihood = 0.0
    for word, freq in word_items:
        n = len(word)
        edges = _lattice_edges(word, vocab, max_len)
        alpha = [NEG_INF] * (n + 1)
        alpha[0] = 0.0
        for i in range(n):
            if alpha[i] == NEG_INF:
                continue
            for j, piece in edges[i]:
                candidate = alpha[i] + vocab[piece]
                alpha[j] = candidate if alpha[j] == NEG_INF else _logsumexp([alpha[j], candidate])
        z = alpha[n]
        if z == NEG_INF:
            raise CoverageError(f"word {word!r} is not segmentable by the current vocabulary")
        beta = [NEG_INF] * (n + 1)
        beta[n] = 0.0
        for i in range(n - 1, -1, -1):
            incoming = [vocab[piece] + beta[j] for j, piece in edges[i] if beta[j] != NEG_INF]
            if incoming:
                beta[i] = _logsumexp(incoming)
        log_likelihood += freq * z
        for i in range(n):
            if alpha[i] == NEG_INF:
                continue
            for j, piece in edges[i]:
                if beta[j] == NEG_INF:
                    continue
                posterior = math.exp(alpha[i] + vocab[piece] + beta[j] - z)
                expected[piece] += freq * posterior
    raw_total = math.fsum(expected.values())
    floor = raw_total * 1e-12
    counts = {piece: max(expected.get(piece, 0.0), floor) for piece in vocab}
    total = math.fsum(counts.values())
    updated = {piece: math.log(count / total) for piece, count in counts.items()}
    return updated, log_likelihood


def _prune(
    word_items: list[tuple[str, int]],
    vocab: dict[str, float],
    keep_size: int,
    max_len: int,
) -> dict[str, float]:
    """Drop multi-character pieces whose removal least increases corpus loss."""
    chars = {p for p in vocab if len(p) == 1}
    candidates = [p for p in vocab if len(p) > 1]
    containing: defaultdict[str, list[int]] = defaultdict(list)
    for idx, (word, _) in enumerate(word_items):
        seen = set()
        n = len(word)
        for i in range(n):
            for j in range(i + 2, min(i + max_len, n) + 1):
                piece = word[i:j]
                if piece in vocab and piece not in seen:
                    containing[piece].append(idx)
                    seen.add(piece)

    deltas: list[tuple[float, str]] = []
    for piece in candidates:
        delta = 0.0
        for idx in containing.get(piece, []):
            word, freq = word_items[idx]
            with_piece = _forward(word, vocab, max_len)
            without = _forward(word, vocab, max_len, skip=piece)
            if without == NEG_INF:
                delta = math.inf
                break
            delta += freq * (with_piece - without)
        deltas.append((delta, piece))

    budget = keep_size - len(chars)
    kept = sorted(deltas, key=lambda dp: (-dp[0], dp[1]))[:budget]
    survivors = chars | {piece for _, piece in kept}
    log_total = _logsumexp([lp for p, lp in vocab.items() if p in survivors])
    return {p: lp - log_total for p, lp in vocab.items() if p in survivors}


def unigram_train(
    lines: Iterable[str],
    vocab_size: int,
    seed_vocab_size: int | None = None,
    shrink_factor: float = 0.75,
    em_iterations: int = 2,
    max_piece_length: int = MAX_PIECE_LENGTH,
    em_trace: list[list[float]] | None = None,
) -> SubwordModel:
    """Train a unigram subword model on a stream of raw sentences.

    em_trace, when given, receives one list of corpus log likelihoods per EM
    block (likelihood is evaluated under the parameters entering each
    iteration, so each list is non-decreasing).
    """
    word_counts = _word_counts(lines)
    if not word_counts:
        raise EmptyInputError("cannot train a subword model on an empty stream")
    chars = {ch for word in word_counts for ch in word}
    if vocab_size <= len(chars):
        raise ConfigurationError(
            f"vocab_size must exceed the {len(chars)} distinct characters seen in training"
        )
    if seed_vocab_size is None:
        seed_vocab_size = 4 * vocab_size
    if seed_vocab_size <= vocab_size:
        raise ConfigurationError("seed_vocab_size must exceed vocab_size")
    if not 0.0 < shrink_factor < 1.0:
        raise ConfigurationError("shrink_factor must lie strictly between 0 and 1")
    if em_iterations < 1:
        raise ConfigurationError("em_iterations must be at least 1")

    seed = _seed_vocabulary(word_counts, seed_vocab_size, max_piece_length)
    log_total = math.log(math.fsum(seed.values()))
    vocab = {piece: math.log(freq) - log_total for piece, freq in seed.items()}
    word_items = sorted(word_counts.items())
    max_len = max(len(p) for p in vocab)

    while True:
        block: list[float] = []
        for _ in range(em_iterations):
            vocab, ll = _em_step(word_items, vocab, max_len)
            block.append(ll)
        if em_trace is not None:
            em_trace.append(block)
        if len(vocab) <= vocab_size:
            break
        keep = max(vocab_size, min(int(len(vocab) * shrink_factor), len(vocab) - 1))
        vocab = _prune(word_items, vocab, keep, max_len)
        max_len = max(len(p) for p in vocab)

    log_total = _logsumexp(list(vocab.values()))
    normalized = sorted(((p, lp - log_total) for p, lp in vocab.items()), key=lambda kv: (-kv[1], kv[0]))
    return SubwordModel(kind="unigram", vocab_size=vocab_size, unigram_vocab=normalized)


def unigram_encode(model: SubwordModel, text: str) -> list[str]:
    """Maximum-likelihood segmentation (Viterbi over the piece lattice).

    Equal-likelihood ties resolve to the lexicographically smallest piece
    sequence. Models whose vocabulary covers the boundary marker get the
    marker treatment (spaces become markers); hand-built vocabularies without
    the marker segment the raw text.
    """
    model.require_kind("unigram")
    if text == "":
        return []
    vocab = dict(model.unigram_vocab)
    if not vocab:
        raise CoverageError("empty unigram vocabulary")
    marker = model.word_boundary_marker
    if marker in vocab:
        seq = marker + text.replace(" ", marker)
    else:
        seq = text
    max_len = max(len(p) for p in vocab)
    n = len(seq)
    best: list[tuple[float, tuple[str, ...]] | None] = [None] * (n + 1)
    best[0] = (0.0, ())
    for j in range(1, n + 1):
        chosen: tuple[float, tuple[str, ...]] | None = None
        for i in range(max(0, j - max_len), j):
            prev = best[i]
            if prev is None:
                continue
            lp = vocab.get(seq[i:j])
            if lp is None:
                continue
            score = prev[0] + lp
            pieces = prev[1] + (seq[i:j],)
            if chosen is None or score > chosen[0] or (score == chosen[0] and pieces < chosen[1]):
                chosen = (score, pieces)
        best[j] = chosen
    if best[n] is None:
        bad = next(j for j in range(1, n + 1) if best[j] is None) - 1
        raise CoverageError(
            f"cannot segment {text!r}: no vocabulary piece covers {seq[bad]!r} at position {bad}"
        )
    return list(best[n][1])
