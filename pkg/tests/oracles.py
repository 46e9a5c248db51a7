"""Independent brute-force oracles the test suite checks the library against.

Everything here is deliberately naive: nested loops and exhaustive
enumeration instead of counters, pooled statistics or dynamic programming, so
that agreement with the library is evidence rather than tautology. Only the
word tokenizer is shared, since tokenization is the corpus module's contract
and has its own tests.
"""

from __future__ import annotations

import math

from lowmt.corpus import TextNormalizationConfig, normalize, tokenize_words


def _tokens(text: str, case_insensitive: bool) -> list[str]:
    return tokenize_words(normalize(text, TextNormalizationConfig(casefold=case_insensitive)))


# ---------------------------------------------------------------------------
# BLEU


def bleu_oracle(hypotheses: list[str], references: list[str], case_insensitive: bool = False) -> float:
    """Corpus BLEU by scanning and clipping n-grams with plain loops."""
    clipped = [0, 0, 0, 0]
    totals = [0, 0, 0, 0]
    hyp_len = 0
    ref_len = 0
    for hyp_text, ref_text in zip(hypotheses, references):
        hyp = _tokens(hyp_text, case_insensitive)
        ref = _tokens(ref_text, case_insensitive)
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in (1, 2, 3, 4):
            hyp_grams = [tuple(hyp[i : i + n]) for i in range(len(hyp) - n + 1)]
            ref_grams = [tuple(ref[i : i + n]) for i in range(len(ref) - n + 1)]
            totals[n - 1] += len(hyp_grams)
            seen = []
            for gram in hyp_grams:
                if gram in seen:
                    continue
                seen.append(gram)
                in_hyp = sum(1 for g in hyp_grams if g == gram)
                in_ref = sum(1 for g in ref_grams if g == gram)
                clipped[n - 1] += min(in_hyp, in_ref)
    if hyp_len == 0:
        return 0.0
    precisions = []
    for n in (1, 2, 3, 4):
        if totals[n - 1] == 0 or clipped[n - 1] == 0:
            return 0.0
        precisions.append(clipped[n - 1] / totals[n - 1])
    bp = min(1.0, math.exp(1.0 - ref_len / hyp_len))
    return 100.0 * bp * math.exp(sum(math.log(p) for p in precisions) / 4.0)


# ---------------------------------------------------------------------------
# chrF


def chrf_oracle(
    hypotheses: list[str],
    references: list[str],
    max_ngram: int = 6,
    beta: float = 3.0,
    case_insensitive: bool = False,
) -> float:
    """Character F-beta by enumerating n-gram overlaps order by order."""
    per_order = []
    for n in range(1, max_ngram + 1):
        hyp_total = 0
        ref_total = 0
        match = 0
        for hyp_text, ref_text in zip(hypotheses, references):
            hyp = "".join(
                ch for ch in normalize(hyp_text, TextNormalizationConfig(casefold=case_insensitive))
                if not ch.isspace()
            )
            ref = "".join(
                ch for ch in normalize(ref_text, TextNormalizationConfig(casefold=case_insensitive))
                if not ch.isspace()
            )
            hyp_grams = [hyp[i : i + n] for i in range(len(hyp) - n + 1)]
            ref_grams = [ref[i : i + n] for i in range(len(ref) - n + 1)]
            hyp_total += len(hyp_grams)
            ref_total += len(ref_grams)
            seen = []
            for gram in hyp_grams:
                if gram in seen:
                    continue
                seen.append(gram)
                match += min(
                    sum(1 for g in hyp_grams if g == gram),
                    sum(1 for g in ref_grams if g == gram),
                )
        per_order.append((hyp_total, ref_total, match))
    precisions = [m / h for h, r, m in per_order if h > 0 and r > 0]
    recalls = [m / r for h, r, m in per_order if h > 0 and r > 0]
    if not precisions:
        return 0.0
    precision = sum(precisions) / len(precisions)
    recall = sum(recalls) / len(recalls)
    if precision + recall == 0.0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * precision * recall / (b2 * precision + recall)


# ---------------------------------------------------------------------------
# TER


def _lev(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    rows = [list(range(len(b) + 1))]
    for i in range(1, len(a) + 1):
        row = [i] + [0] * len(b)
        for j in range(1, len(b) + 1):
            row[j] = min(
                rows[i - 1][j] + 1,
                row[j - 1] + 1,
                rows[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1),
            )
        rows.append(row)
    return rows[-1][-1]


def _legal_shifts(state: tuple[str, ...], ref_blocks: set, max_block: int):
    n = len(state)
    for start in range(n):
        for length in range(1, min(max_block, n - start) + 1):
            block = state[start : start + length]
            if block not in ref_blocks:
                continue
            remainder = state[:start] + state[start + length :]
            for dest in range(len(remainder) + 1):
                if dest == start:
                    continue
                yield remainder[:dest] + block + remainder[dest:]


def ter_oracle_exhaustive(
    hyp_tokens: list[str], ref_tokens: list[str], max_block: int = 10
) -> tuple[int, int]:
    """Search all shift sequences; returns (min total edits, shifts used).

    Each shift costs one edit, so nothing at depth >= current best can win;
    breadth-first search with that bound is exhaustive.
    """
    ref = tuple(ref_tokens)
    ref_blocks = set()
    for length in range(1, min(max_block, len(ref)) + 1):
        for start in range(len(ref) - length + 1):
            ref_blocks.add(ref[start : start + length])
    start_state = tuple(hyp_tokens)
    best = _lev(start_state, ref)
    best_shifts = 0
    visited = {start_state}
    frontier = [start_state]
    depth = 0
    while frontier and depth + 1 < best:
        depth += 1
        next_frontier = []
        for state in frontier:
            for shifted in _legal_shifts(state, ref_blocks, max_block):
                if shifted in visited:
                    continue
                visited.add(shifted)
                total = depth + _lev(shifted, ref)
                if total < best:
                    best = total
                    best_shifts = depth
                next_frontier.append(shifted)
        frontier = next_frontier
    return best, best_shifts


# ---------------------------------------------------------------------------
# Unigram segmentation


def enumerate_segmentations(text: str, vocab: dict[str, float]) -> list[list[str]]:
    if text == "":
        return [[]]
    out = []
    for j in range(1, len(text) + 1):
        piece = text[:j]
        if piece in vocab:
            for rest in enumerate_segmentations(text[j:], vocab):
                out.append([piece] + rest)
    return out


def viterbi_oracle(text: str, vocab: dict[str, float]) -> list[str] | None:
    """Argmax segmentation by full enumeration; ties to the smallest sequence.

    Scores accumulate left to right so float sums are bit-identical with a DP
    that extends prefixes one piece at a time.
    """
    best_score = None
    best_seq: tuple[str, ...] | None = None
    for seg in enumerate_segmentations(text, vocab):
        score = 0.0
        for piece in seg:
            score += vocab[piece]
        seq = tuple(seg)
        if (
            best_score is None
            or score > best_score
            or (score == best_score and seq < best_seq)
        ):
            best_score = score
            best_seq = seq
    return list(best_seq) if best_seq is not None else None
