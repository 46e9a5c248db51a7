"""Corpus and sentence BLEU with clipped modified n-gram precision."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from ..corpus import TextNormalizationConfig, normalize, tokenize_words
from ..errors import AlignmentError, EmptyInputError

MAX_ORDER = 4

SMOOTHING_NONE = "none"
SMOOTHING_ADD_ONE = "add_one_for_n_ge_2"


@dataclass
class BleuReport:
    score: float  # 0..100
    ngram_precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hypothesis_length: int
    reference_length: int
    smoothing: str = SMOOTHING_NONE

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "ngram_precisions": list(self.ngram_precisions),
            "brevity_penalty": self.brevity_penalty,
            "hypothesis_length": self.hypothesis_length,
            "reference_length": self.reference_length,
            "smoothing": self.smoothing,
        }


def _tokens(text: str, case_insensitive: bool) -> list[str]:
    config = TextNormalizationConfig(casefold=case_insensitive)
    return tokenize_words(normalize(text, config))


def _ngram_counts(tokens: list[str], n: int) -> Counter[tuple[str, ...]]:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _score(
    clipped: list[int],
    totals: list[int],
    hyp_len: int,
    ref_len: int,
    smoothing: str,
) -> BleuReport:
    precisions: list[float] = []
    for n in range(1, MAX_ORDER + 1):
        num, den = clipped[n - 1], totals[n - 1]
        if smoothing == SMOOTHING_ADD_ONE and n >= 2:
            num, den = num + 1, den + 1
        precisions.append(num / den if den > 0 else 0.0)
    if hyp_len == 0:
        bp = 0.0
    else:
        bp = min(1.0, math.exp(1.0 - ref_len / hyp_len))
    if any(p == 0.0 for p in precisions):
        score = 0.0
    else:
        score = 100.0 * bp * math.exp(math.fsum(math.log(p) for p in precisions) / MAX_ORDER)
    return BleuReport(
        score=score,
        ngram_precisions=tuple(precisions),
        brevity_penalty=bp,
        hypothesis_length=hyp_len,
        reference_length=ref_len,
        smoothing=smoothing,
    )


def bleu_corpus(
    hypotheses: list[str], references: list[str], case_insensitive: bool = False
) -> BleuReport:
    """Corpus-level BLEU: counts are pooled over all pairs before dividing.

    Unsmoothed, so a corpus with no matching n-gram at any order scores 0.
    """
    if len(hypotheses) != len(references):
        raise AlignmentError(
            f"{len(hypotheses)} hypotheses but {len(references)} references"
        )
    if not hypotheses:
        raise EmptyInputError("cannot score an empty corpus")
    clipped = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = _tokens(hyp, case_insensitive)
        ref_tokens = _tokens(ref, case_insensitive)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, MAX_ORDER + 1):
            hyp_counts = _ngram_counts(hyp_tokens, n)
            ref_counts = _ngram_counts(ref_tokens, n)
            totals[n - 1] += sum(hyp_counts.values())
            clipped[n - 1] += sum(
                min(count, ref_counts[gram]) for gram, count in hyp_counts.items()
            )
    return _score(clipped, totals, hyp_len, ref_len, SMOOTHING_NONE)


def bleu_sentence(
    hypothesis: str,
    reference: str,
    smoothing: str = SMOOTHING_ADD_ONE,
    case_insensitive: bool = False,
) -> float:
    """Sentence-level BLEU in [0, 100].

    Defaults to add-one smoothing for orders >= 2; pass smoothing="none" for
    the raw corpus formula on a single pair.
    """
    if smoothing not in (SMOOTHING_NONE, SMOOTHING_ADD_ONE):
        raise ValueError(f"unknown smoothing {smoothing!r}")
    hyp_tokens = _tokens(hypothesis, case_insensitive)
    ref_tokens = _tokens(reference, case_insensitive)
    clipped = []
    totals = []
    for n in range(1, MAX_ORDER + 1):
        hyp_counts = _ngram_counts(hyp_tokens, n)
        ref_counts = _ngram_counts(ref_tokens, n)
        totals.append(sum(hyp_counts.values()))
        clipped.append(sum(min(c, ref_counts[g]) for g, c in hyp_counts.items()))
    report = _score(clipped, totals, len(hyp_tokens), len(ref_tokens), smoothing)
    return report.score
