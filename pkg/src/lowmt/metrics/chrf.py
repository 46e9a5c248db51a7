"""Character n-gram F-score (chrF), recall-weighted with beta = 3 by default.

Whitespace is removed before n-gram extraction. N-gram statistics are pooled
over the corpus per order; precision and recall are averaged uniformly over
the orders for which both sides produced at least one n-gram, then combined
with the F-beta formula.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..corpus import TextNormalizationConfig, normalize
from ..errors import AlignmentError, EmptyInputError

DEFAULT_MAX_NGRAM = 6
DEFAULT_BETA = 3.0


@dataclass
class ChrfReport:
    score: float  # 0..1
    beta: float
    max_ngram: int
    char_precision: float
    char_recall: float

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "beta": self.beta,
            "max_ngram": self.max_ngram,
            "char_precision": self.char_precision,
            "char_recall": self.char_recall,
        }


def _chars(text: str, case_insensitive: bool) -> str:
    config = TextNormalizationConfig(casefold=case_insensitive)
    return "".join(normalize(text, config).split())


def _char_ngrams(text: str, n: int) -> Counter[str]:
    return Counter(text[i : i + n] for i in range(len(text) - n + 1))


def chrf(
    hypotheses: list[str],
    references: list[str],
    max_ngram: int = DEFAULT_MAX_NGRAM,
    beta: float = DEFAULT_BETA,
    case_insensitive: bool = False,
) -> ChrfReport:
    if len(hypotheses) != len(references):
        raise AlignmentError(
            f"{len(hypotheses)} hypotheses but {len(references)} references"
        )
    if not hypotheses:
        raise EmptyInputError("cannot score an empty corpus")

    hyp_totals = [0] * max_ngram
    ref_totals = [0] * max_ngram
    matches = [0] * max_ngram
    for hyp, ref in zip(hypotheses, references):
        hyp_chars = _chars(hyp, case_insensitive)
        ref_chars = _chars(ref, case_insensitive)
        for n in range(1, max_ngram + 1):
            hyp_grams = _char_ngrams(hyp_chars, n)
            ref_grams = _char_ngrams(ref_chars, n)
            hyp_totals[n - 1] += sum(hyp_grams.values())
            ref_totals[n - 1] += sum(ref_grams.values())
            matches[n - 1] += sum((hyp_grams & ref_grams).values())

    precisions = []
    recalls = []
    for n in range(max_ngram):
        if hyp_totals[n] > 0 and ref_totals[n] > 0:
            precisions.append(matches[n] / hyp_totals[n])
            recalls.append(matches[n] / ref_totals[n])
    if not precisions:
        precision = recall = 0.0
    else:
        precision = sum(precisions) / len(precisions)
        recall = sum(recalls) / len(recalls)

    if precision + recall == 0.0:
        score = 0.0
    else:
        b2 = beta * beta
        score = (1 + b2) * precision * recall / (b2 * precision + recall)
    return ChrfReport(
        score=score,
        beta=beta,
        max_ngram=max_ngram,
        char_precision=precision,
        char_recall=recall,
    )
