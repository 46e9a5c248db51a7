"""Translation error rate: word edit distance plus greedy block shifts.

A shift moves a contiguous block of hypothesis words (length <= 10, any
distance) to a new position, provided the block occurs verbatim somewhere in
the reference. The search is greedy: at each round the shift that most
reduces the word edit distance is applied, until no shift helps. The final
score is (shifts + insertions + deletions + substitutions) / reference length.

Edit counts follow the translation reading: a deletion is a reference word
the hypothesis failed to produce, an insertion is a spurious hypothesis word.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus import TextNormalizationConfig, normalize, tokenize_words
from ..errors import AlignmentError, DegenerateReferenceError, EmptyInputError

MAX_SHIFT_BLOCK = 10


@dataclass
class TerReport:
    score: float
    insertions: int
    deletions: int
    substitutions: int
    shifts: int
    reference_length: int

    @property
    def total_edits(self) -> int:
        return self.insertions + self.deletions + self.substitutions + self.shifts

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "insertions": self.insertions,
            "deletions": self.deletions,
            "substitutions": self.substitutions,
            "shifts": self.shifts,
            "total_edits": self.total_edits,
            "reference_length": self.reference_length,
        }


def _tokens(text: str, case_insensitive: bool) -> list[str]:
    config = TextNormalizationConfig(casefold=case_insensitive)
    return tokenize_words(normalize(text, config))


def _edit_distance(hyp: list[str], ref: list[str]) -> int:
    m, n = len(hyp), len(ref)
    if m == 0:
        return n
    if n == 0:
        return m
    previous = np.arange(n + 1)
    current = np.empty(n + 1, dtype=np.int64)
    for i in range(1, m + 1):
        current[0] = i
        for j in range(1, n + 1):
            cost = 0 if hyp[i - 1] == ref[j - 1] else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
        previous, current = current, previous
    return int(previous[n])


def _edit_breakdown(hyp: list[str], ref: list[str]) -> tuple[int, int, int]:
    """(insertions, deletions, substitutions) from a full DP backtrace."""
    m, n = len(hyp), len(ref)
    dp = np.zeros((m + 1, n + 1), dtype=np.int64)
    dp[:, 0] = np.arange(m + 1)
    dp[0, :] = np.arange(n + 1)
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            cost = 0 if hyp[i - 1] == ref[j - 1] else 1
            dp[i, j] = min(dp[i - 1, j] + 1, dp[i, j - 1] + 1, dp[i - 1, j - 1] + cost)
    insertions = deletions = substitutions = 0
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dp[i, j] == dp[i - 1, j - 1] + (0 if hyp[i - 1] == ref[j - 1] else 1):
            if hyp[i - 1] != ref[j - 1]:
                substitutions += 1
            i, j = i - 1, j - 1
        elif i > 0 and dp[i, j] == dp[i - 1, j] + 1:
            insertions += 1  # spurious hypothesis word
            i -= 1
        else:
            deletions += 1  # reference word the hypothesis is missing
            j -= 1
    return insertions, deletions, substitutions


def _reference_blocks(ref: list[str], max_len: int) -> set[tuple[str, ...]]:
    blocks: set[tuple[str, ...]] = set()
    for length in range(1, min(max_len, len(ref)) + 1):
        for start in range(len(ref) - length + 1):
            blocks.add(tuple(ref[start : start + length]))
    return blocks


def _best_shift(hyp: list[str], ref: list[str], base: int) -> tuple[int, list[str]] | None:
    """The legal shift reducing edit distance the most, or None."""
    blocks = _reference_blocks(ref, MAX_SHIFT_BLOCK)
    best: tuple[int, int, int, int, list[str]] | None = None  # (-gain, start, dest, length, result)
    for start in range(len(hyp)):
        for length in range(1, min(MAX_SHIFT_BLOCK, len(hyp) - start) + 1):
            block = tuple(hyp[start : start + length])
            if block not in blocks:
                continue
            remainder = hyp[:start] + hyp[start + length :]
            for dest in range(len(remainder) + 1):
                if dest == start:
                    continue  # no-op
                shifted = remainder[:dest] + list(block) + remainder[dest:]
                gain = base - _edit_distance(shifted, ref)
                if gain <= 0:
                    continue
                key = (-gain, start, dest, length, shifted)
                if best is None or key[:4] < best[:4]:
                    best = key
    if best is None:
        return None
    return -best[0], best[4]


def ter(hypothesis: str, reference: str, case_insensitive: bool = False) -> TerReport:
    """Greedy-shift TER for one sentence pair."""
    hyp = _tokens(hypothesis, case_insensitive)
    ref = _tokens(reference, case_insensitive)
    return _ter_tokens(hyp, ref)


def _ter_tokens(hyp: list[str], ref: list[str]) -> TerReport:
    if not ref and hyp:
        raise DegenerateReferenceError("reference is empty but hypothesis is not")
    if not ref and not hyp:
        return TerReport(0.0, 0, 0, 0, 0, 0)
    shifts = 0
    current = list(hyp)
    distance = _edit_distance(current, ref)
    while distance > 0:
        found = _best_shift(current, ref, distance)
        if found is None:
            break
        gain, current = found
        shifts += 1
        distance -= gain
    insertions, deletions, substitutions = _edit_breakdown(current, ref)
    total = shifts + insertions + deletions + substitutions
    return TerReport(
        score=total / len(ref),
        insertions=insertions,
        deletions=deletions,
        substitutions=substitutions,
        shifts=shifts,
        reference_length=len(ref),
    )


def ter_corpus(
    hypotheses: list[str], references: list[str], case_insensitive: bool = False
) -> TerReport:
    """Micro-averaged TER: total edits over total reference tokens."""
    if len(hypotheses) != len(references):
        raise AlignmentError(
            f"{len(hypotheses)} hypotheses but {len(references)} references"
        )
    if not hypotheses:
        raise EmptyInputError("cannot score an empty corpus")
    insertions = deletions = substitutions = shifts = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        report = ter(hyp, ref, case_insensitive)
        insertions += report.insertions
        deletions += report.deletions
        substitutions += report.substitutions
        shifts += report.shifts
        ref_len += report.reference_length
    total = insertions + deletions + substitutions + shifts
    if ref_len == 0:
        return TerReport(0.0, insertions, deletions, substitutions, shifts, 0)
    return TerReport(total / ref_len, insertions, deletions, substitutions, shifts, ref_len)
