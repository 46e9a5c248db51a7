"""Parallel corpus handling: loading, splitting, concatenation, text
normalization and the word tokenizer shared by the translation metrics.

The canonical corpus format is one sentence per line, UTF-8, with the source
and target sides in two separate files. Labeled corpora round-trip through a
three-column TSV (source, target, split), which is why tab and newline
characters inside sentences are rejected at load time.
"""

from __future__ import annotations

import random
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import (
    AlignmentError,
    CorpusFormatError,
    EmptyInputError,
    EncodingError,
    SizeError,
)

SPLITS = ("train", "dev", "test")


@dataclass
class TextNormalizationConfig:
    """Deterministic text normalization applied before metric tokenization."""

    casefold: bool = False
    unicode_normalization_form: str = "none"  # "none" | "canonical-composition"

    def __post_init__(self):
        if self.unicode_normalization_form not in ("none", "canonical-composition"):
            raise CorpusFormatError(
                f"unknown unicode normalization form: {self.unicode_normalization_form!r}"
            )


@dataclass
class ParallelCorpus:
    """Aligned source/target sentence pairs, optionally labeled train/dev/test."""

    pairs: list[tuple[str, str]]
    split_labels: list[str] | None = None

    def __post_init__(self):
        for i, (src, tgt) in enumerate(self.pairs):
            if src == "" and tgt == "":
                raise CorpusFormatError(f"pair {i} is empty on both sides")
        if self.split_labels is not None:
            if len(self.split_labels) != len(self.pairs):
                raise AlignmentError(
                    f"{len(self.pairs)} pairs but {len(self.split_labels)} split labels"
                )
            for i, label in enumerate(self.split_labels):
                if label not in SPLITS:
                    raise CorpusFormatError(f"pair {i} has unknown split label {label!r}")

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def sources(self) -> list[str]:
        return [src for src, _ in self.pairs]

    @property
    def targets(self) -> list[str]:
        return [tgt for _, tgt in self.pairs]

    def split_counts(self) -> dict[str, int]:
        counts = {name: 0 for name in SPLITS}
        if self.split_labels is None:
            counts["train"] = len(self.pairs)
        else:
            for label in self.split_labels:
                counts[label] += 1
        return counts

    def subset(self, split: str) -> "ParallelCorpus":
        """Pairs carrying the given label (everything counts as train when unlabeled)."""
        if split not in SPLITS:
            raise CorpusFormatError(f"unknown split label {split!r}")
        if self.split_labels is None:
            return ParallelCorpus(list(self.pairs) if split == "train" else [])
        pairs = [p for p, label in zip(self.pairs, self.split_labels) if label == split]
        return ParallelCorpus(pairs)

    def empty_side_indices(self) -> list[int]:
        """Indices of pairs where exactly one side is blank (kept, but flagged)."""
        return [i for i, (s, t) in enumerate(self.pairs) if (s == "") != (t == "")]


def _read_lines(path: str | Path) -> list[str]:
    raw = Path(path).read_bytes()
    chunks = raw.split(b"\n")
    if chunks and chunks[-1] == b"":  # trailing newline tolerated
        chunks.pop()
    lines = []
    for i, chunk in enumerate(chunks, start=1):
        if chunk.endswith(b"\r"):
            chunk = chunk[:-1]
        try:
            text = chunk.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"{path}: invalid UTF-8 on line {i}: {exc.reason}", line=i) from exc
        if "\t" in text:
            raise CorpusFormatError(f"{path}: tab character inside sentence on line {i}")
        lines.append(text)
    return lines


def load_parallel(source_path: str | Path, target_path: str | Path) -> ParallelCorpus:
    """Load an aligned pair of one-sentence-per-line UTF-8 files."""
    sources = _read_lines(source_path)
    targets = _read_lines(target_path)
    if len(sources) != len(targets):
        raise AlignmentError(
            f"line count mismatch: {source_path} has {len(sources)} lines, "
            f"{target_path} has {len(targets)} lines"
        )
    return ParallelCorpus(list(zip(sources, targets)))


def split_corpus(
    corpus: ParallelCorpus, dev_count: int, test_count: int, seed: int
) -> ParallelCorpus:
    """Label pairs train/dev/test via a seeded uniform shuffle.

    The pairs keep their original order; only the labels record the split, so
    the same seed always reproduces the same assignment bit for bit.
    """
    n = len(corpus)
    if dev_count < 0 or test_count < 0:
        raise SizeError("split sizes must be non-negative")
    if dev_count + test_count >= n:
        raise SizeError(
            f"dev ({dev_count}) + test ({test_count}) must be smaller than the corpus ({n})"
        )
    indices = list(range(n))
    random.Random(seed).shuffle(indices)
    dev = set(indices[:dev_count])
    test = set(indices[dev_count : dev_count + test_count])
    labels = ["dev" if i in dev else "test" if i in test else "train" for i in range(n)]
    return ParallelCorpus(list(corpus.pairs), labels)


def concat_bilingual(corpus: ParallelCorpus) -> Iterator[str]:
    """Stream every source sentence, then every target sentence.

    Labeled corpora contribute only their train split; this is the stream a
    shared subword model is trained on.
    """
    if len(corpus) == 0:
        raise EmptyInputError("cannot concatenate an empty corpus")
    selected = corpus.pairs
    if corpus.split_labels is not None:
        selected = [p for p, label in zip(corpus.pairs, corpus.split_labels) if label == "train"]
    for src, _ in selected:
        yield src
    for _, tgt in selected:
        yield tgt


def normalize(text: str, config: TextNormalizationConfig) -> str:
    """Apply the configured normalization; idempotent for any input."""
    if config.casefold:
        text = text.casefold()
    if config.unicode_normalization_form == "canonical-composition":
        text = unicodedata.normalize("NFC", text)
    return text


def tokenize_words(text: str) -> list[str]:
    """Whitespace-split, with every Unicode punctuation character as its own token.

    Joining the tokens (with the original separators removed) reconstructs the
    non-whitespace characters of the input exactly; no token is ever empty.
    """
    tokens: list[str] = []
    current: list[str] = []

    def flush():
        if current:
            tokens.append("".join(current))
            current.clear()

    for ch in text:
        if ch.isspace():
            flush()
        elif unicodedata.category(ch).startswith("P"):
            flush()
            tokens.append(ch)
        else:
            current.append(ch)
    flush()
    return tokens


def save_tsv(corpus: ParallelCorpus, path: str | Path) -> None:
    """Persist a labeled corpus as three-column TSV (source, target, split)."""
    labels = corpus.split_labels or ["train"] * len(corpus)
    with open(path, "w", encoding="utf-8") as fh:
        for (src, tgt), label in zip(corpus.pairs, labels):
            fh.write(f"{src}\t{tgt}\t{label}\n")


def load_tsv(path: str | Path) -> ParallelCorpus:
    """Load a corpus persisted by save_tsv."""
    pairs: list[tuple[str, str]] = []
    labels: list[str] = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        columns = line.split("\t")
        if len(columns) != 3:
            raise CorpusFormatError(f"{path}: expected 3 TSV columns on line {i}, got {len(columns)}")
        src, tgt, label = columns
        if label not in SPLITS:
            raise CorpusFormatError(f"{path}: unknown split label {label!r} on line {i}")
        pairs.append((src, tgt))
        labels.append(label)
    return ParallelCorpus(pairs, labels)
