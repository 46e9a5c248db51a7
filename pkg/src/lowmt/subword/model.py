"""Subword model container, piece decoding and the line-oriented file format.

A single model kind-agnostic container covers both trainers: BPE models carry
an ordered merge list, unigram models a piece vocabulary with log
probabilities. Word boundaries are encoded SentencePiece-style with a leading
marker character on word-initial pieces, so decoding is pure concatenation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from ..errors import ConfigurationError, ModelKindError, ParseError

# Reserved word-boundary character (U+2581 LOWER ONE EIGHTH BLOCK).
BOUNDARY_MARKER = "▁"

FORMAT_VERSION = 1

# Preset vocabulary sizes commonly swept when tuning; 16k is the default.
VOCAB_PRESETS = (4000, 8000, 16000, 32000)
DEFAULT_VOCAB_SIZE = 16000


@dataclass
class SubwordModel:
    kind: str  # "bpe" | "unigram"
    vocab_size: int
    bpe_merges: list[tuple[str, str]] = field(default_factory=list)
    unigram_vocab: list[tuple[str, float]] = field(default_factory=list)
    word_boundary_marker: str = BOUNDARY_MARKER

    def __post_init__(self):
        if self.kind not in ("bpe", "unigram"):
            raise ConfigurationError(f"unknown model kind {self.kind!r}")
        if len(self.word_boundary_marker) != 1:
            raise ConfigurationError("word boundary marker must be a single character")
        if self.kind == "bpe":
            seen = set()
            for left, right in self.bpe_merges:
                if (left, right) in seen:
                    raise ConfigurationError(f"duplicate merge ({left!r}, {right!r})")
                seen.add((left, right))
        else:
            total = math.fsum(math.exp(lp) for _, lp in self.unigram_vocab)
            if self.unigram_vocab and abs(total - 1.0) > 1e-6:
                raise ConfigurationError(f"unigram probabilities sum to {total}, not 1")

    def pieces(self) -> set[str]:
        """All pieces the model can emit (for unigram, the vocabulary)."""
        if self.kind == "unigram":
            return {piece for piece, _ in self.unigram_vocab}
        out = set()
        for left, right in self.bpe_merges:
            out.update((left, right, left + right))
        return out

    def require_kind(self, kind: str) -> None:
        if self.kind != kind:
            raise ModelKindError(f"operation requires a {kind} model, got {self.kind}")


def encode_text(model: SubwordModel, text: str) -> list[str]:
    """Dispatch to the encoder matching the model kind."""
    from .bpe import bpe_encode
    from .unigram import unigram_encode

    if model.kind == "bpe":
        return bpe_encode(model, text)
    return unigram_encode(model, text)


def decode(pieces: Iterable[str], marker: str = BOUNDARY_MARKER) -> str:
    """Concatenate pieces, turning boundary markers back into spaces.

    Inverse of both encoders for any text that does not itself contain the
    reserved marker character.
    """
    joined = "".join(pieces)
    if not joined:
        return ""
    text = joined.replace(marker, " ")
    # Word-initial markers contribute one leading space that was never there.
    if text.startswith(" ") and joined.startswith(marker):
        text = text[1:]
    return text


def save_model(model: SubwordModel, path: str | Path) -> None:
    """Write the versioned line-oriented model file.

    Header line: `kind vocab_size version`. Then one merge per line for BPE,
    or one `piece<TAB>logprob` per line for unigram. Floats are written with
    repr so load(save(m)) reproduces probabilities exactly.
    """
    if model.word_boundary_marker != BOUNDARY_MARKER:
        raise ConfigurationError(
            "the model file format reserves U+2581 as boundary marker; "
            f"cannot persist marker {model.word_boundary_marker!r}"
        )
    lines = [f"{model.kind} {model.vocab_size} {FORMAT_VERSION}"]
    if model.kind == "bpe":
        lines += [f"{left}\t{right}" for left, right in model.bpe_merges]
    else:
        lines += [f"{piece}\t{lp!r}" for piece, lp in model.unigram_vocab]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> SubwordModel:
    """Read a model file written by save_model."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise ParseError(f"{path}: empty model file", line=1)
    header = lines[0].split(" ")
    if len(header) != 3:
        raise ParseError(f"{path}: header must be 'kind vocab_size version'", line=1)
    kind, vocab_size_s, version_s = header
    if kind not in ("bpe", "unigram"):
        raise ParseError(f"{path}: unknown model kind {kind!r}", line=1)
    try:
        vocab_size = int(vocab_size_s)
        version = int(version_s)
    except ValueError:
        raise ParseError(f"{path}: non-integer vocab size or version", line=1) from None
    if version != FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported format version {version}", line=1)

    if kind == "bpe":
        merges = []
        for i, line in enumerate(lines[1:], start=2):
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ParseError(f"{path}: malformed merge line", line=i)
            merges.append((parts[0], parts[1]))
        return SubwordModel(kind="bpe", vocab_size=vocab_size, bpe_merges=merges)

    vocab = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise ParseError(f"{path}: malformed vocabulary line", line=i)
        try:
            lp = float(parts[1])
        except ValueError:
            raise ParseError(f"{path}: bad log probability {parts[1]!r}", line=i) from None
        vocab.append((parts[0], lp))
    return SubwordModel(kind="unigram", vocab_size=vocab_size, unigram_vocab=vocab)
