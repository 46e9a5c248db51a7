"""Walkthrough: from raw parallel text to a shared subword model.

Builds a tiny English-Irish corpus in a temp directory, labels a
train/dev/test split, concatenates both sides into one stream and trains a
BPE and a unigram model on it, then encodes and decodes a few sentences.

Run from the repository root:  python demos/01_corpus_and_subword.py
"""

import tempfile
from pathlib import Path

from lowmt.corpus import concat_bilingual, load_parallel, save_tsv, split_corpus
from lowmt.subword import bpe_encode, bpe_train, decode, unigram_encode, unigram_train

PAIRS = [
    ("households where pet animals are kept;", "teaghlaigh ina gcoimeádtar peataí;"),
    ("the mark is applied anew, as appropriate.", "déanfar an mharcáil arís, mar is iomchuí."),
    ("the big house by the sea", "an teach mór cois farraige"),
    ("the cat sat on the mat", "shuigh an cat ar an mata"),
    ("pet animals stay at home", "fanann peataí sa bhaile"),
    ("a clear procedure should be established", "ba cheart nós imeachta soiléir a bhunú"),
    ("the court decides on a review", "cinneann an chúirt ar athbhreithniú"),
    ("the judgment shall be null and void", "beidh an breithiúnas ar neamhní"),
]

workdir = Path(tempfile.mkdtemp(prefix="lowmt-demo-"))
(workdir / "corpus.en").write_text("".join(src + "\n" for src, _ in PAIRS), encoding="utf-8")
(workdir / "corpus.ga").write_text("".join(tgt + "\n" for _, tgt in PAIRS), encoding="utf-8")

# 1. Load and split. The seed makes the dev/test selection reproducible.
corpus = load_parallel(workdir / "corpus.en", workdir / "corpus.ga")
labeled = split_corpus(corpus, dev_count=2, test_count=2, seed=7)
print("split:", labeled.split_counts())
save_tsv(labeled, workdir / "corpus.tsv")
print("labeled corpus written to", workdir / "corpus.tsv")

# 2. One shared model serves both languages: the training stream is every
#    source sentence followed by every target sentence (train split only).
stream = list(concat_bilingual(labeled))
print(f"shared training stream: {len(stream)} lines")

# 3. Train both subword model kinds on the same stream.
bpe = bpe_train(stream, vocab_size=90)
unigram = unigram_train(stream, vocab_size=80, seed_vocab_size=400)
print(f"bpe merges learned: {len(bpe.bpe_merges)}")
print(f"unigram vocabulary: {len(unigram.unigram_vocab)} pieces")

# 4. Segment a held-out sentence with each model; both decode losslessly.
sample = "teaghlaigh ina gcoimeádtar peataí;"
for name, pieces in [
    ("bpe", bpe_encode(bpe, sample)),
    ("unigram", unigram_encode(unigram, sample)),
]:
    print(f"{name:8s} {' '.join(pieces)}")
    assert decode(pieces) == sample

print("roundtrip holds for both model kinds")
