from __future__ import annotations

import math
import random

import pytest

from lowmt.errors import (
    ConfigurationError,
    CoverageError,
    ModelKindError,
    ParseError,
)
from lowmt.subword import (
    BOUNDARY_MARKER,
    SubwordModel,
    bpe_encode,
    bpe_train,
    bpe_train_from_counts,
    decode,
    load_model,
    save_model,
    unigram_encode,
    unigram_train,
)
from oracles import viterbi_oracle


def unigram_model(probs: dict[str, float]) -> SubwordModel:
    total = sum(probs.values())
    vocab = [(piece, math.log(p / total)) for piece, p in sorted(probs.items())]
    return SubwordModel(kind="unigram", vocab_size=len(vocab) + 1, unigram_vocab=vocab)


class TestBpeTrain:
    def test_first_two_merges_from_frequency_table(self):
        # Pair counts by hand: (e,s) appears in newest(6) + widest(3) = 9,
        # the top count; after that merge (es,t) also counts 9.
        counts = {"low": 5, "lower": 2, "newest": 6, "widest": 3}
        distinct = len(set("".join(counts))) + 1  # + boundary marker
        model = bpe_train_from_counts(counts, vocab_size=distinct + 2)
        assert model.bpe_merges == [("e", "s"), ("es", "t")]

    def test_single_word_merges(self):
        model = bpe_train_from_counts({"aaaa": 1}, vocab_size=4)
        assert model.bpe_merges == [("a", "a"), ("aa", "aa")]

    def test_vocab_too_small(self):
        with pytest.raises(ConfigurationError):
            bpe_train_from_counts({"ab": 1}, vocab_size=1)

    def test_deterministic(self):
        lines = ["the cat sat on the mat", "a cat and a rat"] * 3
        a = bpe_train(lines, vocab_size=20)
        b = bpe_train(lines, vocab_size=20)
        assert a.bpe_merges == b.bpe_merges

    def test_train_from_stream_matches_counts(self):
        lines = ["low low low low low lower lower"]
        stream_model = bpe_train(lines, vocab_size=9)
        counts_model = bpe_train_from_counts({"low": 5, "lower": 2}, vocab_size=9)
        assert stream_model.bpe_merges == counts_model.bpe_merges


class TestBpeEncode:
    def test_learned_merge_replay(self):
        model = SubwordModel(kind="bpe", vocab_size=16, bpe_merges=[("e", "s"), ("es", "t")])
        assert bpe_encode(model, "newest") == [BOUNDARY_MARKER, "n", "e", "w", "est"]

    def test_empty_string(self):
        model = SubwordModel(kind="bpe", vocab_size=16, bpe_merges=[])
        assert bpe_encode(model, "") == []

    def test_unknown_characters_pass_through(self):
        model = SubwordModel(kind="bpe", vocab_size=16, bpe_merges=[("a", "b")])
        assert bpe_encode(model, "ηξ") == [BOUNDARY_MARKER, "η", "ξ"]

    def test_wrong_kind(self):
        model = unigram_model({"a": 1.0})
        with pytest.raises(ModelKindError):
            bpe_encode(model, "a")

    def test_pieces_concatenate_to_input(self):
        lines = ["an ban can dan fan an ban an"]
        model = bpe_train(lines, vocab_size=12)
        pieces = bpe_encode(model, "ban an can")
        assert decode(pieces) == "ban an can"


class TestDecode:
    def test_empty(self):
        assert decode([]) == ""

    def test_roundtrip_simple(self):
        model = bpe_train(["the cat sat"], vocab_size=14)
        assert decode(bpe_encode(model, "the cat sat")) == "the cat sat"

    def test_roundtrip_accented_word(self):
        model = bpe_train(["gcoimeádtar na peataí"], vocab_size=20)
        assert decode(bpe_encode(model, "gcoimeádtar")) == "gcoimeádtar"


class TestBpeRoundtripProperty:
    def test_random_covered_strings(self):
        corpus = ["the quick brown fox jumps over the lazy dog", "pack my box with five dozen"]
        model = bpe_train(corpus, vocab_size=45)
        alphabet = sorted({ch for line in corpus for ch in line})
        rng = random.Random(99)
        for _ in range(400):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 30)))
            assert decode(bpe_encode(model, text)) == text


class TestUnigramTrain:
    def test_probabilities_normalized_and_word_piece_survives(self):
        model = unigram_train(["aaaa"] * 50, vocab_size=9, seed_vocab_size=10)
        total = sum(math.exp(lp) for _, lp in model.unigram_vocab)
        assert total == pytest.approx(1.0, abs=1e-9)
        pieces = dict(model.unigram_vocab)
        assert BOUNDARY_MARKER + "aaaa" in pieces
        assert all(lp <= 0.0 for lp in pieces.values())

    def test_seed_vocab_must_exceed_vocab(self):
        with pytest.raises(ConfigurationError):
            unigram_train(["ab ab"], vocab_size=8, seed_vocab_size=8)

    def test_character_coverage(self):
        model = unigram_train(["ab c", "ba ca"], vocab_size=5, seed_vocab_size=30)
        pieces = {p for p, _ in model.unigram_vocab}
        assert {"a", "b", "c", BOUNDARY_MARKER} <= pieces

    def test_shrink_factor_validated(self):
        with pytest.raises(ConfigurationError):
            unigram_train(["ab"], vocab_size=4, seed_vocab_size=9, shrink_factor=1.0)

    def test_em_loglik_nondecreasing(self):
        trace: list[list[float]] = []
        lines = [
            "beidh an coiste in ann",
            "an coiste a bheidh ann",
            "tá na peataí sa teach",
            "na peataí agus an coiste",
        ] * 3
        unigram_train(lines, vocab_size=40, seed_vocab_size=200, em_iterations=6, em_trace=trace)
        assert trace
        for block in trace:
            for earlier, later in zip(block, block[1:]):
                assert later >= earlier - 1e-9

    def test_reaches_requested_size(self):
        model = unigram_train(
            ["abc abd acd bcd abcd"] * 4, vocab_size=12, seed_vocab_size=40
        )
        assert len(model.unigram_vocab) == 12


class TestUnigramEncode:
    def test_whole_piece_beats_characters(self):
        model = unigram_model({"a": 0.4, "b": 0.4, "ab": 0.2})
        # log 0.2 = -1.609 beats log 0.16 = -1.833
        assert unigram_encode(model, "ab") == ["ab"]

    def test_empty(self):
        model = unigram_model({"a": 1.0})
        assert unigram_encode(model, "") == []

    def test_only_segmentation(self):
        model = unigram_model({"a": 1.0})
        assert unigram_encode(model, "aaa") == ["a", "a", "a"]

    def test_coverage_error(self):
        model = unigram_model({"a": 1.0})
        with pytest.raises(CoverageError):
            unigram_encode(model, "ax")

    def test_wrong_kind(self):
        model = SubwordModel(kind="bpe", vocab_size=4, bpe_merges=[])
        with pytest.raises(ModelKindError):
            unigram_encode(model, "a")

    def test_matches_enumeration_oracle(self):
        rng = random.Random(31)
        alphabet = "abc"
        for trial in range(150):
            pieces = {ch: rng.uniform(0.05, 1.0) for ch in alphabet}
            for _ in range(rng.randrange(0, 12)):
                length = rng.randrange(2, 4)
                piece = "".join(rng.choice(alphabet) for _ in range(length))
                pieces.setdefault(piece, rng.uniform(0.05, 1.0))
            model = unigram_model(dict(list(pieces.items())[:20]))
            vocab = dict(model.unigram_vocab)
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(1, 11)))
            assert unigram_encode(model, text) == viterbi_oracle(text, vocab)

    def test_trained_model_roundtrip(self):
        lines = ["an ban can dan", "ban an dan can"] * 2
        model = unigram_train(lines, vocab_size=12, seed_vocab_size=60)
        alphabet = sorted({ch for line in lines for ch in line})
        rng = random.Random(5)
        for _ in range(400):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 25)))
            assert decode(unigram_encode(model, text)) == text


class TestModelIO:
    def test_bpe_roundtrip(self, tmp_path):
        model = bpe_train(["the cat sat on the mat"], vocab_size=18)
        path = tmp_path / "model.bpe"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.kind == "bpe"
        assert loaded.vocab_size == model.vocab_size
        assert loaded.bpe_merges == model.bpe_merges

    def test_unigram_roundtrip_exact(self, tmp_path):
        model = unigram_train(["an ban can"] * 3, vocab_size=8, seed_vocab_size=40)
        path = tmp_path / "model.uni"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.unigram_vocab == model.unigram_vocab  # repr floats are exact

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "model.bpe"
        save_model(bpe_train(["a b ab ab"], vocab_size=6), path)
        text = path.read_text(encoding="utf-8")
        path.write_text(text[: len(text) // 2].rsplit("\n", 1)[0] + "\nbroken", encoding="utf-8")
        with pytest.raises(ParseError):
            load_model(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "model"
        path.write_text("sentencepiece 100\n", encoding="utf-8")
        with pytest.raises(ParseError) as info:
            load_model(path)
        assert info.value.line == 1


class TestSharedVocabulary:
    def test_bilingual_stream_covers_both_sides(self):
        from lowmt.corpus import ParallelCorpus, concat_bilingual

        corpus = ParallelCorpus([("pet animals", "peataí"), ("the office", "an oifig")])
        model = bpe_train(concat_bilingual(corpus), vocab_size=30)
        for text in ("pet animals", "peataí", "an oifig"):
            assert decode(bpe_encode(model, text)) == text
