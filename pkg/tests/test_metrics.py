from __future__ import annotations

import random

import pytest

from lowmt.errors import AlignmentError, DegenerateReferenceError, EmptyInputError
from lowmt.metrics import (
    MetricsConfig,
    bleu_corpus,
    bleu_sentence,
    chrf,
    evaluate_all,
    ter,
    ter_corpus,
)
from oracles import bleu_oracle, chrf_oracle, ter_oracle_exhaustive

WORDS = ["an", "bhfuil", "cead", "agam", "dul", "go", "dtí", "an", "leithreas", "beidh", "sé", "ann"]


def random_sentence(rng: random.Random, max_tokens: int, alphabet=WORDS) -> str:
    return " ".join(rng.choice(alphabet) for _ in range(rng.randrange(0, max_tokens + 1)))


class TestBleuCorpus:
    def test_identity_is_exactly_100(self):
        refs = ["the cat sat on the mat .", "a stitch in time saves nine !"]
        report = bleu_corpus(refs, refs)
        assert report.score == 100.0
        assert report.ngram_precisions == (1.0, 1.0, 1.0, 1.0)
        assert report.brevity_penalty == 1.0

    def test_length_mismatch(self):
        with pytest.raises(AlignmentError):
            bleu_corpus(["a"], ["a", "b"])

    def test_empty_corpus(self):
        with pytest.raises(EmptyInputError):
            bleu_corpus([], [])

    def test_zero_when_no_fourgram_matches(self):
        assert bleu_corpus(["a b c d"], ["a b c x"]).score == 0.0

    def test_case_insensitive_flag(self):
        mixed = bleu_corpus(["The Cat Sat On The Mat"], ["the cat sat on the mat"], case_insensitive=True)
        assert mixed.score == 100.0

    def test_matches_oracle_on_random_pairs(self):
        rng = random.Random(2024)
        hyps = [random_sentence(rng, 12) for _ in range(60)]
        refs = [random_sentence(rng, 12) for _ in range(60)]
        assert bleu_corpus(hyps, refs).score == pytest.approx(bleu_oracle(hyps, refs), abs=1e-9)

    def test_permutation_invariance(self):
        rng = random.Random(5)
        pairs = [(random_sentence(rng, 8), random_sentence(rng, 8)) for _ in range(30)]
        shuffled = list(pairs)
        rng.shuffle(shuffled)
        direct = bleu_corpus([h for h, _ in pairs], [r for _, r in pairs])
        permuted = bleu_corpus([h for h, _ in shuffled], [r for _, r in shuffled])
        assert direct.score == pytest.approx(permuted.score, abs=1e-12)


class TestBleuSentence:
    def test_identity(self):
        assert bleu_sentence("teaghlaigh ina gcoimeádtar peataí;", "teaghlaigh ina gcoimeádtar peataí;") == 100.0

    def test_empty_hypothesis(self):
        assert bleu_sentence("", "a b c") == 0.0

    def test_unsmoothed_zero(self):
        assert bleu_sentence("a b c d", "a b c x", smoothing="none") == 0.0

    def test_smoothing_lifts_zero(self):
        assert bleu_sentence("a b c d", "a b c x") > 0.0


class TestTer:
    def test_identity(self):
        report = ter("an teach mór", "an teach mór")
        assert report.score == 0.0
        assert report.total_edits == 0

    def test_single_shift(self):
        report = ter("b a", "a b")
        assert report.shifts == 1
        assert report.total_edits == 1
        assert report.score == 0.5

    def test_single_substitution(self):
        report = ter("a x c", "a b c")
        assert report.substitutions == 1
        assert report.score == pytest.approx(1 / 3)

    def test_empty_hypothesis_counts_deletions(self):
        report = ter("", "a b c")
        assert report.deletions == 3
        assert report.score == 1.0

    def test_empty_reference_degenerate(self):
        with pytest.raises(DegenerateReferenceError):
            ter("a", "")

    def test_upper_bound(self):
        rng = random.Random(11)
        for _ in range(60):
            hyp = random_sentence(rng, 6, alphabet=["a", "b", "c", "d"])
            ref = random_sentence(rng, 6, alphabet=["a", "b", "c", "d"])
            if not ref.split():
                continue
            report = ter(hyp, ref)
            h, r = len(hyp.split()), len(ref.split())
            assert report.score <= max(h, r) / r + 1e-12

    def test_greedy_never_beats_exhaustive(self):
        rng = random.Random(404)
        beneficial_single_shift_checked = 0
        for _ in range(120):
            hyp_tokens = [rng.choice("abcde") for _ in range(rng.randrange(1, 7))]
            ref_tokens = [rng.choice("abcde") for _ in range(rng.randrange(1, 7))]
            greedy = ter(" ".join(hyp_tokens), " ".join(ref_tokens))
            optimal, shifts_used = ter_oracle_exhaustive(hyp_tokens, ref_tokens)
            assert greedy.total_edits >= optimal
            if shifts_used <= 1:
                assert greedy.total_edits == optimal
                beneficial_single_shift_checked += 1
        assert beneficial_single_shift_checked > 50


class TestTerCorpus:
    def test_identity(self):
        refs = ["a b", "c d e"]
        assert ter_corpus(refs, refs).score == 0.0

    def test_single_pair_equals_sentence(self):
        single = ter("a x c", "a b c")
        corpus = ter_corpus(["a x c"], ["a b c"])
        assert corpus.score == single.score
        assert corpus.total_edits == single.total_edits

    def test_micro_average_matches_per_sentence_sum(self):
        rng = random.Random(17)
        hyps = [random_sentence(rng, 8) for _ in range(10)]
        refs = [random_sentence(rng, 8) or "ann" for _ in range(10)]
        corpus = ter_corpus(hyps, refs)
        edits = sum(ter(h, r).total_edits for h, r in zip(hyps, refs))
        ref_len = sum(len(r.split()) for r in refs)
        assert corpus.total_edits == edits
        assert corpus.score == pytest.approx(edits / ref_len)


class TestChrf:
    def test_identity(self):
        refs = ["abcdef ghijkl", "mnopqr"]
        assert chrf(refs, refs).score == 1.0

    def test_disjoint(self):
        assert chrf(["aaa"], ["bbb"]).score == 0.0

    def test_hand_enumerated_pair(self):
        # Oracle by hand: orders 1..4 are effective, precision = recall =
        # (3/4 + 2/3 + 1/2 + 0) / 4; with P = R the F-beta collapses to P.
        expected = (3 / 4 + 2 / 3 + 1 / 2 + 0) / 4
        report = chrf(["abcd"], ["abce"])
        assert report.score == pytest.approx(expected, abs=1e-9)
        assert report.char_precision == pytest.approx(expected, abs=1e-9)

    def test_matches_oracle_on_random_pairs(self):
        rng = random.Random(99)
        hyps = [random_sentence(rng, 12) for _ in range(40)]
        refs = [random_sentence(rng, 12) for _ in range(40)]
        assert chrf(hyps, refs).score == pytest.approx(chrf_oracle(hyps, refs), abs=1e-9)

    def test_beta_one_symmetry(self):
        rng = random.Random(3)
        hyps = [random_sentence(rng, 10) for _ in range(15)]
        refs = [random_sentence(rng, 10) for _ in range(15)]
        ab = chrf(hyps, refs, beta=1.0)
        ba = chrf(refs, hyps, beta=1.0)
        assert ab.score == pytest.approx(ba.score, abs=1e-12)
        assert ab.char_precision == pytest.approx(ba.char_recall, abs=1e-12)

    def test_whitespace_ignored(self):
        assert chrf(["ab cd"], ["abcd"]).score == 1.0


class TestEvaluateAll:
    def test_identity_bundle(self):
        refs = ["the cat sat on the mat", "nine men went to mow"]
        report = evaluate_all(refs, refs)
        assert report.bleu.score == 100.0
        assert report.ter.score == 0.0
        assert report.chrf.score == 1.0

    def test_agrees_with_individual_calls(self):
        rng = random.Random(8)
        hyps = [random_sentence(rng, 10) or "ann" for _ in range(12)]
        refs = [random_sentence(rng, 10) or "ann" for _ in range(12)]
        config = MetricsConfig(case_insensitive=True)
        bundle = evaluate_all(hyps, refs, config)
        assert bundle.bleu.score == bleu_corpus(hyps, refs, case_insensitive=True).score
        assert bundle.ter.score == ter_corpus(hyps, refs, case_insensitive=True).score
        assert bundle.chrf.score == chrf(hyps, refs, case_insensitive=True).score

    def test_empty_hypothesis_lines(self):
        report = evaluate_all(["", ""], ["an teach", "mór"])
        assert report.bleu.score == 0.0
        assert report.ter.score == 1.0
        assert report.ter.deletions == report.ter.reference_length
        assert report.chrf.score < 0.1

    def test_case_insensitivity_property(self):
        rng = random.Random(21)
        hyps = [random_sentence(rng, 8) or "ann" for _ in range(10)]
        refs = [random_sentence(rng, 8) or "ann" for _ in range(10)]
        config = MetricsConfig(case_insensitive=True)
        plain = evaluate_all(hyps, refs, config)
        upper = evaluate_all([h.upper() for h in hyps], refs, config)
        assert plain.bleu.score == pytest.approx(upper.bleu.score, abs=1e-12)
        assert plain.ter.score == pytest.approx(upper.ter.score, abs=1e-12)
        assert plain.chrf.score == pytest.approx(upper.chrf.score, abs=1e-12)

    def test_json_and_tsv_shapes(self):
        report = evaluate_all(["a b c d"], ["a b c d"])
        payload = report.to_dict()
        assert payload["schema_version"] == 1
        assert payload["bleu"]["score"] == 100.0
        assert report.tsv_row() == "100.0\t0.00\t1.00"
