"""Walkthrough: scoring hypothesis translations with BLEU, TER and chrF3.

Scores a small hypothesis set against references at the corpus level, then
looks at sentence-level BLEU and the TER edit breakdown for single pairs.

Run from the repository root:  python demos/02_translation_metrics.py
"""

from lowmt.metrics import MetricsConfig, bleu_sentence, evaluate_all, ter

REFERENCES = [
    "teaghlaigh ina gcoimeádtar peataí;",
    "déanfar an mharcáil arís, mar is iomchuí.",
    "beidh an breithiúnas ar neamhní go hiomlán.",
    "an teach mór cois farraige",
]

# A system that gets one sentence exactly right and drifts elsewhere.
HYPOTHESES = [
    "teaghlaigh ina gcoimeádtar peataí;",
    "go gcuirtear an marc i bhfeidhme, de réir mar is iomchuí.",
    "beidh an breithiúnas ar neamhní.",
    "an teach cois farraige mór",
]

# 1. Corpus-level report: all three metrics under one configuration.
#    Scores are case-insensitive, like the reported results they feed.
report = evaluate_all(HYPOTHESES, REFERENCES, MetricsConfig(case_insensitive=True))
print(report.summary())
print()
print("machine-readable row (BLEU TER CHRF3):", report.tsv_row())
print("brevity penalty:", round(report.bleu.brevity_penalty, 4))
print("n-gram precisions:", [round(p, 4) for p in report.bleu.ngram_precisions])
print()

# 2. Sentence-level BLEU. The identity pair scores 100; short near-misses
#    need smoothing to score above zero at all.
for hyp, ref in zip(HYPOTHESES, REFERENCES):
    smoothed = bleu_sentence(hyp, ref, case_insensitive=True)
    print(f"sentence BLEU {smoothed:5.1f}  {hyp}")
print()

# 3. TER counts the edits: the last pair is one block shift away.
edits = ter("an teach cois farraige mór", "an teach mór cois farraige")
print("TER on the shifted sentence:", round(edits.score, 3))
print(
    f"  shifts={edits.shifts} insertions={edits.insertions} "
    f"deletions={edits.deletions} substitutions={edits.substitutions}"
)
