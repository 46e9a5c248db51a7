"""lowmt: a toolkit for low-resource machine translation experiments.

Corpus handling and subword models (BPE, unigram LM) feed the training side;
BLEU/TER/chrF score the outputs; a staged random-search harness tunes
hyperparameters with emissions accounting; and the human-evaluation subsystem
runs blind SQM/MQM annotation campaigns with Cohen's-kappa agreement,
available both as a library and over HTTP for the browser UI.
"""

from .corpus import (
    ParallelCorpus,
    TextNormalizationConfig,
    concat_bilingual,
    load_parallel,
    normalize,
    split_corpus,
    tokenize_words,
)
from .metrics import (
    MetricReport,
    MetricsConfig,
    bleu_corpus,
    bleu_sentence,
    chrf,
    evaluate_all,
    ter,
    ter_corpus,
)
from .subword import (
    SubwordModel,
    bpe_encode,
    bpe_train,
    decode,
    load_model,
    save_model,
    unigram_encode,
    unigram_train,
)

__version__ = "0.1.0"

__all__ = [
    "MetricReport",
    "MetricsConfig",
    "ParallelCorpus",
    "SubwordModel",
    "TextNormalizationConfig",
    "bleu_corpus",
    "bleu_sentence",
    "bpe_encode",
    "bpe_train",
    "chrf",
    "concat_bilingual",
    "decode",
    "evaluate_all",
    "load_model",
    "load_parallel",
    "normalize",
    "save_model",
    "split_corpus",
    "ter",
    "ter_corpus",
    "tokenize_words",
    "unigram_encode",
    "unigram_train",
]
