"""Automatic translation metrics: BLEU, TER and chrF, plus a combined report."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .bleu import (
    SMOOTHING_ADD_ONE,
    SMOOTHING_NONE,
    BleuReport,
    bleu_corpus,
    bleu_sentence,
)
from .chrf import DEFAULT_BETA, DEFAULT_MAX_NGRAM, ChrfReport, chrf
from .ter import TerReport, ter, ter_corpus

SCHEMA_VERSION = 1


@dataclass
class MetricsConfig:
    case_insensitive: bool = True
    chrf_max_ngram: int = DEFAULT_MAX_NGRAM
    chrf_beta: float = DEFAULT_BETA


@dataclass
class MetricReport:
    """BLEU + TER + chrF bundle for one hypothesis/reference corpus."""

    bleu: BleuReport
    ter: TerReport
    chrf: ChrfReport
    case_insensitive: bool
    segment_count: int

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "case_insensitive": self.case_insensitive,
            "segment_count": self.segment_count,
            "bleu": self.bleu.to_dict(),
            "ter": self.ter.to_dict(),
            "chrf": self.chrf.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def tsv_row(self) -> str:
        """One `BLEU TER CHRF3` row for assembling result tables."""
        return f"{self.bleu.score:.1f}\t{self.ter.score:.2f}\t{self.chrf.score:.2f}"

    def summary(self) -> str:
        return (
            f"BLEU {self.bleu.score:.1f}\n"
            f"TER {self.ter.score:.2f}\n"
            f"ChrF3 {self.chrf.score:.2f}"
        )


def evaluate_all(
    hypotheses: list[str],
    references: list[str],
    config: MetricsConfig | None = None,
) -> MetricReport:
    """Score a corpus with all three metrics under one configuration."""
    config = config or MetricsConfig()
    return MetricReport(
        bleu=bleu_corpus(hypotheses, references, case_insensitive=config.case_insensitive),
        ter=ter_corpus(hypotheses, references, case_insensitive=config.case_insensitive),
        chrf=chrf(
            hypotheses,
            references,
            max_ngram=config.chrf_max_ngram,
            beta=config.chrf_beta,
            case_insensitive=config.case_insensitive,
        ),
        case_insensitive=config.case_insensitive,
        segment_count=len(hypotheses),
    )


__all__ = [
    "BleuReport",
    "ChrfReport",
    "MetricReport",
    "MetricsConfig",
    "SMOOTHING_ADD_ONE",
    "SMOOTHING_NONE",
    "TerReport",
    "bleu_corpus",
    "bleu_sentence",
    "chrf",
    "evaluate_all",
    "ter",
    "ter_corpus",
]
