"""MQM penalties and SQM aggregation."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyInputError
from .session import CATEGORIES, ErrorAnnotation, MqmWeights, SqmRating


@dataclass
class MqmSystemReport:
    system_id: str
    total_penalty: float
    penalty_per_segment: float
    category_counts: dict[str, int]  # severity-blind raw counts
    total_errors: int
    quality_score: float  # 0..100, this toolkit's normalized convention


def _unit_penalty(tags: list[ErrorAnnotation], weights: MqmWeights) -> float:
    """Penalty for one (annotator, segment, system) unit.

    A non_translation tag marks the whole unit as beyond itemization, so any
    other tags on the same unit are excluded from the weighted penalty (they
    still show up in the raw counts).
    """
    non_translation = [t for t in tags if t.category == "non_translation"]
    if non_translation:
        return weights.non_translation * len(non_translation)
    return sum(weights.major if t.severity == "major" else weights.minor for t in tags)


def mqm_penalty(
    annotations: list[ErrorAnnotation],
    weights: MqmWeights | None = None,
    segment_count: int | None = None,
    annotator_count: int | None = None,
    systems: list[str] | None = None,
) -> dict[str, MqmSystemReport]:
    """Per-system weighted penalties and severity-blind category counts.

    segment_count/annotator_count define the normalization denominator; when
    omitted they are inferred from the annotations themselves (fine for
    complete campaigns, inaccurate if some units carry no errors).
    """
    weights = weights or MqmWeights()
    if systems is None:
        systems = sorted({a.system_id for a in annotations})
    if segment_count is None:
        segment_count = len({a.segment_id for a in annotations}) or 1
    if annotator_count is None:
        annotator_count = len({a.annotator_id for a in annotations}) or 1

    reports: dict[str, MqmSystemReport] = {}
    for system in systems:
        tags = [a for a in annotations if a.system_id == system]
        units: dict[tuple[str, int], list[ErrorAnnotation]] = {}
        for tag in tags:
            units.setdefault((tag.annotator_id, tag.segment_id), []).append(tag)
        total_penalty = sum(_unit_penalty(unit, weights) for unit in units.values())
        counts = {category: 0 for category in CATEGORIES}
        for tag in tags:
            counts[tag.category] += 1
        denominator = weights.non_translation * segment_count * annotator_count
        quality = 100.0 * (1.0 - total_penalty / denominator)
        reports[system] = MqmSystemReport(
            system_id=system,
            total_penalty=total_penalty,
            penalty_per_segment=total_penalty / (segment_count * annotator_count),
            category_counts=counts,
            total_errors=len(tags),
            quality_score=min(100.0, max(0.0, quality)),
        )
    return reports


def sqm_aggregate(ratings: list[SqmRating]) -> dict[str, dict]:
    """Mean rating per system, with per-annotator means alongside."""
    if not ratings:
        raise EmptyInputError("no ratings to aggregate")
    out: dict[str, dict] = {}
    for system in sorted({r.system_id for r in ratings}):
        system_ratings = [r for r in ratings if r.system_id == system]
        by_annotator: dict[str, list[int]] = {}
        for rating in system_ratings:
            by_annotator.setdefault(rating.annotator_id, []).append(rating.rating)
        out[system] = {
            "mean": sum(r.rating for r in system_ratings) / len(system_ratings),
            "count": len(system_ratings),
            "by_annotator": {
                annotator: sum(values) / len(values)
                for annotator, values in sorted(by_annotator.items())
            },
        }
    return out
