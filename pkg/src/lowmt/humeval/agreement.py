"""Cohen's kappa between two annotators, per system and error category.

Agreement is observed at the sentence level: for each segment the question is
binary, "did this annotator flag at least one error of this category on this
system's output?". Kappa is (p_o - p_e) / (1 - p_e); when chance agreement is
total (p_e = 1, both annotators constant) the convention is 1.0 for identical
constants and 0.0 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import CompletenessError
from .session import CATEGORIES, STATUS_DONE, AnnotationSession, ErrorAnnotation

AGREEMENT_BANDS = (
    (0.0, "none"),
    (0.20, "slight"),
    (0.40, "fair"),
    (0.60, "moderate"),
    (0.80, "substantial"),
    (1.00, "almost perfect"),
)


def interpret_kappa(kappa: float) -> str:
    """Conventional verbal band for a kappa value."""
    if kappa <= 0.0:
        return "none"
    for upper, label in AGREEMENT_BANDS[1:]:
        if kappa <= upper:
            return label
    return "almost perfect"


@dataclass
class KappaEntry:
    system_id: str
    category: str
    kappa: float
    both_flagged: int
    only_a: int
    only_b: int
    neither: int
    p_observed: float
    p_expected: float
    band: str

    def to_dict(self) -> dict:
        return {
            "system": self.system_id,
            "category": self.category,
            "kappa": self.kappa,
            "both_flagged": self.both_flagged,
            "only_a": self.only_a,
            "only_b": self.only_b,
            "neither": self.neither,
            "p_observed": self.p_observed,
            "p_expected": self.p_expected,
            "band": self.band,
        }


def kappa_from_flags(flags_a: set[int], flags_b: set[int], segment_ids: list[int]) -> KappaEntry:
    """Kappa for two binary flag sets over the same segments."""
    n = len(segment_ids)
    if n == 0:
        raise CompletenessError("kappa needs at least one segment")
    both = sum(1 for s in segment_ids if s in flags_a and s in flags_b)
    only_a = sum(1 for s in segment_ids if s in flags_a and s not in flags_b)
    only_b = sum(1 for s in segment_ids if s not in flags_a and s in flags_b)
    neither = n - both - only_a - only_b
    p_o = (both + neither) / n
    p_a = (both + only_a) / n
    p_b = (both + only_b) / n
    p_e = p_a * p_b + (1.0 - p_a) * (1.0 - p_b)
    if p_e >= 1.0:
        kappa = 1.0 if p_o == 1.0 else 0.0
    else:
        kappa = (p_o - p_e) / (1.0 - p_e)
    return KappaEntry(
        system_id="",
        category="",
        kappa=kappa,
        both_flagged=both,
        only_a=only_a,
        only_b=only_b,
        neither=neither,
        p_observed=p_o,
        p_expected=p_e,
        band=interpret_kappa(kappa),
    )


def kappa_per_category(
    annotations: list[ErrorAnnotation],
    annotator_a: str,
    annotator_b: str,
    system: str,
    segments: list[int],
    category: str,
    session: AnnotationSession | None = None,
) -> KappaEntry:
    """Kappa for one (system, category) cell.

    When a session is supplied, both annotators must have completed every
    segment for the system; otherwise absence of a flag is indistinguishable
    from absence of work.
    """
    if session is not None:
        for annotator in (annotator_a, annotator_b):
            missing = [
                seg_id
                for seg_id in segments
                if session.status.get((annotator, seg_id, system)) != STATUS_DONE
            ]
            if missing:
                raise CompletenessError(
                    f"annotator {annotator!r} has not completed segments {missing} for {system!r}"
                )
    flags_a = {
        a.segment_id
        for a in annotations
        if a.annotator_id == annotator_a and a.system_id == system and a.category == category
    }
    flags_b = {
        a.segment_id
        for a in annotations
        if a.annotator_id == annotator_b and a.system_id == system and a.category == category
    }
    entry = kappa_from_flags(flags_a, flags_b, segments)
    entry.system_id = system
    entry.category = category
    return entry


def kappa_report(session: AnnotationSession) -> dict[str, dict[str, KappaEntry]]:
    """The full (system x category) kappa table for a two-annotator session."""
    if len(session.annotators) != 2:
        raise CompletenessError("Cohen's kappa is defined for exactly two annotators")
    if not session.is_complete():
        raise CompletenessError("kappa table requires a completed session")
    annotator_a, annotator_b = session.annotators
    segment_ids = [seg.id for seg in session.segments]
    table: dict[str, dict[str, KappaEntry]] = {}
    for system in session.systems:
        table[system] = {
            category: kappa_per_category(
                session.error_annotations,
                annotator_a,
                annotator_b,
                system,
                segment_ids,
                category,
                session=session,
            )
            for category in CATEGORIES
        }
    return table
