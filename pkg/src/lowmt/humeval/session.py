"""Blind annotation campaign state: sessions, tasks and submissions.

A session assigns every annotator every (segment, system) pair. System
outputs are shown under shuffled slot labels ("A", "B", ...) with the
slot-to-system mapping drawn per (annotator, segment) from the session seed,
so annotators can never tell which system produced an output, and the same
seed always reproduces the same blinding.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import (
    ConfigurationError,
    ConflictError,
    UnknownAnnotatorError,
    ValidationError,
)

# Core error tagset, in report order. The first category flags a whole
# segment too damaged to itemize; the rest split into accuracy and fluency.
CATEGORIES = (
    "non_translation",
    "addition",
    "omission",
    "mistranslation",
    "untranslated_text",
    "punctuation",
    "spelling",
    "grammar",
    "register",
    "inconsistency",
    "character_encoding",
)
ACCURACY_CATEGORIES = ("addition", "omission", "mistranslation", "untranslated_text")
FLUENCY_CATEGORIES = (
    "punctuation",
    "spelling",
    "grammar",
    "register",
    "inconsistency",
    "character_encoding",
)

SEVERITIES = ("minor", "major")

RATING_MIN = 0
RATING_MAX = 6

# Anchored descriptions for the even rating levels; 1, 3 and 5 are the
# in-between choices when a translation does not match a core level exactly.
RATING_LEVELS = {
    6: "Perfect meaning and grammar",
    4: "Most meaning preserved, few grammar mistakes",
    2: "Some meaning preserved",
    0: "Nonsense / no meaning preserved",
}

STATUS_PENDING = "pending"
STATUS_DONE = "done"


@dataclass
class MqmWeights:
    minor: float = 1.0
    major: float = 10.0
    non_translation: float = 25.0

    def __post_init__(self):
        if min(self.minor, self.major, self.non_translation) <= 0:
            raise ConfigurationError("all MQM weights must be positive")


@dataclass
class Segment:
    id: int
    source: str
    reference: str
    outputs: dict[str, str]  # system id -> output text

    def __post_init__(self):
        if not self.source:
            raise ConfigurationError(f"segment {self.id} has an empty source")
        if not self.outputs:
            raise ConfigurationError(f"segment {self.id} has no system outputs")


@dataclass
class SqmRating:
    annotator_id: str
    segment_id: int
    system_id: str
    rating: int


@dataclass
class ErrorAnnotation:
    annotator_id: str
    segment_id: int
    system_id: str
    category: str
    severity: str
    span: tuple[int, int] | None = None


@dataclass
class Submission:
    """One completed annotation unit, as persisted to the campaign log."""

    annotator_id: str
    segment_id: int
    slot: str
    system_id: str
    rating: int
    errors: list[dict]
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "annotator": self.annotator_id,
            "segment": self.segment_id,
            "slot": self.slot,
            "system": self.system_id,
            "rating": self.rating,
            "errors": self.errors,
            "timestamp": self.timestamp,
        }


@dataclass
class Task:
    """What an annotator sees next: outputs carry slot labels, never system ids."""

    segment_id: int
    source: str
    reference: str
    outputs: dict[str, str]  # slot label -> output text
    pending_slots: list[str]
    done_units: int
    total_units: int

    def to_dict(self) -> dict:
        return {
            "segment_id": self.segment_id,
            "source": self.source,
            "reference": self.reference,
            "outputs": self.outputs,
            "pending_slots": self.pending_slots,
            "done_units": self.done_units,
            "total_units": self.total_units,
        }


@dataclass
class AnnotationSession:
    segments: list[Segment]
    systems: list[str]
    annotators: list[str]
    seed: int
    blinding: dict[tuple[str, int, str], str] = field(default_factory=dict)
    status: dict[tuple[str, int, str], str] = field(default_factory=dict)
    sqm_ratings: list[SqmRating] = field(default_factory=list)
    error_annotations: list[ErrorAnnotation] = field(default_factory=list)
    submissions: list[Submission] = field(default_factory=list)

    @property
    def total_units(self) -> int:
        return len(self.annotators) * len(self.segments) * len(self.systems)

    @property
    def done_units(self) -> int:
        return sum(1 for state in self.status.values() if state == STATUS_DONE)

    def is_complete(self) -> bool:
        return self.done_units == self.total_units

    def slots(self) -> list[str]:
        return list(string.ascii_uppercase[: len(self.systems)])

    def segment(self, segment_id: int) -> Segment:
        for seg in self.segments:
            if seg.id == segment_id:
                return seg
        raise ValidationError(f"unknown segment id {segment_id}", field="segment")

    def system_for_slot(self, annotator: str, segment_id: int, slot: str) -> str:
        key = (annotator, segment_id, slot)
        if key not in self.blinding:
            raise ValidationError(f"unknown slot {slot!r}", field="slot")
        return self.blinding[key]


def create_session(
    segments: list[Segment],
    systems: list[str],
    annotators: list[str],
    seed: int,
) -> AnnotationSession:
    """Set up a campaign with seeded per-(annotator, segment) blinding."""
    if not segments or not systems or not annotators:
        raise ConfigurationError("segments, systems and annotators must all be non-empty")
    if len({seg.id for seg in segments}) != len(segments):
        raise ConfigurationError("duplicate segment ids")
    if len(set(systems)) != len(systems):
        raise ConfigurationError("duplicate system ids")
    if len(set(annotators)) != len(annotators):
        raise ConfigurationError("duplicate annotator ids")
    if len(systems) > 26:
        raise ConfigurationError("at most 26 systems (one slot letter each)")
    for seg in segments:
        missing = [sys_id for sys_id in systems if sys_id not in seg.outputs]
        if missing:
            raise ConfigurationError(f"segment {seg.id} lacks outputs for {missing}")

    session = AnnotationSession(
        segments=sorted(segments, key=lambda s: s.id),
        systems=list(systems),
        annotators=list(annotators),
        seed=seed,
    )
    slots = session.slots()
    for annotator in annotators:
        for seg in segments:
            # String-seeded generators are stable across runs and platforms.
            rng = random.Random(f"{seed}:{annotator}:{seg.id}")
            shuffled = list(systems)
            rng.shuffle(shuffled)
            for slot, system in zip(slots, shuffled):
                session.blinding[(annotator, seg.id, slot)] = system
            for system in systems:
                session.status[(annotator, seg.id, system)] = STATUS_PENDING
    return session


def next_task(session: AnnotationSession, annotator: str) -> Task | None:
    """The lowest-id segment with pending units for this annotator, or None."""
    if annotator not in session.annotators:
        raise UnknownAnnotatorError(f"unknown annotator {annotator!r}")
    for seg in session.segments:
        pending_slots = [
            slot
            for slot in session.slots()
            if session.status[(annotator, seg.id, session.blinding[(annotator, seg.id, slot)])]
            == STATUS_PENDING
        ]
        if pending_slots:
            return Task(
                segment_id=seg.id,
                source=seg.source,
                reference=seg.reference,
                outputs={
                    slot: seg.outputs[session.blinding[(annotator, seg.id, slot)]]
                    for slot in session.slots()
                },
                pending_slots=pending_slots,
                done_units=session.done_units,
                total_units=session.total_units,
            )
    return None


def _validate_errors(
    errors: Iterable[Mapping], output_text: str
) -> list[dict]:
    cleaned: list[dict] = []
    for item in errors:
        category = item.get("category")
        if category not in CATEGORIES:
            raise ValidationError(f"unknown error category {category!r}", field="category")
        severity = item.get("severity", "minor")
        if severity not in SEVERITIES:
            raise ValidationError(f"unknown severity {severity!r}", field="severity")
        span = item.get("span")
        if span is not None:
            if category == "non_translation":
                raise ValidationError(
                    "non_translation flags the whole segment and takes no span", field="span"
                )
            start, end = span
            if not (0 <= start <= end <= len(output_text)):
                raise ValidationError(f"span {span!r} outside the output text", field="span")
            span = (int(start), int(end))
        cleaned.append({"category": category, "severity": severity, "span": span})
    return cleaned


def submit_annotation(
    session: AnnotationSession,
    annotator: str,
    segment_id: int,
    slot: str,
    rating: int | None,
    errors: Iterable[Mapping] = (),
    timestamp: str = "",
) -> AnnotationSession:
    """Record one unit: an SQM rating plus error tags for one blinded output.

    rating=None marks a unit without a recorded rating; the live workflow
    always supplies one, but historical imports may not have collected SQM.
    """
    if annotator not in session.annotators:
        raise UnknownAnnotatorError(f"unknown annotator {annotator!r}")
    segment = session.segment(segment_id)
    system = session.system_for_slot(annotator, segment_id, slot)
    if rating is not None and (
        not isinstance(rating, int) or isinstance(rating, bool) or not RATING_MIN <= rating <= RATING_MAX
    ):
        raise ValidationError(
            f"rating must be an integer in {RATING_MIN}..{RATING_MAX}, got {rating!r}",
            field="rating",
        )
    cleaned = _validate_errors(errors, segment.outputs[system])
    key = (annotator, segment_id, system)
    if session.status[key] == STATUS_DONE:
        raise ConflictError(
            f"annotator {annotator!r} already submitted segment {segment_id} slot {slot}"
        )

    session.status[key] = STATUS_DONE
    if rating is not None:
        session.sqm_ratings.append(
            SqmRating(annotator_id=annotator, segment_id=segment_id, system_id=system, rating=rating)
        )
    for item in cleaned:
        session.error_annotations.append(
            ErrorAnnotation(
                annotator_id=annotator,
                segment_id=segment_id,
                system_id=system,
                category=item["category"],
                severity=item["severity"],
                span=item["span"],
            )
        )
    session.submissions.append(
        Submission(
            annotator_id=annotator,
            segment_id=segment_id,
            slot=slot,
            system_id=system,
            rating=rating,
            errors=cleaned,
            timestamp=timestamp,
        )
    )
    return session
