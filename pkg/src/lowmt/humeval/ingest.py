"""Ingestion of externally published annotation data.

Annotation exports come in many tabular shapes, so a mapping config binds the
export's columns onto the toolkit's fields (annotator, segment, system,
category, severity, rating) and normalizes the label spellings. The result is
a completed session plus its annotation lists, equivalent to running the
campaign through the live workflow.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import IngestionError
from .session import (
    CATEGORIES,
    SEVERITIES,
    STATUS_DONE,
    AnnotationSession,
    ErrorAnnotation,
    Segment,
    SqmRating,
    create_session,
)


def _default_normalize(value: str) -> str:
    return value.strip().lower().replace(" ", "_").replace("-", "_")


@dataclass
class IngestMapping:
    """Column bindings and label normalization for one export format.

    columns maps the logical fields onto the export's column names. Required:
    annotator, segment, system. Optional: category, severity, rating, source,
    reference, output. Rows with a category produce error annotations; rows
    with a rating produce SQM ratings; a row may produce both.
    """

    columns: dict[str, str]
    category_map: dict[str, str] = field(default_factory=dict)
    system_map: dict[str, str] = field(default_factory=dict)
    severity_map: dict[str, str] = field(default_factory=dict)
    default_severity: str = "minor"
    delimiter: str = "\t"
    seed: int = 0

    def __post_init__(self):
        for required in ("annotator", "segment", "system"):
            if required not in self.columns:
                raise IngestionError(f"mapping lacks the required {required!r} column binding")

    @classmethod
    def from_file(cls, path: str | Path) -> "IngestMapping":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            columns=payload["columns"],
            category_map=payload.get("category_map", {}),
            system_map=payload.get("system_map", {}),
            severity_map=payload.get("severity_map", {}),
            default_severity=payload.get("default_severity", "minor"),
            delimiter=payload.get("delimiter", "\t"),
            seed=payload.get("seed", 0),
        )

    def map_category(self, raw: str) -> str | None:
        if raw in self.category_map:
            return self.category_map[raw]
        normalized = _default_normalize(raw)
        return normalized if normalized in CATEGORIES else None

    def map_system(self, raw: str) -> str:
        return self.system_map.get(raw, _default_normalize(raw))

    def map_severity(self, raw: str) -> str | None:
        if raw == "":
            return self.default_severity
        if raw in self.severity_map:
            return self.severity_map[raw]
        normalized = _default_normalize(raw)
        return normalized if normalized in SEVERITIES else None


def ingest_published_dataset(
    path: str | Path, mapping: IngestMapping
) -> tuple[AnnotationSession, list[ErrorAnnotation]]:
    """Rebuild a completed campaign from a tabular annotation export.

    Pure function of (file, mapping): re-ingesting yields an identical
    session. Rows that cannot be mapped are collected and reported together.
    """
    rows = _read_rows(path, mapping)
    bad_rows: list[int] = []
    records: list[dict] = []
    for line_no, row in rows:
        record = _map_row(row, mapping)
        if record is None:
            bad_rows.append(line_no)
        else:
            records.append(record)
    if bad_rows:
        raise IngestionError(
            f"{path}: {len(bad_rows)} unmappable rows: lines {bad_rows}", rows=bad_rows
        )
    if not records:
        raise IngestionError(f"{path}: no usable rows")

    annotators = sorted({r["annotator"] for r in records})
    systems = sorted({r["system"] for r in records})
    segment_ids = sorted({r["segment"] for r in records})
    segments = []
    for seg_id in segment_ids:
        seg_rows = [r for r in records if r["segment"] == seg_id]
        source = next((r["source"] for r in seg_rows if r.get("source")), f"segment {seg_id}")
        reference = next((r["reference"] for r in seg_rows if r.get("reference")), "")
        outputs = {}
        for system in systems:
            text = next(
                (r["output"] for r in seg_rows if r["system"] == system and r.get("output")),
                f"output of {system} for segment {seg_id}",
            )
            outputs[system] = text
        segments.append(Segment(id=seg_id, source=source, reference=reference, outputs=outputs))

    session = create_session(segments, systems, annotators, seed=mapping.seed)
    ratings: dict[tuple[str, int, str], int] = {}
    for record in records:
        key = (record["annotator"], record["segment"], record["system"])
        if record.get("category"):
            session.error_annotations.append(
                ErrorAnnotation(
                    annotator_id=key[0],
                    segment_id=key[1],
                    system_id=key[2],
                    category=record["category"],
                    severity=record["severity"],
                )
            )
        if record.get("rating") is not None:
            ratings[key] = record["rating"]
    for key, rating in sorted(ratings.items()):
        session.sqm_ratings.append(
            SqmRating(annotator_id=key[0], segment_id=key[1], system_id=key[2], rating=rating)
        )
    # The export covers the finished campaign, so every unit counts as done.
    for key in session.status:
        session.status[key] = STATUS_DONE
    return session, list(session.error_annotations)


def _read_rows(path: str | Path, mapping: IngestMapping) -> list[tuple[int, dict]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=mapping.delimiter)
        if reader.fieldnames is None:
            raise IngestionError(f"{path}: empty file")
        return [(i, row) for i, row in enumerate(reader, start=2)]


def _map_row(row: dict, mapping: IngestMapping) -> dict | None:
    def cell(logical: str) -> str | None:
        column = mapping.columns.get(logical)
        if column is None:
            return None
        value = row.get(column)
        return value.strip() if isinstance(value, str) else None

    annotator = cell("annotator")
    segment = cell("segment")
    system = cell("system")
    if not annotator or not segment or not system:
        return None
    try:
        segment_id = int(segment)
    except ValueError:
        return None

    record: dict = {
        "annotator": annotator,
        "segment": segment_id,
        "system": mapping.map_system(system),
        "source": cell("source"),
        "reference": cell("reference"),
        "output": cell("output"),
    }

    raw_category = cell("category")
    raw_rating = cell("rating")
    if raw_category:
        category = mapping.map_category(raw_category)
        if category is None:
            return None
        severity_cell = cell("severity")
        if severity_cell is None and "severity" in mapping.columns:
            return None  # mapping names a severity column the file does not have
        severity = mapping.map_severity(severity_cell or "")
        if severity is None:
            return None
        record["category"] = category
        record["severity"] = severity
    if raw_rating:
        try:
            rating = int(raw_rating)
        except ValueError:
            return None
        if not 0 <= rating <= 6:
            return None
        record["rating"] = rating
    if not raw_category and not raw_rating:
        return None  # a row must contribute an error tag or a rating
    return record
