"""Durable campaign state: a session definition plus an append-only JSONL log.

The log is the source of truth. Every accepted submission becomes exactly one
line, flushed and fsynced before the caller is acknowledged, so replaying the
log (or any prefix of it that ends on a line boundary) reconstructs a
consistent session. A trailing line without its newline is the signature of a
crash mid-write and is ignored on recovery; anything else malformed is an
error rather than silently dropped data.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigurationError, StoreError
from .humeval.session import (
    AnnotationSession,
    Segment,
    create_session,
    submit_annotation,
)

SESSION_FILE = "session.json"
LOG_FILE = "annotations.jsonl"
SESSION_SCHEMA_VERSION = 1


def session_definition(session: AnnotationSession) -> dict:
    return {
        "version": SESSION_SCHEMA_VERSION,
        "seed": session.seed,
        "systems": session.systems,
        "annotators": session.annotators,
        "segments": [
            {
                "id": seg.id,
                "source": seg.source,
                "reference": seg.reference,
                "outputs": seg.outputs,
            }
            for seg in session.segments
        ],
    }


def session_from_definition(payload: dict) -> AnnotationSession:
    if payload.get("version") != SESSION_SCHEMA_VERSION:
        raise ConfigurationError("unsupported session definition version")
    segments = [
        Segment(
            id=item["id"],
            source=item["source"],
            reference=item["reference"],
            outputs=dict(item["outputs"]),
        )
        for item in payload["segments"]
    ]
    return create_session(segments, payload["systems"], payload["annotators"], payload["seed"])


@dataclass
class CampaignStore:
    root: Path

    def __init__(self, root: str | Path):
        self.root = Path(root)

    @property
    def session_path(self) -> Path:
        return self.root / SESSION_FILE

    @property
    def log_path(self) -> Path:
        return self.root / LOG_FILE

    def exists(self) -> bool:
        return self.session_path.exists()

    def initialize(self, session: AnnotationSession) -> None:
        """Create the store for a fresh campaign; refuses to overwrite one."""
        if self.exists():
            raise ConfigurationError(f"campaign store already exists at {self.root}")
        self.root.mkdir(parents=True, exist_ok=True)
        self.session_path.write_text(
            json.dumps(session_definition(session), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
        self.log_path.touch()

    def load(self) -> AnnotationSession:
        """Rebuild the session by replaying the annotation log."""
        if not self.exists():
            raise ConfigurationError(f"no campaign store at {self.root}")
        payload = json.loads(self.session_path.read_text(encoding="utf-8"))
        session = session_from_definition(payload)
        for entry in self._read_log():
            submit_annotation(
                session,
                annotator=entry["annotator"],
                segment_id=entry["segment"],
                slot=entry["slot"],
                rating=entry["rating"],
                errors=[
                    {
                        "category": err["category"],
                        "severity": err["severity"],
                        "span": tuple(err["span"]) if err.get("span") else None,
                    }
                    for err in entry.get("errors", [])
                ],
                timestamp=entry.get("timestamp", ""),
            )
            resolved = session.submissions[-1].system_id
            if entry.get("system") != resolved:
                raise StoreError(
                    f"log entry resolves slot {entry['slot']!r} to {resolved!r} "
                    f"but records {entry.get('system')!r}; seed or definition changed"
                )
        return session

    def append(self, submission: dict) -> None:
        """Durably append one accepted submission."""
        line = json.dumps(submission, sort_keys=True)
        if "\n" in line:
            raise StoreError("submission serialization must be single-line")
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _read_log(self) -> list[dict]:
        if not self.log_path.exists():
            return []
        raw = self.log_path.read_text(encoding="utf-8")
        entries: list[dict] = []
        if not raw:
            return entries
        complete, _, partial = raw.rpartition("\n")
        # `partial` is a crash artifact (no terminating newline): ignored.
        for number, line in enumerate(complete.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StoreError(f"{self.log_path}: corrupt log line {number}: {exc}") from exc
            entries.append(entry)
        return entries
