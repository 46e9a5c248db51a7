"""HTTP service exposing the annotation workflow to the browser UI.

Endpoints (JSON bodies throughout):

    GET  /health                        liveness check
    GET  /annotators/{id}/next          next blinded task or completion
    POST /annotators/{id}/submissions   one slot's rating and error tags
    GET  /report                        the combined report bundle
    GET  /progress                      done/total counters

Anything else is served from the static UI directory when one is configured.
Submissions are serialized through a single lock and appended to the campaign
log before the response goes out; annotator-facing payloads only ever carry
slot labels, never system identifiers.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import (
    ConflictError,
    StartupError,
    UnknownAnnotatorError,
    ValidationError,
)
from .humeval.report import he_report, report_to_json
from .humeval.session import next_task, submit_annotation
from .store import CampaignStore

_NEXT_ROUTE = re.compile(r"^/annotators/([^/]+)/next$")
_SUBMIT_ROUTE = re.compile(r"^/annotators/([^/]+)/submissions$")

_STATIC_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".map": "application/json; charset=utf-8",
}


@dataclass
class _Response:
    status: int
    body: bytes
    content_type: str = "application/json; charset=utf-8"


class AnnotationService:
    """Session state plus the request handlers, independent of the socket."""

    def __init__(self, store: CampaignStore, ui_dir: str | Path | None = None):
        self.store = store
        self.session = store.load()
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self._write_lock = threading.Lock()
        self._server: ThreadingHTTPServer | None = None

    # ---- handlers ----------------------------------------------------

    def health(self) -> dict:
        return {"status": "ok"}

    def progress(self) -> dict:
        session = self.session
        per_annotator = {}
        for annotator in session.annotators:
            done = sum(
                1
                for (who, _, _), state in session.status.items()
                if who == annotator and state == "done"
            )
            per_annotator[annotator] = {
                "done": done,
                "total": len(session.segments) * len(session.systems),
            }
        return {
            "done": session.done_units,
            "total": session.total_units,
            "complete": session.is_complete(),
            "per_annotator": per_annotator,
        }

    def next_payload(self, annotator: str) -> dict:
        task = next_task(self.session, annotator)
        if task is None:
            return {"complete": True, "done": self.session.done_units, "total": self.session.total_units}
        return {"complete": False, "task": task.to_dict()}

    def submit(self, annotator: str, body: dict) -> dict:
        for field_name in ("segment_id", "slot", "rating"):
            if field_name not in body:
                raise ValidationError(f"missing field {field_name!r}", field=field_name)
        if body["rating"] is None:
            raise ValidationError("a rating is required for live submissions", field="rating")
        errors = body.get("errors", [])
        if not isinstance(errors, list):
            raise ValidationError("errors must be a list", field="errors")
        errors = [
            {
                "category": item.get("category"),
                "severity": item.get("severity", "minor"),
                "span": tuple(item["span"]) if item.get("span") else None,
            }
            for item in errors
        ]
        timestamp = datetime.now(timezone.utc).isoformat()
        with self._write_lock:
            submit_annotation(
                self.session,
                annotator=annotator,
                segment_id=body["segment_id"],
                slot=body["slot"],
                rating=body["rating"],
                errors=errors,
                timestamp=timestamp,
            )
            self.store.append(self.session.submissions[-1].to_dict())
        return {
            "ok": True,
            "segment_id": body["segment_id"],
            "slot": body["slot"],
            "done": self.session.done_units,
            "total": self.session.total_units,
        }

    def report(self) -> dict:
        return he_report(self.session, allow_partial=True)

    def report_body(self) -> bytes:
        """Byte-identical to the CLI rendering of the same store."""
        return report_to_json(self.report()).encode("utf-8")

    # ---- routing ------------------------------------------------------

    def handle(self, method: str, path: str, body: bytes) -> _Response:
        try:
            return self._route(method, path, body)
        except UnknownAnnotatorError as exc:
            return _json_response(404, {"error": "unknown_annotator", "message": str(exc)})
        except ValidationError as exc:
            return _json_response(
                400, {"error": "validation", "field": exc.field, "message": str(exc)}
            )
        except ConflictError as exc:
            return _json_response(409, {"error": "conflict", "message": str(exc)})
        except json.JSONDecodeError as exc:
            return _json_response(400, {"error": "bad_json", "message": str(exc)})

    def _route(self, method: str, path: str, body: bytes) -> _Response:
        path = path.split("?", 1)[0]
        if method == "GET" and path == "/health":
            return _json_response(200, self.health())
        if method == "GET" and path == "/progress":
            return _json_response(200, self.progress())
        if method == "GET" and path == "/report":
            return _Response(200, self.report_body())
        match = _NEXT_ROUTE.match(path)
        if method == "GET" and match:
            return _json_response(200, self.next_payload(match.group(1)))
        match = _SUBMIT_ROUTE.match(path)
        if method == "POST" and match:
            payload = json.loads(body.decode("utf-8") or "{}")
            return _json_response(200, self.submit(match.group(1), payload))
        if method == "GET":
            static = self._static(path)
            if static is not None:
                return static
        return _json_response(404, {"error": "not_found", "path": path})

    def _static(self, path: str) -> _Response | None:
        if self.ui_dir is None:
            return None
        relative = path.lstrip("/") or "index.html"
        candidate = (self.ui_dir / relative).resolve()
        try:
            candidate.relative_to(self.ui_dir.resolve())
        except ValueError:
            return None  # traversal attempt
        if not candidate.is_file():
            return None
        content_type = _STATIC_TYPES.get(candidate.suffix, "application/octet-stream")
        return _Response(200, candidate.read_bytes(), content_type)

    # ---- lifecycle ----------------------------------------------------

    def start(self, bind_address: str) -> tuple[str, int]:
        """Bind and serve on a background thread; returns the bound address."""
        host, port = _parse_bind(bind_address)
        service = self

        class Handler(BaseHTTPRequestHandler):
            def _dispatch(self, method: str):
                length = int(self.headers.get("Content-Length") or 0)
                body = self.rfile.read(length) if length else b""
                response = service.handle(method, self.path, body)
                self.send_response(response.status)
                self.send_header("Content-Type", response.content_type)
                self.send_header("Content-Length", str(len(response.body)))
                self.end_headers()
                self.wfile.write(response.body)

            def do_GET(self):  # noqa: N802 (BaseHTTPRequestHandler API)
                self._dispatch("GET")

            def do_POST(self):  # noqa: N802
                self._dispatch("POST")

            def log_message(self, format, *args):  # quiet by default
                pass

        try:
            self._server = ThreadingHTTPServer((host, port), Handler)
        except OSError as exc:
            raise StartupError(f"cannot bind {bind_address}: {exc}") from exc
        thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        thread.start()
        return self._server.server_address[0], self._server.server_address[1]

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None


def serve(store: CampaignStore, bind_address: str, ui_dir: str | Path | None = None) -> AnnotationService:
    """Load the campaign, bind the address and serve until stopped."""
    service = AnnotationService(store, ui_dir=ui_dir)
    service.start(bind_address)
    return service


def _parse_bind(bind_address: str) -> tuple[str, int]:
    if ":" not in bind_address:
        raise StartupError(f"bind address must be host:port, got {bind_address!r}")
    host, _, port_text = bind_address.rpartition(":")
    try:
        port = int(port_text)
    except ValueError:
        raise StartupError(f"invalid port in {bind_address!r}") from None
    return host or "127.0.0.1", port


def _json_response(status: int, payload: dict) -> _Response:
    return _Response(status, (json.dumps(payload, sort_keys=True) + "\n").encode("utf-8"))
