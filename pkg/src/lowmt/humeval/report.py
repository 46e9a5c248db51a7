"""Combined human-evaluation reports and their TSV renderings."""

from __future__ import annotations

import json

from ..errors import CompletenessError
from .agreement import kappa_report
from .scoring import mqm_penalty, sqm_aggregate
from .session import CATEGORIES, AnnotationSession, MqmWeights

REPORT_SCHEMA_VERSION = 1


def he_report(
    session: AnnotationSession,
    metric_reports: dict[str, dict] | None = None,
    weights: MqmWeights | None = None,
    allow_partial: bool = False,
) -> dict:
    """Everything the campaign produced, as one JSON-serializable bundle.

    metric_reports, when given, attaches per-system automatic scores (e.g.
    MetricReport.to_dict()) alongside the human numbers. Incomplete sessions
    are rejected unless allow_partial is set, in which case the bundle carries
    complete=false and omits the agreement table.
    """
    complete = session.is_complete()
    if not complete and not allow_partial:
        raise CompletenessError(
            f"session has {session.done_units} of {session.total_units} units done"
        )
    weights = weights or MqmWeights()
    mqm = mqm_penalty(
        session.error_annotations,
        weights,
        segment_count=len(session.segments),
        annotator_count=len(session.annotators),
        systems=session.systems,
    )
    sqm = sqm_aggregate(session.sqm_ratings) if session.sqm_ratings else {}

    per_system = {}
    for system in session.systems:
        report = mqm[system]
        per_system[system] = {
            "sqm_mean": sqm.get(system, {}).get("mean"),
            "sqm_by_annotator": sqm.get(system, {}).get("by_annotator", {}),
            "mqm_total_penalty": report.total_penalty,
            "mqm_penalty_per_segment": report.penalty_per_segment,
            "mqm_quality": report.quality_score,
            "total_errors": report.total_errors,
            "error_counts": report.category_counts,
            "metrics": (metric_reports or {}).get(system),
        }

    annotator_totals = {
        annotator: {
            system: sum(
                1
                for a in session.error_annotations
                if a.annotator_id == annotator and a.system_id == system
            )
            for system in session.systems
        }
        for annotator in session.annotators
    }

    agreement = None
    if complete and len(session.annotators) == 2:
        agreement = {
            system: {category: entry.to_dict() for category, entry in row.items()}
            for system, row in kappa_report(session).items()
        }

    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "complete": complete,
        "progress": {"done": session.done_units, "total": session.total_units},
        "systems": list(session.systems),
        "annotators": list(session.annotators),
        "segment_count": len(session.segments),
        "per_system": per_system,
        "annotator_totals": annotator_totals,
        "agreement": agreement,
    }


def report_to_json(report: dict) -> str:
    """Canonical rendering used by both the CLI and the HTTP service."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_category_matrix_tsv(report: dict) -> str:
    """Error counts per category and system (total row at the bottom)."""
    systems = report["systems"]
    lines = ["\t".join(["error_type"] + systems)]
    for category in CATEGORIES:
        row = [category] + [
            str(report["per_system"][system]["error_counts"][category]) for system in systems
        ]
        lines.append("\t".join(row))
    totals = ["total_errors"] + [
        str(report["per_system"][system]["total_errors"]) for system in systems
    ]
    lines.append("\t".join(totals))
    return "\n".join(lines) + "\n"


def render_annotator_totals_tsv(report: dict) -> str:
    """Total errors found by each annotator for each system."""
    systems = report["systems"]
    lines = ["\t".join(["annotator"] + systems)]
    for annotator, counts in report["annotator_totals"].items():
        lines.append("\t".join([annotator] + [str(counts[system]) for system in systems]))
    return "\n".join(lines) + "\n"


def render_kappa_tsv(report: dict) -> str:
    """Inter-annotator agreement per error type and system."""
    if not report["agreement"]:
        raise CompletenessError("agreement table requires a completed two-annotator session")
    systems = report["systems"]
    lines = ["\t".join(["error_type"] + systems)]
    for category in CATEGORIES:
        row = [category]
        for system in systems:
            row.append(f"{report['agreement'][system][category]['kappa']:.3f}")
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def render_summary_tsv(report: dict) -> str:
    """One row per system: BLEU (when supplied), SQM mean, MQM quality."""
    lines = ["system\tbleu\tsqm\tmqm"]
    for system in report["systems"]:
        entry = report["per_system"][system]
        metrics = entry.get("metrics") or {}
        bleu = metrics.get("bleu", {}).get("score")
        bleu_text = f"{bleu:.1f}" if bleu is not None else "-"
        sqm_text = f"{entry['sqm_mean']:.2f}" if entry["sqm_mean"] is not None else "-"
        lines.append(f"{system}\t{bleu_text}\t{sqm_text}\t{entry['mqm_quality']:.2f}")
    return "\n".join(lines) + "\n"
