"""Human evaluation: blind annotation sessions, SQM/MQM scoring, agreement."""

from .agreement import (
    KappaEntry,
    interpret_kappa,
    kappa_from_flags,
    kappa_per_category,
    kappa_report,
)
from .ingest import IngestMapping, ingest_published_dataset
from .report import (
    he_report,
    render_annotator_totals_tsv,
    render_category_matrix_tsv,
    render_kappa_tsv,
    render_summary_tsv,
    report_to_json,
)
from .scoring import MqmSystemReport, mqm_penalty, sqm_aggregate
from .session import (
    ACCURACY_CATEGORIES,
    CATEGORIES,
    FLUENCY_CATEGORIES,
    RATING_LEVELS,
    RATING_MAX,
    RATING_MIN,
    SEVERITIES,
    AnnotationSession,
    ErrorAnnotation,
    MqmWeights,
    Segment,
    SqmRating,
    Submission,
    Task,
    create_session,
    next_task,
    submit_annotation,
)

__all__ = [
    "ACCURACY_CATEGORIES",
    "AnnotationSession",
    "CATEGORIES",
    "ErrorAnnotation",
    "FLUENCY_CATEGORIES",
    "IngestMapping",
    "KappaEntry",
    "MqmSystemReport",
    "MqmWeights",
    "RATING_LEVELS",
    "RATING_MAX",
    "RATING_MIN",
    "SEVERITIES",
    "Segment",
    "SqmRating",
    "Submission",
    "Task",
    "create_session",
    "he_report",
    "ingest_published_dataset",
    "interpret_kappa",
    "kappa_from_flags",
    "kappa_per_category",
    "kappa_report",
    "mqm_penalty",
    "next_task",
    "render_annotator_totals_tsv",
    "render_category_matrix_tsv",
    "render_kappa_tsv",
    "render_summary_tsv",
    "report_to_json",
    "sqm_aggregate",
    "submit_annotation",
]
