"""Walkthrough: a blind human-evaluation campaign, end to end.

Creates a two-system, two-annotator campaign over a handful of segments,
plays both annotators through the blinded task stream with scripted
judgments, and prints the resulting SQM/MQM/agreement report tables.

Run from the repository root:  python demos/04_annotation_campaign.py
"""

import random
import tempfile

from lowmt.humeval import (
    Segment,
    create_session,
    he_report,
    next_task,
    render_annotator_totals_tsv,
    render_category_matrix_tsv,
    render_kappa_tsv,
    render_summary_tsv,
    submit_annotation,
)
from lowmt.store import CampaignStore

SEGMENTS = [
    Segment(
        id=i,
        source=f"source sentence number {i}",
        reference=f"irish reference {i}",
        outputs={
            "model-crisp": f"clean translation {i}",
            "model-rough": f"rough translation {i} with slips",
        },
    )
    for i in range(1, 11)
]

# 1. Campaign setup: the store directory holds the session definition and
#    the append-only submission log (the crash-safe source of truth).
store = CampaignStore(tempfile.mkdtemp(prefix="lowmt-demo-") + "/campaign")
session = create_session(SEGMENTS, ["model-crisp", "model-rough"], ["maire", "eamon"], seed=20)
store.initialize(session)
print(f"campaign: {session.total_units} annotation units, store at {store.root}")

# 2. Both annotators work through their blinded queues. The task payload
#    only ever shows slot labels; the scripted annotators judge the rough
#    system (whichever slot it hides behind) more harshly.
rng = random.Random(1)
for annotator in session.annotators:
    while (task := next_task(session, annotator)) is not None:
        for slot in list(task.pending_slots):
            output = task.outputs[slot]
            rough = "slips" in output  # what the annotator can actually see
            rating = rng.choice([2, 3, 3] if rough else [5, 6, 6])
            errors = []
            if rough:
                errors.append({"category": "grammar", "severity": "major"})
                if rng.random() < 0.5:
                    errors.append({"category": "mistranslation", "severity": "minor"})
            submit_annotation(session, annotator, task.segment_id, slot, rating, errors)
            store.append(session.submissions[-1].to_dict())
print(f"campaign complete: {session.done_units}/{session.total_units} units")

# 3. The report bundles SQM means, MQM penalties with the normalized
#    quality score, per-annotator totals and the per-category kappa table.
report = he_report(store.load())
print()
print(render_summary_tsv(report))
print(render_category_matrix_tsv(report))
print(render_annotator_totals_tsv(report))
print(render_kappa_tsv(report))
