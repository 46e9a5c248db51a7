"""Walkthrough: staged random-search tuning with emissions accounting.

Runs the staged search over the default transformer grid with the bundled
toy trainer: one short 5k-step cycle per candidate value, locking in each
parameter's best value before moving to the next. The full grid holds 2,304
configurations; the staged walk needs 24 trials to find the optimum.

Run from the repository root:  python demos/03_staged_hyperparameter_search.py
"""

import json
import tempfile
from pathlib import Path

from lowmt.hpo import (
    EmissionsLedger,
    default_search_space,
    full_train,
    staged_search,
    toy_trainer,
    write_trial_log,
)

space = default_search_space()
trainer = toy_trainer(seed=0)
ledger = EmissionsLedger()

print(f"search space: {len(space.parameters)} parameters, {space.size()} configurations")

# 1. Stage-by-stage search: 5k-step cycles, every candidate of the current
#    parameter tried once, the argmax locked in.
best, records = staged_search(space, trainer, cycle_steps=5000, ledger=ledger)
print(f"trials run: {len(records)} (vs {space.size()} exhaustive)")
print("best configuration:")
for name, value in best.items():
    print(f"  {name} = {value}")

# 2. The trial log is one JSON object per line, ready for table assembly.
log_path = Path(tempfile.mkdtemp(prefix="lowmt-demo-")) / "trials.jsonl"
write_trial_log(records, log_path)
first = json.loads(log_path.read_text().splitlines()[0])
print(f"\ntrial log at {log_path}")
print("first trial:", {k: first[k] for k in ("parameter", "candidate", "objective", "status")})

# 3. Emissions: each trial's energy converts to kg CO2 at 324 g/kWh.
print(f"\nsearch energy: {sum(e.energy_kwh for e in ledger.entries):.3f} kWh")
print(f"search emissions: {ledger.total_kg:.4f} kg CO2")

# 4. A full-length run of the winning configuration, with early stopping:
#    the toy objective plateaus, so training stops well before the cap.
final = full_train(best, trainer, max_steps=200000, early_stop_patience=5)
print(
    f"\nfull training run: {final.status} after {final.steps_run} steps, "
    f"{final.runtime_hours:.2f} h, {final.emissions_kg:.4f} kg CO2"
)
