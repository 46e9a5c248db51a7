"""Staged random-search hyperparameter optimization with emissions accounting.

The search walks the declared parameters in order. For each parameter it runs
one short training cycle per candidate value (already-tuned parameters held at
their locked values, not-yet-tuned ones at their first listed value), locks in
the candidate with the best objective, and moves on. This turns a product
space of thousands of configurations into a couple of dozen short trials.

Trainers are pluggable through a small adapter contract:

    train(config, max_steps, early_stop_patience)
        -> (objective, steps_run, energy_kwh)
        or (objective, steps_run, energy_kwh, runtime_hours)

Objectives are "higher is better" validation scores. Energy metering is the
adapter's job; the harness converts it to kg CO2 with the grid factor. The
optional fourth element lets deterministic adapters report a synthetic
runtime, keeping trial logs byte-identical across runs; without it the
harness falls back to wall-clock timing.
"""

from __future__ import annotations

import json
import math
import random
import re
import shlex
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

from .errors import ConfigurationError, RangeError, SearchError, TrainerError

# Grid carbon intensity (gCO2 per kWh) used to convert energy to emissions.
DEFAULT_EMISSION_FACTOR = 324.0

SPACE_SCHEMA_VERSION = 1

STATUS_COMPLETED = "completed"
STATUS_EARLY_STOPPED = "early_stopped"
STATUS_FAILED = "failed"


class TrainerAdapter(Protocol):
    def train(
        self, config: dict, max_steps: int, early_stop_patience: int
    ) -> tuple:  # (objective, steps_run, energy_kwh[, runtime_hours])
        ...


@dataclass(frozen=True)
class SearchSpace:
    """Ordered hyperparameter names with their finite candidate value lists."""

    parameters: tuple[tuple[str, tuple], ...]

    def __post_init__(self):
        names = [name for name, _ in self.parameters]
        if len(names) != len(set(names)):
            raise ConfigurationError("search space parameter names must be unique")
        for name, values in self.parameters:
            if not values:
                raise ConfigurationError(f"parameter {name!r} has no candidate values")

    @classmethod
    def from_items(cls, items: Iterable[tuple[str, Iterable]]) -> "SearchSpace":
        return cls(tuple((name, tuple(values)) for name, values in items))

    def names(self) -> list[str]:
        return [name for name, _ in self.parameters]

    def candidates(self, name: str) -> tuple:
        for param, values in self.parameters:
            if param == name:
                return values
        raise ConfigurationError(f"unknown parameter {name!r}")

    def size(self) -> int:
        product = 1
        for _, values in self.parameters:
            product *= len(values)
        return product

    def to_file(self, path: str | Path) -> None:
        payload = {
            "version": SPACE_SCHEMA_VERSION,
            "parameters": [
                {"name": name, "values": list(values)} for name, values in self.parameters
            ],
        }
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def from_file(cls, path: str | Path) -> "SearchSpace":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("version") != SPACE_SCHEMA_VERSION:
            raise ConfigurationError(f"{path}: unsupported search space version")
        return cls.from_items((p["name"], p["values"]) for p in payload["parameters"])


@dataclass
class TrialRecord:
    config: dict
    objective: float | None
    steps_run: int
    runtime_hours: float
    energy_kwh: float
    emissions_kg: float
    status: str
    parameter: str | None = None  # stage that produced this trial
    candidate: object | None = None
    error: str | None = None

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "config": self.config,
                "objective": self.objective,
                "steps": self.steps_run,
                "runtime_hours": self.runtime_hours,
                "energy_kwh": self.energy_kwh,
                "emissions_kg": self.emissions_kg,
                "status": self.status,
                "parameter": self.parameter,
                "candidate": self.candidate,
                "error": self.error,
            },
            sort_keys=True,
        )


@dataclass
class LedgerEntry:
    trial_id: str
    energy_kwh: float
    factor_g_per_kwh: float
    kg_co2: float


@dataclass
class EmissionsLedger:
    entries: list[LedgerEntry] = field(default_factory=list)

    @property
    def total_kg(self) -> float:
        return math.fsum(entry.kg_co2 for entry in self.entries)


def record_emissions(
    ledger: EmissionsLedger,
    energy_kwh: float,
    factor: float = DEFAULT_EMISSION_FACTOR,
    trial_id: str = "",
) -> EmissionsLedger:
    """Append one metered energy reading; kg = kWh x factor / 1000."""
    if energy_kwh < 0:
        raise RangeError(f"energy must be non-negative, got {energy_kwh}")
    ledger.entries.append(
        LedgerEntry(
            trial_id=trial_id,
            energy_kwh=energy_kwh,
            factor_g_per_kwh=factor,
            kg_co2=energy_kwh * factor / 1000.0,
        )
    )
    return ledger


def sample_config(space: SearchSpace, locked: dict, seed: int) -> dict:
    """Draw one configuration: locked values kept, the rest sampled uniformly."""
    unknown = set(locked) - set(space.names())
    if unknown:
        raise ConfigurationError(f"locked keys not in the search space: {sorted(unknown)}")
    rng = random.Random(seed)
    config = {}
    for name, values in space.parameters:
        config[name] = locked[name] if name in locked else rng.choice(values)
    return config


def _run_trial(
    trainer: TrainerAdapter,
    config: dict,
    max_steps: int,
    patience: int,
    emission_factor: float,
    parameter: str | None,
    candidate: object | None,
) -> TrialRecord:
    started = time.perf_counter()

    def failed(message: str) -> TrialRecord:
        return TrialRecord(
            config=dict(config),
            objective=None,
            steps_run=0,
            runtime_hours=(time.perf_counter() - started) / 3600.0,
            energy_kwh=0.0,
            emissions_kg=0.0,
            status=STATUS_FAILED,
            parameter=parameter,
            candidate=candidate,
            error=message,
        )

    try:
        outcome = trainer.train(dict(config), max_steps, patience)
    except Exception as exc:  # a failed trial must not kill the search
        return failed(f"{type(exc).__name__}: {exc}")
    if len(outcome) == 4:
        objective, steps_run, energy_kwh, runtime_hours = outcome
    else:
        objective, steps_run, energy_kwh = outcome
        runtime_hours = (time.perf_counter() - started) / 3600.0
    if steps_run > max_steps:
        return failed(f"trainer ran {steps_run} steps, above the {max_steps} cap")
    return TrialRecord(
        config=dict(config),
        objective=float(objective),
        steps_run=int(steps_run),
        runtime_hours=float(runtime_hours),
        energy_kwh=float(energy_kwh),
        emissions_kg=float(energy_kwh) * emission_factor / 1000.0,
        status=STATUS_EARLY_STOPPED if steps_run < max_steps else STATUS_COMPLETED,
        parameter=parameter,
        candidate=candidate,
    )


def staged_search(
    space: SearchSpace,
    trainer: TrainerAdapter,
    cycle_steps: int = 5000,
    trials_per_stage: int | None = None,
    early_stop_patience: int = 4,
    emission_factor: float = DEFAULT_EMISSION_FACTOR,
    ledger: EmissionsLedger | None = None,
    seed: int = 0,
) -> tuple[dict, list[TrialRecord]]:
    """Lock in one parameter at a time using short training cycles.

    By default every listed candidate of a stage is tried; trials_per_stage
    caps that with a seeded subsample. Ties go to the earlier-listed
    candidate. A failing trial only voids its candidate; a stage where every
    trial failed aborts the search.
    """
    if trials_per_stage is not None and trials_per_stage < 1:
        raise ConfigurationError("trials_per_stage must be at least 1")
    config = {name: values[0] for name, values in space.parameters}
    records: list[TrialRecord] = []
    rng = random.Random(seed)
    for name, values in space.parameters:
        stage_values = list(values)
        if trials_per_stage is not None and trials_per_stage < len(stage_values):
            keep = sorted(rng.sample(range(len(stage_values)), trials_per_stage))
            stage_values = [stage_values[i] for i in keep]
        best_value = None
        best_objective = -math.inf
        for value in stage_values:
            record = _run_trial(
                trainer,
                {**config, name: value},
                cycle_steps,
                early_stop_patience,
                emission_factor,
                parameter=name,
                candidate=value,
            )
            records.append(record)
            if ledger is not None and record.status != STATUS_FAILED:
                record_emissions(
                    ledger, record.energy_kwh, emission_factor, trial_id=f"{name}={value}"
                )
            if record.status != STATUS_FAILED and record.objective > best_objective:
                best_objective = record.objective
                best_value = value
        if best_value is None:
            raise SearchError(f"every trial failed while tuning {name!r}")
        config[name] = best_value
    return config, records


def full_train(
    config: dict,
    trainer: TrainerAdapter,
    max_steps: int = 200000,
    early_stop_patience: int = 4,
    emission_factor: float = DEFAULT_EMISSION_FACTOR,
) -> TrialRecord:
    """Run one configuration to max_steps or until the objective plateaus."""
    if early_stop_patience < 1:
        raise ConfigurationError("early_stop_patience must be at least 1")
    return _run_trial(
        trainer, config, max_steps, early_stop_patience, emission_factor, None, None
    )


def write_trial_log(records: list[TrialRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json_line() + "\n")


# --------------------------------------------------------------------------
# Trainer adapters


def default_search_space() -> SearchSpace:
    """The transformer tuning grid used throughout the demos and tests."""
    return SearchSpace.from_items(
        [
            ("learning_rate", (0.1, 0.01, 0.001, 2)),
            ("batch_size", (1024, 2048, 4096, 8192)),
            ("attention_heads", (2, 4, 8)),
            ("layers", (5, 6)),
            ("feed_forward_dim", (2048,)),
            ("embedding_dim", (128, 256, 512)),
            ("label_smoothing", (0.1, 0.3)),
            ("dropout", (0.1, 0.3)),
            ("attention_dropout", (0.1,)),
            ("average_decay", (0, 0.0001)),
        ]
    )


# Configuration the toy objective is built around: its unique global argmax.
TOY_OPTIMUM = {
    "learning_rate": 2,
    "batch_size": 2048,
    "attention_heads": 2,
    "layers": 6,
    "feed_forward_dim": 2048,
    "embedding_dim": 256,
    "label_smoothing": 0.1,
    "dropout": 0.3,
    "attention_dropout": 0.1,
    "average_decay": 0.0001,
}

# Synthetic meter calibration: roughly one long local build's footprint.
TOY_KWH_PER_STEP = 2.6e-5
TOY_STEPS_PER_HOUR = 6700.0


class ToyTrainer:
    """Desk-scale stand-in for a real NMT trainer.

    The objective is a sum of per-parameter scores (so it is coordinate-wise
    decomposable) scaled by a ramp that grows linearly with training steps and
    plateaus exactly at plateau_steps, which makes early stopping observable.
    Pass plateau_steps=None for an asymptotic ramp that never fully plateaus.
    """

    def __init__(
        self,
        seed: int = 0,
        space: SearchSpace | None = None,
        plateau_steps: int | None = 50000,
        eval_interval: int = 5000,
    ):
        self.seed = seed
        self.space = space or default_search_space()
        self.plateau_steps = plateau_steps
        self.eval_interval = eval_interval
        self._scores: dict[str, dict] = {}
        for name, values in self.space.parameters:
            per_value = {}
            for rank, value in enumerate(values):
                if name in TOY_OPTIMUM and value == TOY_OPTIMUM[name]:
                    per_value[value] = 1.0
                else:
                    per_value[value] = 0.6 - 0.05 * rank
            self._scores[name] = per_value

    def base_score(self, config: dict) -> float:
        total = 0.0
        for name, per_value in self._scores.items():
            if name not in config:
                raise TrainerError(f"config is missing parameter {name!r}")
            if config[name] not in per_value:
                raise TrainerError(f"value {config[name]!r} not in the space for {name!r}")
            total += per_value[config[name]]
        return total

    def _ramp(self, steps: int) -> float:
        if self.plateau_steps is None:
            return steps / (steps + 20000.0)
        return min(steps, self.plateau_steps) / self.plateau_steps

    def objective_at(self, config: dict, steps: int) -> float:
        return self.base_score(config) * self._ramp(steps)

    def train(self, config: dict, max_steps: int, early_stop_patience: int) -> tuple:
        if early_stop_patience < 1:
            raise TrainerError("early_stop_patience must be at least 1")
        eval_points = list(range(self.eval_interval, max_steps + 1, self.eval_interval))
        if not eval_points or eval_points[-1] != max_steps:
            eval_points.append(max_steps)
        best = -math.inf
        stale = 0
        steps_run = max_steps
        for point in eval_points:
            objective = self.objective_at(config, point)
            if objective > best:
                best = objective
                stale = 0
            else:
                stale += 1
                if stale >= early_stop_patience:
                    steps_run = point
                    break
        energy_kwh = steps_run * TOY_KWH_PER_STEP
        runtime_hours = steps_run / TOY_STEPS_PER_HOUR
        return best, steps_run, energy_kwh, runtime_hours


def toy_trainer(seed: int = 0) -> ToyTrainer:
    return ToyTrainer(seed=seed)


class CommandTrainer:
    """Adapter that delegates training to an external executable.

    The executable receives one JSON object on stdin: {"config": ...,
    "max_steps": ..., "early_stop_patience": ...}. Its final output line must
    contain `objective=<real> energy_kwh=<real>` and may add `steps=<int>`
    (defaulting to max_steps when absent).
    """

    _RESULT = re.compile(r"objective=([^\s]+)\s+energy_kwh=([^\s]+)(?:\s+steps=(\d+))?")

    def __init__(self, command: str | list[str]):
        self.argv = shlex.split(command) if isinstance(command, str) else list(command)

    def train(self, config: dict, max_steps: int, early_stop_patience: int) -> tuple:
        payload = json.dumps(
            {"config": config, "max_steps": max_steps, "early_stop_patience": early_stop_patience}
        )
        try:
            proc = subprocess.run(
                self.argv, input=payload, capture_output=True, text=True, check=False
            )
        except OSError as exc:
            raise TrainerError(f"could not launch trainer command: {exc}") from exc
        if proc.returncode != 0:
            raise TrainerError(
                f"trainer command exited with {proc.returncode}: {proc.stderr.strip()[-200:]}"
            )
        lines = [line for line in proc.stdout.splitlines() if line.strip()]
        if not lines:
            raise TrainerError("trainer command produced no output")
        match = self._RESULT.search(lines[-1])
        if not match:
            raise TrainerError(f"unparseable trainer result line: {lines[-1]!r}")
        objective = float(match.group(1))
        energy_kwh = float(match.group(2))
        steps = int(match.group(3)) if match.group(3) else max_steps
        return objective, steps, energy_kwh
