"""Repeated shuffle / fit / binned-evaluation protocol and its aggregation."""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import learners
from .dataset import Dataset, shuffle, stratified_bins
from .metrics import MetricsRecord, evaluate
from .stats import METRICS, ResultTable, median_iqr

log = logging.getLogger(__name__)


class RigError(ValueError):
    pass


@dataclass(frozen=True)
class LearnerSpec:
    name: str
    kind: str
    config: learners.TrainConfig = field(default_factory=learners.TrainConfig)


@dataclass
class ExperimentPlan:
    datasets: list[tuple[Dataset, Dataset]]
    learners: list[LearnerSpec]
    n_repeats: int = 10
    n_bins: int = 5
    base_seed: int = 0

    def __post_init__(self):
        if self.n_repeats < 1:
            raise RigError("n_repeats must be >= 1")
        if self.n_bins < 2:
            raise RigError("n_bins must be >= 2")


@dataclass(frozen=True)
class RunRecord:
    dataset: str
    learner: str
    repeat: int
    bin: int
    metrics: MetricsRecord
    wall_time_seconds: float = 0.0

    def to_dict(self, with_time: bool = False) -> dict:
        d = {"dataset": self.dataset, "learner": self.learner, "repeat": self.repeat,
             "bin": self.bin, **self.metrics.to_dict()}
        if with_time:
            d["wall_time_seconds"] = self.wall_time_seconds
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(d["dataset"], d["learner"], int(d["repeat"]), int(d["bin"]),
                   MetricsRecord.from_dict(d), float(d.get("wall_time_seconds", 0.0)))


@dataclass(frozen=True)
class Failure:
    dataset: str
    learner: str
    repeat: int
    error: str


def standard_learners(names=("decision_tree", "random_forest", "linear_svm", "mlp", "mlp_weighted"),
                      params: dict | None = None) -> list[LearnerSpec]:
    """Learner specs from names; a ``_weighted`` suffix turns on class reweighting.

    ``params`` maps a learner kind to its parameter block.
    """
    out = []
    for name in names:
        weighted = name.endswith("_weighted")
        kind = learners.resolve_kind(name[: -len("_weighted")] if weighted else name)
        cfg = learners.TrainConfig(class_weighted=weighted, params=dict((params or {}).get(kind, {})))
        out.append(LearnerSpec(kind + ("_weighted" if weighted else ""), kind, cfg))
    return out


def _check_schema(train: Dataset, test: Dataset):
    if train.n_features != test.n_features or train.feature_names != test.feature_names:
        raise RigError(f"{train.name}: train and test feature schemas differ")


def run_experiment(plan: ExperimentPlan, failures: list | None = None) -> list[RunRecord]:
    """Fit every learner once per repeat on the shuffled training set and score each test bin.

    Repeat ``k`` uses seed ``base_seed + k`` for shuffling, binning and
    learner initialisation. A learner that fails to fit loses that repeat's
    records; the failure is logged and appended to ``failures`` if given.
    """
    for train, test in plan.datasets:
        _check_schema(train, test)
    records = []
    for train, test in plan.datasets:
        for rep in range(plan.n_repeats):
            seed = plan.base_seed + rep
            tr = shuffle(train, seed)
            te = shuffle(test, seed)
            bins = stratified_bins(te, plan.n_bins, seed)
            for spec in plan.learners:
                cfg = learners.TrainConfig(seed=seed, max_epochs=spec.config.max_epochs,
                                           patience=spec.config.patience,
                                           class_weighted=spec.config.class_weighted,
                                           params=spec.config.params)
                t0 = time.perf_counter()
                try:
                    model = learners.fit(spec.kind, tr, cfg)
                except (learners.TrainingError, ValueError, FloatingPointError) as exc:
                    log.warning("fit failed: %s / %s / repeat %d: %s", train.name, spec.name, rep, exc)
                    if failures is not None:
                        failures.append(Failure(train.name, spec.name, rep, str(exc)))
                    continue
                elapsed = time.perf_counter() - t0
                pred = model.predict(te.features)
                sc = model.score(te.features)
                for b in range(plan.n_bins):
                    idx = bins.bin_indices(b)
                    m = evaluate(te.labels[idx], pred[idx], sc[idx])
                    records.append(RunRecord(train.name, spec.name, rep, b, m, elapsed))
    return records


@dataclass(frozen=True)
class Aggregate:
    tables: dict[str, ResultTable]
    # (learner, metric) -> (median, iqr) over dataset-level medians; None if undefined
    summary: dict[tuple[str, str], tuple[float, float] | None]


def _median(values):
    vals = [v for v in values if v is not None]
    return float(np.median(vals)) if vals else None


def aggregate(records: list[RunRecord]) -> Aggregate:
    if not records:
        raise RigError("no records to aggregate")
    datasets = sorted({r.dataset for r in records})
    learner_names = sorted({r.learner for r in records})
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.dataset, r.learner), []).append(r)
    tables = {}
    summary = {}
    for metric in METRICS:
        cells = [[_median([getattr(r.metrics, metric) for r in groups.get((d, l), [])])
                  for l in learner_names] for d in datasets]
        tables[metric] = ResultTable.from_array(metric, datasets, learner_names, cells)
        for j, l in enumerate(learner_names):
            col = [row[j] for row in cells if row[j] is not None]
            summary[(l, metric)] = median_iqr(col) if col else None
    return Aggregate(tables, summary)


def write_records(records: list[RunRecord], path, with_time: bool = False) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(with_time), sort_keys=True) + "\n")


def read_records(path) -> list[RunRecord]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [RunRecord.from_dict(json.loads(ln)) for ln in lines if ln.strip()]
