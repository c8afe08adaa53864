"""Confusion metrics, randomized 70/30 trials, and the experiment grid.

A trial stratified-splits the labeled feature sequences 70/30, trains a
fresh classifier on the train side, and scores the test side.  The grid
repeats that over window shape x window length x hidden size, re-extracting
features once per (shape, length) and reporting per-trial and mean
sensitivity / specificity / accuracy percentages (pathological is the
positive class).
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import numpy as np

from . import nnet
from .errors import InvalidFraction, LengthMismatch, SingleClassDataset
from .features import FeatureSequence, extract_sequence, normalize_sequence
from .ingest import AudioRecord, Label
from .rng import mix_seed
from .windows import WindowShape, WindowSpec, frame_matrix


@dataclass
class Confusion:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass
class Metrics:
    """Percentages in [0, 100]; None marks a ratio with a zero denominator."""

    sensitivity: float | None
    specificity: float | None
    accuracy: float | None


@dataclass
class TrialResult:
    confusion: Confusion
    metrics: Metrics
    predictions: np.ndarray
    labels: np.ndarray


@dataclass
class GridCell:
    shape: WindowShape
    length_label: int
    L: int
    alpha: float
    hidden: int
    trials: list[Metrics]
    mean: Metrics


def confusion(predictions, labels) -> Confusion:
    """Tally a confusion matrix; class 1 (pathological) is positive."""
    predictions = list(predictions)
    labels = list(labels)
    if len(predictions) != len(labels):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(labels)} labels")
    if not predictions:
        raise LengthMismatch("need at least one prediction")
    c = Confusion()
    for p, y in zip(predictions, labels):
        if y == 1:
            if p == 1:
                c.tp += 1
            else:
                c.fn += 1
        else:
            if p == 1:
                c.fp += 1
            else:
                c.tn += 1
    return c


def metrics(c: Confusion) -> Metrics:
    """Sens = TP/(TP+FN), Spec = TN/(TN+FP), Accu = (TP+TN)/total, as %."""
    sens = 100.0 * c.tp / (c.tp + c.fn) if c.tp + c.fn > 0 else None
    spec = 100.0 * c.tn / (c.tn + c.fp) if c.tn + c.fp > 0 else None
    accu = 100.0 * (c.tp + c.tn) / c.total if c.total > 0 else None
    return Metrics(sensitivity=sens, specificity=spec, accuracy=accu)


def split(dataset: list, train_fraction: float = 0.7,
          seed: int = 0) -> tuple[list, list]:
    """Stratified random split; per class, floor(n * fraction) goes to train."""
    if not (0.0 < train_fraction < 1.0):
        raise InvalidFraction(f"train_fraction must be in (0, 1), got {train_fraction}")
    by_class: dict[Label, list] = {}
    for item in dataset:
        by_class.setdefault(item.label, []).append(item)
    if len(by_class) < 2:
        raise SingleClassDataset("split needs examples of both classes")

    rng = np.random.default_rng(seed)
    train: list = []
    test: list = []
    for label in sorted(by_class, key=lambda l: l.value):
        items = by_class[label]
        n_train = int(len(items) * train_fraction)
        if n_train == 0 or n_train == len(items):
            raise InvalidFraction(
                f"fraction {train_fraction} leaves class {label.value!r} "
                f"with an empty train or test side")
        order = rng.permutation(len(items))
        train.extend(items[i] for i in order[:n_train])
        test.extend(items[i] for i in order[n_train:])
    return train, test


def run_trial(dataset: list[FeatureSequence], hidden: int,
              train_config: nnet.TrainConfig, seed: int) -> TrialResult:
    """One 70/30 split + train + test cycle, deterministic in the seed."""
    train_set, test_set = split(dataset, 0.7, seed=mix_seed(seed, 0))
    config = replace(train_config, seed=mix_seed(seed, 1))
    model, _ = nnet.train(train_set, hidden, config)

    predictions = np.array([nnet.predict(model, s) for s in test_set])
    labels = np.array([nnet.CLASS_INDEX[s.label] for s in test_set])
    c = confusion(predictions, labels)
    return TrialResult(confusion=c, metrics=metrics(c),
                       predictions=predictions, labels=labels)


def _mean_metrics(trials: list[Metrics]) -> Metrics:
    def mean_of(vals):
        present = [v for v in vals if v is not None]
        return float(np.mean(present)) if present else None

    return Metrics(
        sensitivity=mean_of([t.sensitivity for t in trials]),
        specificity=mean_of([t.specificity for t in trials]),
        accuracy=mean_of([t.accuracy for t in trials]),
    )


def extract_dataset(records: list[AudioRecord], spec: WindowSpec,
                    hop: int = 1, bins: int = 10) -> list[FeatureSequence]:
    """Frame + extract + normalize every record under one window config."""
    out = []
    for rec in records:
        frames, _ = frame_matrix(rec.samples, spec, hop)
        seq = extract_sequence(frames, bins=bins, signal_id=rec.id,
                               label=rec.label, window=spec, hop=hop)
        out.append(normalize_sequence(seq))
    return out


def run_grid(records: list[AudioRecord],
             shapes: list[WindowShape],
             lengths: list[int],
             hidden_sizes: list[int],
             trials: int = 30,
             base_seed: int = 0,
             hop: int = 1,
             alpha: float = 2.5,
             bins: int = 10,
             train_config: nnet.TrainConfig | None = None,
             jobs: int = 1) -> list[GridCell]:
    """Full experiment grid over shape x length x hidden size.

    Features are extracted once per (shape, length); only the split and
    training randomness vary across trials.  Per-trial seeds derive from
    base_seed and the cell/trial indices, so trials can run in parallel
    (jobs > 1) with bit-identical results.
    """
    if not (shapes and lengths and hidden_sizes and trials >= 1):
        raise ValueError("grid axes must be non-empty and trials >= 1")
    if train_config is None:
        train_config = nnet.TrainConfig()

    cells = []
    for si, shape in enumerate(shapes):
        for li, length in enumerate(lengths):
            spec = WindowSpec.from_nominal_length(shape, length, alpha)
            dataset = extract_dataset(records, spec, hop=hop, bins=bins)
            for hi, hidden in enumerate(hidden_sizes):
                seeds = [mix_seed(base_seed, si, li, hi, t) for t in range(trials)]
                if jobs > 1:
                    with ThreadPoolExecutor(max_workers=jobs) as pool:
                        results = list(pool.map(
                            lambda s: run_trial(dataset, hidden, train_config, s),
                            seeds))
                else:
                    results = [run_trial(dataset, hidden, train_config, s)
                               for s in seeds]
                trial_metrics = [r.metrics for r in results]
                cells.append(GridCell(
                    shape=shape, length_label=length, L=spec.L,
                    alpha=spec.alpha, hidden=hidden,
                    trials=trial_metrics,
                    mean=_mean_metrics(trial_metrics)))
    return cells


# ---------------------------------------------------------------------------
# Result files
# ---------------------------------------------------------------------------

_SHAPE_ORDER = {WindowShape.RECTANGULAR: 0, WindowShape.TRIANGULAR: 1,
                WindowShape.GAUSSIAN: 2}


def _round2(value: float | None) -> str:
    if value is None:
        return ""
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), ROUND_HALF_UP))


def emit_results(cells: list[GridCell], out_dir: str | Path) -> dict[str, Path]:
    """Write results.csv (per trial), summary.csv (per cell), figure5.csv
    (per shape x length, averaged over hidden sizes).  Values are rounded
    half-up to 2 decimals."""
    if not cells:
        raise ValueError("no grid cells to write")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ordered = sorted(cells, key=lambda c: (_SHAPE_ORDER[c.shape],
                                           c.length_label, c.hidden))

    results_path = out_dir / "results.csv"
    with open(results_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["shape", "length_label", "L", "alpha", "hidden",
                         "trial", "sens", "spec", "accu"])
        for cell in ordered:
            for t, m in enumerate(cell.trials):
                writer.writerow([cell.shape.value, cell.length_label, cell.L,
                                 cell.alpha, cell.hidden, t,
                                 _round2(m.sensitivity), _round2(m.specificity),
                                 _round2(m.accuracy)])

    summary_path = out_dir / "summary.csv"
    with open(summary_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["shape", "length_label", "L", "alpha", "hidden",
                         "trials", "sens", "spec", "accu"])
        for cell in ordered:
            writer.writerow([cell.shape.value, cell.length_label, cell.L,
                             cell.alpha, cell.hidden, len(cell.trials),
                             _round2(cell.mean.sensitivity),
                             _round2(cell.mean.specificity),
                             _round2(cell.mean.accuracy)])

    figure5_path = out_dir / "figure5.csv"
    with open(figure5_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["shape", "length_label", "sens", "spec", "accu"])
        seen: dict[tuple, list[Metrics]] = {}
        for cell in ordered:
            seen.setdefault((cell.shape, cell.length_label), []).append(cell.mean)
        for (shape, length), means in seen.items():
            m = _mean_metrics(means)
            writer.writerow([shape.value, length, _round2(m.sensitivity),
                             _round2(m.specificity), _round2(m.accuracy)])

    return {"results": results_path, "summary": summary_path,
            "figure5": figure5_path}
