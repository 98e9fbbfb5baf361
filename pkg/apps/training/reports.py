import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

LINEAR = "linear"
WNLL = "wnll"

STAGE_COLUMNS = ("pass", "stage", "epochs", "steps", "skipped_batches", "final_loss", "final_lr",
                 "linear_accuracy", "wnll_accuracy")
CURVE_COLUMNS = ("step", "pass", "stage", "epoch", "loss", "lr", "linear_accuracy", "wnll_accuracy")


def _cell(value) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


@dataclass
class StageReport:
    """
    One stage of one pass. Accuracy lists are empty when no evaluation set
    was given; entries are None for epochs where that curve was not tracked.
    """
    stage: str
    pass_index: int
    epochs: int = 0
    losses: List[float] = field(default_factory=list)
    learning_rates: List[float] = field(default_factory=list)
    linear_accuracy: List[Optional[float]] = field(default_factory=list)
    wnll_accuracy: List[Optional[float]] = field(default_factory=list)
    steps: int = 0
    skipped_batches: int = 0

    def record_epoch(self, loss: float, lr: float, linear_acc=None, wnll_acc=None, tracked: bool = False):
        self.epochs += 1
        self.losses.append(float(loss))
        self.learning_rates.append(float(lr))
        if tracked:
            self.linear_accuracy.append(linear_acc)
            self.wnll_accuracy.append(wnll_acc)

    @property
    def final_loss(self) -> Optional[float]:
        return self.losses[-1] if self.losses else None

    def summary_cells(self):
        final = lambda values: values[-1] if values else None
        return [self.pass_index, self.stage, self.epochs, self.steps, self.skipped_batches,
                _cell(self.final_loss), _cell(final(self.learning_rates)),
                _cell(final(self.linear_accuracy)), _cell(final(self.wnll_accuracy))]


@dataclass
class TrainingReport:
    stages: List[StageReport] = field(default_factory=list)
    template_ids: Optional[np.ndarray] = None
    final_linear_accuracy: Optional[float] = None
    final_wnll_accuracy: Optional[float] = None

    def stages_of(self, stage: str) -> List[StageReport]:
        return [report for report in self.stages if report.stage == stage]

    def curve_rows(self):
        step = 0
        for report in self.stages:
            for epoch in range(report.epochs):
                linear = report.linear_accuracy[epoch] if epoch < len(report.linear_accuracy) else None
                wnll = report.wnll_accuracy[epoch] if epoch < len(report.wnll_accuracy) else None
                yield [step, report.pass_index, report.stage, epoch, _cell(report.losses[epoch]),
                       _cell(report.learning_rates[epoch]), _cell(linear), _cell(wnll)]
                step += 1


def _write(path, columns, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    return path


def write_stage_reports(report: TrainingReport, path) -> Path:
    return _write(path, STAGE_COLUMNS, (stage.summary_cells() for stage in report.stages))


def write_curves(report: TrainingReport, path) -> Path:
    return _write(path, CURVE_COLUMNS, report.curve_rows())
