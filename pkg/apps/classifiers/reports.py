"""Comparison rows written by `table1`, as CSV and as JSON."""
import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

COLUMNS = ("dataset", "method", "n_train", "n_test", "k", "r", "accuracy", "wall_time_ms")


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    method: str
    n_train: int
    n_test: int
    k: int
    r: int
    accuracy: float
    wall_time_ms: int = 0

    def cells(self):
        values = asdict(self)
        values["accuracy"] = f"{self.accuracy:.6f}"
        return [values[column] for column in COLUMNS]


def write_report_csv(rows: Iterable[ReportRow], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow(row.cells())
    return path


def write_report_json(rows: Iterable[ReportRow], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [{**asdict(row), "accuracy": round(row.accuracy, 6)} for row in rows]
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
