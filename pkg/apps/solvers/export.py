import csv
from pathlib import Path

import numpy as np

from .interpolation import predict_labels


def write_solution_csv(solution, path, index_map=None) -> Path:
    """
    `index, score_0..score_{C-1}, predicted` per row; `index_map` maps rows to
    global ids. Accepts a HarmonicSolution or a bare n x C score array.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    scores = np.asarray(getattr(solution, "scores", solution))
    ids = np.arange(scores.shape[0]) if index_map is None else np.asarray(index_map)
    predicted = predict_labels(solution)
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["index"] + [f"score_{c}" for c in range(scores.shape[1])] + ["predicted"])
        for index, row, label in zip(ids, scores, predicted):
            writer.writerow([int(index)] + [f"{value:.12g}" for value in row] + [int(label)])
    return path
