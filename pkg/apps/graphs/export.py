import csv
from pathlib import Path


def write_edge_list(graph, path) -> int:
    """Write `i,j,dist2,w` for every directed edge in row order; returns the edge count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    weights = graph.weights.tocoo()
    sq = graph.sq_distances.tocoo()
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["i", "j", "dist2", "w"])
        for i, j, d2, w in zip(weights.row, weights.col, sq.data, weights.data):
            writer.writerow([int(i), int(j), repr(float(d2)), repr(float(w))])
    return int(weights.nnz)
