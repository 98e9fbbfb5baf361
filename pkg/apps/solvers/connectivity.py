from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.sparse import csgraph

from .problems import weight_matrix


@dataclass(frozen=True)
class ComponentReport:
    """Connected components of w + w^T and the ones no template point reaches."""
    n_components: int
    component_of: np.ndarray
    uncovered: List[np.ndarray]

    @property
    def covered(self) -> bool:
        return not self.uncovered


def check_connectivity(graph, template_ids) -> ComponentReport:
    weights = weight_matrix(graph)
    # Undirected labelling is the same as labelling w + w^T.
    n_components, component_of = csgraph.connected_components(weights, directed=True, connection="weak")
    covered = np.zeros(n_components, dtype=bool)
    covered[component_of[np.asarray(template_ids, dtype=np.int64)]] = True

    uncovered = [np.flatnonzero(component_of == c) for c in np.flatnonzero(~covered)]
    uncovered.sort(key=lambda members: int(members[0]))
    return ComponentReport(n_components=int(n_components), component_of=component_of, uncovered=uncovered)
