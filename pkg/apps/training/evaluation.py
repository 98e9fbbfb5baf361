from typing import Optional, Tuple

import numpy as np

from apps.classifiers.wnll import accuracy, batched_vote, wnll_classify
from apps.toynet.config import TrainConfig
from apps.toynet.network import embed
from apps.toynet.params import NetworkParams


def evaluate_wnll(params: NetworkParams, test_X, test_y, template_X, template_y, config: TrainConfig,
                  template_batch: Optional[int] = None, seed: int = 0) -> Tuple[np.ndarray, Optional[float]]:
    """
    Predict the test rows by WNLL interpolation in buffer-feature space; the
    linear head is not used. `template_batch` switches to batched voting when
    the template is larger than one batch. Accuracy is None without `test_y`.
    """
    template_y = np.asarray(getattr(template_y, "indices", template_y), dtype=np.int64)
    n_classes = params.n_classes
    test_features = embed(params, test_X)
    template_features = embed(params, template_X)

    if template_batch and template_batch < template_y.size:
        predictions, _ = batched_vote(template_features, template_y, test_features, template_batch, seed,
                                      k=config.knn_k, r=config.sigma_rank, n_classes=n_classes,
                                      uncovered="uniform")
    else:
        predictions = wnll_classify(template_features, template_y, test_features, k=config.knn_k,
                                    r=config.sigma_rank, n_classes=n_classes, uncovered="uniform")

    score = None if test_y is None else accuracy(predictions, test_y)
    return predictions, score
