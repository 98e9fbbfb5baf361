import numpy as np

from apps.datasets.splits import split_template
from apps.toynet.config import TrainConfig
from apps.toynet.network import predict
from apps.toynet.params import NetworkParams
from apps.classifiers.wnll import accuracy
from custom_tools.logger import custom_logger, record_event
from custom_tools.seeding import named_seed

from .evaluation import evaluate_wnll
from .reports import TrainingReport
from .stages import train_linear_stage, train_wnll_stage


def pass_split(train_y, config: TrainConfig, pass_index: int):
    """The template split of one pass; a pure function of (labels, seed, pass)."""
    return split_template(train_y, config.template_fraction, named_seed(config.seed, "split", pass_index))


def alternate_train(params: NetworkParams, train_X, train_y, config: TrainConfig, eval_data=None):
    """
    `config.passes` rounds of linear stage then WNLL stage, with a fresh
    template split at the start of each pass. `params` is updated in place.
    Returns (params, TrainingReport); with `eval_data` the report carries
    both accuracy curves and the final accuracies of both prediction modes.
    """
    train_X = np.asarray(train_X, dtype=np.float64)
    labels = np.asarray(getattr(train_y, "indices", train_y), dtype=np.int64)
    config.validate_for(params.n_classes)
    report = TrainingReport()
    split = None

    for pass_index in range(config.passes):
        split = pass_split(labels, config, pass_index)
        template = (train_X[split.template], labels[split.template])
        record_event("pass_start", pass_index=pass_index, template=int(split.template.size),
                     remainder=int(split.remainder.size))

        params, linear_report = train_linear_stage(params, train_X, labels, config, pass_index,
                                                   eval_data=eval_data, template=template)
        report.stages.append(linear_report)
        if config.wnll_epochs > 0:
            params, wnll_report = train_wnll_stage(params, train_X, labels, split, config, pass_index,
                                                   eval_data=eval_data)
            report.stages.append(wnll_report)
        custom_logger(f"Pass {pass_index + 1}/{config.passes} done", "INFO")

    report.template_ids = split.template
    if eval_data is not None:
        test_X, test_y = eval_data
        report.final_linear_accuracy = accuracy(predict(params, test_X), test_y)
        _, report.final_wnll_accuracy = evaluate_wnll(params, test_X, test_y, train_X[split.template],
                                                      labels[split.template], config,
                                                      template_batch=config.batch_wnll)
        record_event("final", linear_accuracy=report.final_linear_accuracy,
                     wnll_accuracy=report.final_wnll_accuracy)
    return params, report
