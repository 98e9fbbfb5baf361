import csv
import json

import numpy as np

from apps.datasets.exceptions import DatasetError
from apps.experiments.bases import ExperimentCommand, write_run_config
from apps.experiments.datasets import add_dataset_arguments, load_dataset
from apps.toynet.checkpoint import load_checkpoint
from apps.toynet.config import TrainConfig
from apps.training.evaluation import evaluate_wnll


def read_template_ids(path) -> np.ndarray:
    try:
        ids = np.loadtxt(path, dtype=np.int64, skiprows=1, ndmin=1)
    except (OSError, ValueError) as exc:
        raise DatasetError(f"{path}: cannot read template ids ({exc})") from None
    return ids


class Command(ExperimentCommand):
    help = 'Predict with a trained checkpoint by WNLL interpolation from a template (linear head unused)'
    command_name = 'eval'

    def add_experiment_arguments(self, parser):
        add_dataset_arguments(parser, n_train=400, n_test=400)
        parser.add_argument('--checkpoint', required=True, help='Checkpoint written by the train command')
        parser.add_argument('--template-ids', help='template_ids.csv from a train run (default: all training points)')
        parser.add_argument('--template-batch', type=int, help='Batched voting with template batches of this size')
        parser.add_argument('--on-template', action='store_true',
                            help='Evaluate the template points themselves instead of the test set')
        parser.add_argument('--knn-k', type=int, help='Neighbours per point in feature space')
        parser.add_argument('--sigma-rank', type=int, help='Neighbour rank whose distance sets sigma')

    def run(self, options, out_dir):
        overrides = {key: options[key] for key in ('knn_k', 'sigma_rank') if options.get(key) is not None}
        config = TrainConfig.from_settings(seed=options['seed'], **overrides)
        params = load_checkpoint(options['checkpoint'])
        data = load_dataset(options, options['seed'])

        template = np.arange(len(data.train_y))
        if options.get('template_ids'):
            template = read_template_ids(options['template_ids'])
            if template.size == 0 or template.min() < 0 or template.max() >= len(data.train_y):
                raise DatasetError(f"{options['template_ids']}: template ids outside the training set")
        template_X, template_y = data.train_X[template], data.train_y.indices[template]
        test_X, test_y = (template_X, template_y) if options['on_template'] else (data.test_X, data.test_y.indices)

        write_run_config(out_dir, self.command_name, {
            'checkpoint': options['checkpoint'], 'dataset': options['dataset'], 'knn_k': config.knn_k,
            'sigma_rank': config.sigma_rank, 'template': int(template.size),
            'template_batch': options.get('template_batch') or 0, 'on_template': options['on_template'],
            'seed': options['seed'],
        })
        predictions, score = evaluate_wnll(params, test_X, test_y, template_X, template_y, config,
                                           template_batch=options.get('template_batch'), seed=options['seed'])

        with open(out_dir / 'predictions.csv', 'w', newline='', encoding='utf-8') as stream:
            writer = csv.writer(stream, lineterminator='\n')
            writer.writerow(['index', 'predicted', 'truth'])
            writer.writerows(zip(range(predictions.size), predictions.tolist(), np.asarray(test_y).tolist()))
        summary = {'accuracy': round(score, 6), 'n_test': int(predictions.size), 'template': int(template.size)}
        (out_dir / 'summary.json').write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding='utf-8')
        return f"WNLL accuracy {score:.4f} on {predictions.size} points"
