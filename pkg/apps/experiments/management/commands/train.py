import json
from dataclasses import fields

import numpy as np

from apps.experiments.bases import ExperimentCommand, resolve_config, write_run_config
from apps.experiments.datasets import add_dataset_arguments, load_dataset
from apps.toynet.checkpoint import save_checkpoint
from apps.toynet.config import TrainConfig
from apps.toynet.params import init_network
from apps.training.procedure import alternate_train
from apps.training.reports import LINEAR, WNLL, write_curves, write_stage_reports
from custom_tools.exceptions import WnllLabError
from custom_tools.logger import custom_logger
from custom_tools.seeding import named_seed

CHECKPOINT = 'model.tnet'


class Command(ExperimentCommand):
    help = 'Alternating linear/WNLL training of the toy network; writes a checkpoint and curves'
    command_name = 'train'

    def add_experiment_arguments(self, parser):
        add_dataset_arguments(parser, n_train=400, n_test=400)
        parser.add_argument('--config', help='key=value file with training keys (passes, lr, ...)')
        for field in fields(TrainConfig):
            if field.name == 'seed':
                continue
            parser.add_argument(f"--{field.name.replace('_', '-')}", dest=field.name,
                                help=f"Override '{field.name}'" + (' (on/off)' if field.type is bool else ''))

    def run(self, options, out_dir):
        defaults = TrainConfig.from_settings(seed=options['seed']).as_strings()
        flags = {key: options.get(key) for key in defaults if key != 'seed'}
        resolved = resolve_config(defaults, options.get('config'), flags)
        resolved['seed'] = str(options['seed'])
        config = TrainConfig.from_settings(**resolved)

        data = load_dataset(options, config.seed)
        config.validate_for(data.n_classes)
        run_values = {**config.as_strings(), 'dataset': options['dataset'], 'n_train': options['n_train'],
                      'n_test': options['n_test']}
        write_run_config(out_dir, self.command_name, run_values)

        spec = config.layer_spec(data.train_X.shape[1], data.n_classes)
        params = init_network(spec, named_seed(config.seed, "init"))
        try:
            params, report = alternate_train(params, data.train_X, data.train_y, config,
                                             eval_data=(data.test_X, data.test_y))
        except WnllLabError as exc:
            keep = getattr(exc, 'last_good', None) or params
            partial = save_checkpoint(keep, out_dir / f"{CHECKPOINT}.partial")
            custom_logger(f"Training failed; partial checkpoint kept at {partial}", "ERROR")
            raise

        save_checkpoint(params, out_dir / CHECKPOINT)
        write_stage_reports(report, out_dir / 'stages.csv')
        write_curves(report, out_dir / 'curves.csv')
        np.savetxt(out_dir / 'template_ids.csv', report.template_ids, fmt='%d', header='index', comments='')
        summary = {
            'linear_accuracy': round(report.final_linear_accuracy, 6),
            'wnll_accuracy': round(report.final_wnll_accuracy, 6),
            'linear_stages': len(report.stages_of(LINEAR)),
            'wnll_stages': len(report.stages_of(WNLL)),
            'layer_spec': list(spec),
        }
        (out_dir / 'summary.json').write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding='utf-8')
        return (f"final linear accuracy {report.final_linear_accuracy:.4f}, "
                f"WNLL accuracy {report.final_wnll_accuracy:.4f} ({len(report.stages)} stages)")
