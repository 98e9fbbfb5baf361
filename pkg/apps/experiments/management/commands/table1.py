import time

from django.conf import settings

from apps.classifiers.reports import ReportRow, write_report_csv, write_report_json
from apps.classifiers.softmax import predict_softmax, train_softmax
from apps.classifiers.wnll import accuracy, batched_vote, wnll_classify
from apps.experiments.bases import ExperimentCommand, resolve_config, write_run_config
from apps.experiments.datasets import add_dataset_arguments, load_dataset
from apps.solvers.export import write_solution_csv
from custom_tools.logger import custom_logger, record_event


class Command(ExperimentCommand):
    help = 'Compare softmax regression with WNLL interpolation on raw features (two-row accuracy table)'
    command_name = 'table1'

    def add_experiment_arguments(self, parser):
        add_dataset_arguments(parser)
        parser.add_argument('--config', help='key=value file with k, r, epochs, lr, batch')
        parser.add_argument('--k', type=int, help='Neighbours per point')
        parser.add_argument('--r', type=int, help='Neighbour rank whose distance sets sigma')
        parser.add_argument('--epochs', type=int, help='Softmax training epochs')
        parser.add_argument('--lr', type=float, help='Softmax learning rate')
        parser.add_argument('--batch', type=int, help='Softmax mini-batch size (0 = full batch)')
        parser.add_argument('--template-batch', type=int,
                            help='Also run batched voting with template batches of this size')
        parser.add_argument('--min-accuracy', type=float, help='Exit 1 when WNLL accuracy is below this')
        parser.add_argument('--min-gap', type=float,
                            help='Exit 1 when WNLL beats softmax by less than this many points')
        parser.add_argument('--record-timings', action='store_true',
                            help='Fill wall_time_ms (reports are then no longer byte-reproducible)')

    def run(self, options, out_dir):
        defaults = {
            'k': settings.WNLL_KNN_K,
            'r': settings.WNLL_SIGMA_RANK,
            'epochs': settings.WNLL_SOFTMAX_EPOCHS,
            'lr': settings.WNLL_SOFTMAX_LR,
            'batch': settings.WNLL_SOFTMAX_BATCH,
        }
        resolved = resolve_config(defaults, options.get('config'),
                                  {key: options.get(key) for key in defaults})
        k, r = int(resolved['k']), int(resolved['r'])
        resolved.update(dataset=options['dataset'], n_train=options['n_train'], n_test=options['n_test'],
                        seed=options['seed'], template_batch=options.get('template_batch') or 0)
        data = load_dataset(options, options['seed'])
        write_run_config(out_dir, self.command_name, resolved)

        timed = options['record_timings']
        rows = []

        def row(method, predictions, started):
            elapsed = int(round((time.perf_counter() - started) * 1000)) if timed else 0
            score = accuracy(predictions, data.test_y)
            rows.append(ReportRow(data.name, method, len(data.train_y), len(data.test_y), k, r, score, elapsed))
            record_event("table1_row", method=method, accuracy=score)
            custom_logger(f"{method}: accuracy {score:.4f}")
            return score

        started = time.perf_counter()
        model = train_softmax(data.train_X, data.train_y, epochs=int(resolved['epochs']),
                              lr=float(resolved['lr']), seed=options['seed'], batch_size=int(resolved['batch']),
                              n_classes=data.n_classes)
        softmax_acc = row('softmax', predict_softmax(model, data.test_X), started)

        started = time.perf_counter()
        predictions, scores = wnll_classify(data.train_X, data.train_y, data.test_X, k=k, r=r,
                                            n_classes=data.n_classes, return_scores=True)
        wnll_acc = row('wnll', predictions, started)
        write_solution_csv(scores, out_dir / 'wnll_scores.csv')

        if options.get('template_batch'):
            started = time.perf_counter()
            predictions, _ = batched_vote(data.train_X, data.train_y, data.test_X, options['template_batch'],
                                          options['seed'], k=k, r=r, n_classes=data.n_classes)
            row('wnll_batched', predictions, started)

        write_report_csv(rows, out_dir / 'table1.csv')
        write_report_json(rows, out_dir / 'table1.json')

        gap = 100.0 * (wnll_acc - softmax_acc)
        min_gap = options['min_gap'] if options.get('min_gap') is not None else settings.WNLL_TABLE1_MIN_GAP
        if options.get('min_accuracy') is not None and wnll_acc < options['min_accuracy']:
            self.fail_acceptance(f"WNLL accuracy {wnll_acc:.4f} is below {options['min_accuracy']}")
        enforce_gap = options.get('min_gap') is not None or settings.WNLL_TABLE1_MIN_GAP > 0
        if enforce_gap and gap < min_gap:
            self.fail_acceptance(f"WNLL leads softmax by {gap:.2f} points, need {min_gap}")
        return f"softmax {100 * softmax_acc:.2f}%  wnll {100 * wnll_acc:.2f}%  (gap {gap:+.2f} points)"
